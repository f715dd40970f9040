#include "esr/envs/stock.hpp"

#include <string>

namespace esr::envs {

StockMdpParams StockMdpParams::from(const ParamMap& params) {
    StockMdpParams p;
    p.horizon = static_cast<int>(get_int(params, "horizon", p.horizon));
    for (std::size_t i = 0; i < kStocks; ++i) {
        const std::string prefix = "stock." + std::to_string(i) + ".";
        p.stocks[i].p_profit = get_double(params, prefix + "p", p.stocks[i].p_profit);
        p.stocks[i].gain = get_double(params, prefix + "gain", p.stocks[i].gain);
        p.stocks[i].loss = get_double(params, prefix + "loss", p.stocks[i].loss);
    }
    p.validate();
    return p;
}

void StockMdpParams::validate() const {
    if (horizon < 1) throw ConfigError("stock horizon must be >= 1");
    for (std::size_t i = 0; i < kStocks; ++i) {
        const auto& s = stocks[i];
        if (!(s.p_profit >= 0.0 && s.p_profit <= 1.0)) {
            throw ConfigError("stock " + std::to_string(i) + ": profit probability must lie in [0, 1]");
        }
        if (!(s.gain >= 0.0) || !(s.loss >= 0.0)) {
            throw ConfigError("stock " + std::to_string(i) + ": gain and loss multipliers must be >= 0");
        }
    }
}

double StockMdpParams::uniform_policy_expected_return() const {
    constexpr double mean_amount = (0.0 + 1.0 + 2.0 + 3.0) / 4.0;
    double total = 0.0;
    for (int t = 0; t < horizon; ++t) {
        const auto& s = stocks[static_cast<std::size_t>(t) % kStocks];
        total += mean_amount * (s.p_profit * s.gain - (1.0 - s.p_profit) * s.loss);
    }
    return total;
}

double StockMdpParams::minimum_return() const {
    double total = 0.0;
    for (int t = 0; t < horizon; ++t) {
        const auto& s = stocks[static_cast<std::size_t>(t) % kStocks];
        if (s.p_profit < 1.0) total -= 3.0 * s.loss;
    }
    return total;
}

StockMdp::StockMdp(StockMdpParams params) : params_(params) { params_.validate(); }

StepResult StockMdp::step(StateId state, std::size_t action, Rng& rng) const {
    if (action >= StockMdpParams::kActions) throw UsageError("stock action must be an amount in 0..3");
    const StockLaw& law = params_.stocks[stock_of(state)];
    const double movement = rng.bernoulli(law.p_profit) ? law.gain : -law.loss;
    StepResult out;
    out.reward = ReturnVector{static_cast<double>(action) * movement};
    out.next_state = state + 1;
    out.terminal = static_cast<int>(out.next_state) >= params_.horizon;
    return out;
}

std::string StockMdp::describe_state(StateId state) const {
    return "t=" + std::to_string(state) + " stock=" + std::to_string(stock_of(state));
}

}  // namespace esr::envs

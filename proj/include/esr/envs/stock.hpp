#pragma once

#include <array>
#include <vector>

#include "esr/config.hpp"
#include "esr/core.hpp"

namespace esr::envs {

/// Price-movement law of one stock: +gain per euro with probability p_profit,
/// otherwise -loss per euro.
struct StockLaw {
    double p_profit = 0.5;
    double gain = 1.0;
    double loss = 1.0;
};

/// Risk-aware investment MDP: 7 stocks visited in a fixed cycle (stock t mod 7 at
/// timestep t); each step the agent invests 0, 1, 2 or 3 euros in the current stock.
///
/// The shipped default law (see data/stock_default.cfg) is a documented stand-in:
/// with horizon 25 and loss 2, the worst possible episode return is exactly -150.
struct StockMdpParams {
    static constexpr std::size_t kStocks = 7;
    static constexpr std::size_t kActions = 4;

    std::array<StockLaw, kStocks> stocks{{
        {0.70, 2.0, 2.0},
        {0.40, 5.0, 2.0},
        {0.90, 1.2, 2.0},
        {0.60, 3.0, 2.0},
        {0.25, 9.0, 2.0},
        {0.95, 1.0, 2.0},
        {0.50, 3.6, 2.0},
    }};
    int horizon = 25;

    /// Keys: horizon, stock.<i>.p, stock.<i>.gain, stock.<i>.loss (i in 0..6).
    static StockMdpParams from(const ParamMap& params);
    void validate() const;

    /// Expected episode return when every amount is drawn uniformly at random.
    double uniform_policy_expected_return() const;
    /// Smallest achievable episode return (always investing 3 and always losing).
    double minimum_return() const;
};

class StockMdp final : public EnvironmentModel {
public:
    explicit StockMdp(StockMdpParams params = {});

    std::string name() const override { return "stock"; }
    std::size_t objectives() const override { return 1; }
    int horizon() const override { return params_.horizon; }
    StateId initial_state() const override { return 0; }
    std::size_t num_actions(StateId) const override { return StockMdpParams::kActions; }
    bool is_terminal(StateId state) const override { return static_cast<int>(state) >= params_.horizon; }
    StepResult step(StateId state, std::size_t action, Rng& rng) const override;
    std::string describe_state(StateId state) const override;

    static std::size_t stock_of(StateId state) { return static_cast<std::size_t>(state % StockMdpParams::kStocks); }
    const StockMdpParams& params() const { return params_; }

private:
    StockMdpParams params_;
};

}  // namespace esr::envs

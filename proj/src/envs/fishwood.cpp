#include "esr/envs/fishwood.hpp"

#include <algorithm>
#include <vector>

namespace esr::envs {

FishwoodParams FishwoodParams::from(const ParamMap& params) {
    FishwoodParams p;
    p.p_fish = get_double(params, "p_fish", p.p_fish);
    p.p_wood = get_double(params, "p_wood", p.p_wood);
    p.horizon = static_cast<int>(get_int(params, "horizon", p.horizon));
    p.validate();
    return p;
}

void FishwoodParams::validate() const {
    if (!(p_fish >= 0.0 && p_fish <= 1.0)) throw ConfigError("fishwood p_fish must lie in [0, 1]");
    if (!(p_wood >= 0.0 && p_wood <= 1.0)) throw ConfigError("fishwood p_wood must lie in [0, 1]");
    if (horizon < 1) throw ConfigError("fishwood horizon must be >= 1");
}

Fishwood::Fishwood(FishwoodParams params) : params_(params) { params_.validate(); }

StepResult Fishwood::step(StateId state, std::size_t action, Rng& rng) const {
    if (action > go_woods) throw UsageError("fishwood action must be 0 (river) or 1 (woods)");
    const int t = timestep(state);
    StepResult out;
    out.reward = ReturnVector{0.0, 0.0};
    if (action == go_river) {
        if (rng.bernoulli(params_.p_fish)) out.reward[0] = 1.0;
        out.next_state = encode(t + 1, river);
    } else {
        if (rng.bernoulli(params_.p_wood)) out.reward[1] = 1.0;
        out.next_state = encode(t + 1, woods);
    }
    out.terminal = t + 1 >= params_.horizon;
    return out;
}

std::string Fishwood::describe_state(StateId state) const {
    return "t=" + std::to_string(timestep(state)) + (location(state) == river ? " river" : " woods");
}

namespace {

// Value table over (steps remaining, extra fish, extra wood). The location never
// influences rewards or transitions, so it drops out of the augmented state.
class FishwoodDp {
public:
    FishwoodDp(const FishwoodParams& params, const UtilitySpec& spec, int remaining, int fish, int wood,
               std::size_t max_states)
        : params_(params), spec_(spec), remaining_(remaining), fish_(fish), wood_(wood) {
        if (remaining < 0) throw UsageError("fishwood DP: remaining steps must be >= 0");
        const auto side = static_cast<std::size_t>(remaining) + 1;
        if (side > max_states / side / side) {
            throw UsageError("fishwood DP: state space of " + std::to_string(side * side * side) +
                             " entries exceeds the guard");
        }
        side_ = side;
        values_.assign(side * side * side, 0.0);
        for (int r = 0; r <= remaining; ++r) {
            for (int df = 0; df <= remaining - r; ++df) {
                for (int dw = 0; dw <= remaining - r - df; ++dw) {
                    at(r, df, dw) = r == 0 ? terminal(df, dw) : std::max(q(r, df, dw, 0), q(r, df, dw, 1));
                }
            }
        }
    }

    double value() const { return values_[index(remaining_, 0, 0)]; }

    double q(int r, int df, int dw, std::size_t action) const {
        if (action == Fishwood::go_river) {
            return params_.p_fish * values_[index(r - 1, df + 1, dw)] +
                   (1.0 - params_.p_fish) * values_[index(r - 1, df, dw)];
        }
        return params_.p_wood * values_[index(r - 1, df, dw + 1)] +
               (1.0 - params_.p_wood) * values_[index(r - 1, df, dw)];
    }

private:
    double terminal(int df, int dw) const { return eval_utility(spec_, ReturnVector{double(fish_ + df), double(wood_ + dw)}); }
    std::size_t index(int r, int df, int dw) const {
        return (static_cast<std::size_t>(r) * side_ + static_cast<std::size_t>(df)) * side_ +
               static_cast<std::size_t>(dw);
    }
    double& at(int r, int df, int dw) { return values_[index(r, df, dw)]; }

    const FishwoodParams& params_;
    const UtilitySpec& spec_;
    int remaining_;
    int fish_;
    int wood_;
    std::size_t side_ = 0;
    std::vector<double> values_;
};

}  // namespace

double fishwood_optimal_esr(const FishwoodParams& params, const UtilitySpec& spec, std::size_t max_states) {
    params.validate();
    return FishwoodDp(params, spec, params.horizon, 0, 0, max_states).value();
}

double fishwood_optimal_value(const FishwoodParams& params, const UtilitySpec& spec, int remaining, int fish,
                              int wood) {
    return FishwoodDp(params, spec, remaining, fish, wood, 50'000'000).value();
}

std::size_t fishwood_optimal_action(const FishwoodParams& params, const UtilitySpec& spec, int remaining, int fish,
                                    int wood) {
    if (remaining < 1) throw UsageError("fishwood_optimal_action needs at least one remaining step");
    FishwoodDp dp(params, spec, remaining, fish, wood, 50'000'000);
    return dp.q(remaining, 0, 0, Fishwood::go_woods) > dp.q(remaining, 0, 0, Fishwood::go_river)
               ? Fishwood::go_woods
               : Fishwood::go_river;
}

double fishwood_uniform_esr(const FishwoodParams& params, const UtilitySpec& spec) {
    params.validate();
    const int h = params.horizon;
    // dist[f][w]: probability of having f fish and w wood after the steps so far.
    std::vector<std::vector<double>> dist(h + 1, std::vector<double>(h + 1, 0.0));
    dist[0][0] = 1.0;
    for (int t = 0; t < h; ++t) {
        std::vector<std::vector<double>> next(h + 1, std::vector<double>(h + 1, 0.0));
        for (int f = 0; f <= t; ++f) {
            for (int w = 0; w + f <= t; ++w) {
                const double p = dist[f][w];
                if (p == 0.0) continue;
                next[f + 1][w] += 0.5 * p * params.p_fish;
                next[f][w] += 0.5 * p * (1.0 - params.p_fish);
                next[f][w + 1] += 0.5 * p * params.p_wood;
                next[f][w] += 0.5 * p * (1.0 - params.p_wood);
            }
        }
        dist = std::move(next);
    }
    double value = 0.0;
    for (int f = 0; f <= h; ++f) {
        for (int w = 0; w + f <= h; ++w) {
            if (dist[f][w] != 0.0) value += dist[f][w] * eval_utility(spec, ReturnVector{double(f), double(w)});
        }
    }
    return value;
}

}  // namespace esr::envs

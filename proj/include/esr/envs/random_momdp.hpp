#pragma once

#include <cstdint>
#include <vector>

#include "esr/config.hpp"
#include "esr/core.hpp"

namespace esr::envs {

struct RandomMomdpParams {
    std::uint64_t seed = 1;
    std::size_t states = 20;
    std::size_t actions = 2;
    std::size_t objectives = 2;
    std::size_t successors = 8;
    int horizon = 10;

    static RandomMomdpParams from(const ParamMap& params);
    void validate() const;
};

/// Seeded random MOMDP. Every (s, a) reaches `successors` distinct states with
/// normalised uniform probabilities; every (s, a, s') carries a fixed reward
/// vector drawn uniformly from [0, 1]^objectives at build time.
class RandomMomdp final : public EnvironmentModel {
public:
    struct Outcome {
        std::size_t next = 0;
        double probability = 0.0;
        ReturnVector reward;
    };

    std::string name() const override { return "random-momdp"; }
    std::size_t objectives() const override { return params_.objectives; }
    int horizon() const override { return params_.horizon; }
    StateId initial_state() const override { return 0; }
    std::size_t num_actions(StateId) const override { return params_.actions; }
    bool is_terminal(StateId state) const override { return timestep(state) >= params_.horizon; }
    StepResult step(StateId state, std::size_t action, Rng& rng) const override;
    std::string describe_state(StateId state) const override;

    int timestep(StateId state) const { return static_cast<int>(state / params_.states); }
    std::size_t base_state(StateId state) const { return static_cast<std::size_t>(state % params_.states); }

    const std::vector<Outcome>& outcomes(std::size_t s, std::size_t a) const {
        return table_[s * params_.actions + a];
    }
    const RandomMomdpParams& params() const { return params_; }

private:
    friend RandomMomdp random_momdp_build(const RandomMomdpParams& params);
    RandomMomdp() = default;

    RandomMomdpParams params_;
    std::vector<std::vector<Outcome>> table_;
};

/// Deterministic given params.seed. Throws UsageError when successors > states.
RandomMomdp random_momdp_build(const RandomMomdpParams& params);

}  // namespace esr::envs

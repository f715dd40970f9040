#pragma once

#include "esr/config.hpp"
#include "esr/core.hpp"
#include "esr/utility.hpp"

namespace esr::envs {

/// Two locations, two objectives [fish, wood]. Each step the agent moves to the
/// chosen location and may collect that location's resource.
struct FishwoodParams {
    double p_fish = 0.25;
    double p_wood = 0.65;
    int horizon = 13;

    static FishwoodParams from(const ParamMap& params);
    void validate() const;
};

class Fishwood final : public EnvironmentModel {
public:
    enum Location : std::size_t { river = 0, woods = 1 };
    enum Action : std::size_t { go_river = 0, go_woods = 1 };

    explicit Fishwood(FishwoodParams params = {});

    std::string name() const override { return "fishwood"; }
    std::size_t objectives() const override { return 2; }
    int horizon() const override { return params_.horizon; }
    StateId initial_state() const override { return encode(0, woods); }
    std::size_t num_actions(StateId) const override { return 2; }
    bool is_terminal(StateId state) const override { return timestep(state) >= params_.horizon; }
    StepResult step(StateId state, std::size_t action, Rng& rng) const override;
    bool integer_rewards() const override { return true; }
    std::string describe_state(StateId state) const override;

    static StateId encode(int t, Location loc) { return static_cast<StateId>(t) * 2 + loc; }
    static int timestep(StateId state) { return static_cast<int>(state / 2); }
    static Location location(StateId state) { return static_cast<Location>(state % 2); }

    const FishwoodParams& params() const { return params_; }

private:
    FishwoodParams params_;
};

/// Exact maximal expected utility from the start state, by backward induction over
/// (timestep, fish, wood, location). Throws UsageError when the augmented state
/// space would exceed `max_states`.
double fishwood_optimal_esr(const FishwoodParams& params, const UtilitySpec& spec,
                            std::size_t max_states = 50'000'000);

/// Optimal expected utility from an arbitrary point of an episode, i.e. with
/// `fish`/`wood` already accrued and `remaining` steps left.
double fishwood_optimal_value(const FishwoodParams& params, const UtilitySpec& spec, int remaining, int fish,
                              int wood);

/// Best first action at that point (lowest index on ties).
std::size_t fishwood_optimal_action(const FishwoodParams& params, const UtilitySpec& spec, int remaining, int fish,
                                    int wood);

/// Exact expected utility of the uniform-random policy.
double fishwood_uniform_esr(const FishwoodParams& params, const UtilitySpec& spec);

}  // namespace esr::envs

#pragma once

#include <vector>

#include "esr/config.hpp"
#include "esr/core.hpp"

namespace esr::envs {

/// Multi-objective bandit. Gaussian arms add independent noise of the given
/// per-objective variance to each mean vector; the Bernoulli form returns the mean
/// vector scaled by a fair coin (all-ones or all-zeros for the single-arm demo).
struct BanditParams {
    enum class Noise { gaussian, bernoulli_half };

    std::vector<ReturnVector> means;
    double variance = 0.0;
    Noise noise = Noise::gaussian;

    /// Four-arm MOMAB: (0, 0.8), (0.4, 0.4), (0.8, 0.0), (0.9, 0.1), variance 0.0005.
    static BanditParams momab();
    /// One arm returning [1, 1] or [0, 0] with probability 1/2 each.
    static BanditParams single_arm_demo();

    /// Keys: arms (how many of the MOMAB arms to keep), variance.
    static BanditParams momab_from(const ParamMap& params);
    void validate() const;
};

ReturnVector bandit_pull(const BanditParams& params, std::size_t arm, Rng& rng);

/// A bandit viewed as a horizon-1 environment: one decision, then terminal.
class Bandit final : public EnvironmentModel {
public:
    Bandit(BanditParams params, std::string name);

    std::string name() const override { return name_; }
    std::size_t objectives() const override { return params_.means.front().size(); }
    int horizon() const override { return 1; }
    StateId initial_state() const override { return 0; }
    std::size_t num_actions(StateId) const override { return params_.means.size(); }
    bool is_terminal(StateId state) const override { return state != 0; }
    StepResult step(StateId state, std::size_t action, Rng& rng) const override;
    bool integer_rewards() const override { return params_.noise == BanditParams::Noise::bernoulli_half; }

    const BanditParams& params() const { return params_; }

private:
    BanditParams params_;
    std::string name_;
};

}  // namespace esr::envs

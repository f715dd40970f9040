#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "esr/config.hpp"
#include "esr/core.hpp"

namespace esr::envs {

struct RedeedGenerator {
    double p_min = 0.0;
    double p_max = 0.0;
    // cost: a + b P + c P^2 + |d sin(e (P_min - P))|
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0;
    // emissions: E (alpha + beta P + gamma P^2 + eta exp(delta P))
    double alpha = 0.0, beta = 0.0, gamma = 0.0, eta = 0.0, delta = 0.0;
    double ramp_up = 0.0;
    double ramp_down = 0.0;
};

/// One violated limit: magnitude h and violation weight delta (1 when violated).
struct Violation {
    double magnitude = 0.0;
    double weight = 1.0;
};

/// Renewable-energy dynamic economic emissions dispatch over 24 hours.
///
/// Generator 1 (index 0) is the slack unit and absorbs whatever the others do not
/// supply; generator 3 (index 2) is chosen by the agent from `agent_levels` evenly
/// spaced outputs; generator 4 (index 3) is a wind turbine whose scheduled output
/// is scaled by a storm multiplier from `storm_start_hour` onwards. All other units
/// follow the reference schedule. Transmission losses are not modelled.
///
/// The built-in coefficients and 24-hour demand mirror data/redeed_generators.csv
/// and data/redeed_demand.csv. They are placeholders in the style of the classic
/// 10-unit DEED test system and are not claimed to reproduce published numbers.
struct RedeedParams {
    static constexpr std::size_t kGenerators = 10;
    static constexpr std::size_t kHours = 24;
    static constexpr std::size_t kSlack = 0;
    static constexpr std::size_t kAgent = 2;
    static constexpr std::size_t kWind = 3;

    std::vector<RedeedGenerator> generators = default_generators();
    std::vector<double> demand = default_demand();
    /// schedule[hour][generator] in MW; empty selects the equal-load-fraction schedule.
    std::vector<std::vector<double>> schedule;
    double emission_scale = 10.0;      // E
    double penalty_scale = 1.0e6;      // C
    std::size_t agent_levels = 11;
    int storm_start_hour = 16;         // 1-based, inclusive
    std::array<double, 3> wind_multipliers{0.75, 1.0, 1.25};
    std::array<double, 3> wind_probabilities{0.15, 0.70, 0.15};

    static std::vector<RedeedGenerator> default_generators();
    static std::vector<double> default_demand();

    /// Keys: generators (csv path), demand (csv path), schedule (csv path),
    /// emission_scale, penalty_scale, agent_levels, storm_start_hour.
    static RedeedParams from(const ParamMap& params);
    static std::vector<RedeedGenerator> generators_from(const Table& table);
    void validate() const;

    /// Power of every generator at a 1-based hour before agent and wind adjustments.
    std::vector<double> scheduled_output(int hour) const;
    double agent_level_power(std::size_t level) const;
};

double redeed_cost(const RedeedGenerator& g, double power);
double redeed_emissions(const RedeedGenerator& g, double power, double emission_scale, bool wind);
double redeed_penalty(std::span<const Violation> violations, double penalty_scale);

struct HourDispatch {
    std::vector<double> power;             // MW per generator
    std::vector<double> local_cost;
    std::vector<double> local_emissions;
    std::vector<Violation> violations;
    double cost = 0.0;       // f_c^G
    double emissions = 0.0;  // f_e^G
    double penalty = 0.0;    // f_p^G
};

/// Dispatch of one 1-based hour given the agent's output and the wind multiplier.
/// Ramp limits are checked only when the previous hour's outputs are supplied.
HourDispatch redeed_dispatch(const RedeedParams& params, int hour, double agent_power, double wind_multiplier,
                             std::optional<double> prev_agent_power, std::optional<double> prev_slack_power);

class Redeed final : public EnvironmentModel {
public:
    explicit Redeed(RedeedParams params = {});

    std::string name() const override { return "redeed"; }
    std::size_t objectives() const override { return 3; }
    int horizon() const override { return static_cast<int>(RedeedParams::kHours); }
    StateId initial_state() const override;
    std::size_t num_actions(StateId) const override { return params_.agent_levels; }
    bool is_terminal(StateId state) const override { return hours_done(state) >= RedeedParams::kHours; }
    /// Reward is [-cost, -emissions, -penalty] of the dispatched hour.
    StepResult step(StateId state, std::size_t action, Rng& rng) const override;
    std::string describe_state(StateId state) const override;

    /// Storm-sampled multiplier index for a 1-based hour (always the middle index outside the storm).
    std::size_t sample_wind(int hour, Rng& rng) const;

    std::size_t hours_done(StateId state) const;
    const RedeedParams& params() const { return params_; }
    HourDispatch dispatch_for(StateId state, std::size_t action, std::size_t wind_index) const;

private:
    StateId encode(std::size_t hours_done, std::size_t prev_level, std::size_t prev_wind) const;

    RedeedParams params_;
};

}  // namespace esr::envs

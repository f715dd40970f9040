#include "esr/envs/redeed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace esr::envs {

std::vector<RedeedGenerator> RedeedParams::default_generators() {
    // p_min p_max | a b c d e | alpha beta gamma eta delta | ramp_up ramp_down
    return {
        {150, 470, 786.7988, 38.5397, 0.1524, 450, 0.041, 103.3908, -2.4444, 0.0312, 0.5035, 0.0207, 80, 80},
        {135, 470, 451.3251, 46.1591, 0.1058, 600, 0.036, 103.3908, -2.4444, 0.0312, 0.5035, 0.0207, 80, 80},
        {73, 340, 1049.9977, 40.3965, 0.0280, 320, 0.028, 300.3910, -4.0695, 0.0509, 0.4968, 0.0202, 80, 80},
        {60, 300, 1243.5311, 38.3055, 0.0354, 260, 0.052, 300.3910, -4.0695, 0.0509, 0.4968, 0.0202, 50, 50},
        {73, 243, 1658.5696, 36.3278, 0.0211, 280, 0.063, 320.0006, -3.8132, 0.0344, 0.4972, 0.0200, 50, 50},
        {57, 160, 1356.6592, 38.2704, 0.0179, 310, 0.048, 320.0006, -3.8132, 0.0344, 0.4972, 0.0200, 50, 50},
        {20, 130, 1450.7045, 36.5104, 0.0121, 300, 0.086, 330.0056, -3.9023, 0.0465, 0.5163, 0.0214, 30, 30},
        {47, 120, 1450.7045, 36.5104, 0.0121, 340, 0.082, 330.0056, -3.9023, 0.0465, 0.5163, 0.0214, 30, 30},
        {20, 80, 1455.6056, 39.5804, 0.1090, 270, 0.098, 350.0056, -3.9524, 0.0465, 0.5475, 0.0234, 30, 30},
        {10, 55, 1469.4026, 40.5407, 0.1295, 380, 0.094, 360.0012, -3.9864, 0.0470, 0.5475, 0.0234, 30, 30},
    };
}

std::vector<double> RedeedParams::default_demand() {
    return {1036, 1110, 1258, 1406, 1480, 1628, 1702, 1776, 1924, 2022, 2106, 2150,
            2072, 1924, 1776, 1554, 1480, 1628, 1776, 1972, 1924, 1628, 1332, 1184};
}

std::vector<RedeedGenerator> RedeedParams::generators_from(const Table& table) {
    const std::size_t p_min = table.column("p_min"), p_max = table.column("p_max"), a = table.column("a"),
                      b = table.column("b"), c = table.column("c"), d = table.column("d"), e = table.column("e"),
                      alpha = table.column("alpha"), beta = table.column("beta"), gamma = table.column("gamma"),
                      eta = table.column("eta"), delta = table.column("delta"), up = table.column("ramp_up"),
                      down = table.column("ramp_down");
    std::vector<RedeedGenerator> out;
    for (const auto& row : table.rows) {
        out.push_back({row[p_min], row[p_max], row[a], row[b], row[c], row[d], row[e], row[alpha], row[beta],
                       row[gamma], row[eta], row[delta], row[up], row[down]});
    }
    return out;
}

RedeedParams RedeedParams::from(const ParamMap& params) {
    RedeedParams p;
    if (auto it = params.find("generators"); it != params.end()) p.generators = generators_from(load_table(it->second));
    if (auto it = params.find("demand"); it != params.end()) {
        const Table t = load_table(it->second);
        const std::size_t col = t.column("demand");
        p.demand.clear();
        for (const auto& row : t.rows) p.demand.push_back(row[col]);
    }
    if (auto it = params.find("schedule"); it != params.end()) {
        const Table t = load_table(it->second);
        p.schedule.clear();
        for (const auto& row : t.rows) {
            // Optional leading "hour" column.
            const std::size_t skip = t.columns.front() == "hour" ? 1 : 0;
            p.schedule.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(skip), row.end());
        }
    }
    p.emission_scale = get_double(params, "emission_scale", p.emission_scale);
    p.penalty_scale = get_double(params, "penalty_scale", p.penalty_scale);
    p.agent_levels = static_cast<std::size_t>(get_int(params, "agent_levels", static_cast<std::int64_t>(p.agent_levels)));
    p.storm_start_hour = static_cast<int>(get_int(params, "storm_start_hour", p.storm_start_hour));
    p.validate();
    return p;
}

void RedeedParams::validate() const {
    if (generators.size() != kGenerators) {
        throw ConfigError("REDEED needs exactly " + std::to_string(kGenerators) + " generators, got " +
                          std::to_string(generators.size()));
    }
    for (std::size_t n = 0; n < generators.size(); ++n) {
        const auto& g = generators[n];
        if (!(g.p_min <= g.p_max)) throw ConfigError("REDEED generator " + std::to_string(n + 1) + ": p_min > p_max");
        if (g.ramp_up < 0 || g.ramp_down < 0) {
            throw ConfigError("REDEED generator " + std::to_string(n + 1) + ": negative ramp limit");
        }
    }
    if (demand.size() != kHours) throw ConfigError("REDEED demand profile must have 24 hourly values");
    if (!schedule.empty()) {
        if (schedule.size() != kHours) throw ConfigError("REDEED schedule must have 24 rows");
        for (const auto& row : schedule) {
            if (row.size() != kGenerators) throw ConfigError("REDEED schedule rows need one value per generator");
        }
    }
    if (agent_levels < 1) throw ConfigError("REDEED agent_levels must be >= 1");
    if (storm_start_hour < 1 || storm_start_hour > static_cast<int>(kHours) + 1) {
        throw ConfigError("REDEED storm_start_hour must lie in 1..25");
    }
    const double total = std::accumulate(wind_probabilities.begin(), wind_probabilities.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("REDEED storm probabilities must sum to 1");
    if (!(emission_scale >= 0.0) || !(penalty_scale >= 0.0)) throw ConfigError("REDEED scales must be >= 0");
}

std::vector<double> RedeedParams::scheduled_output(int hour) const {
    if (hour < 1 || hour > static_cast<int>(kHours)) throw UsageError("REDEED hour must lie in 1..24");
    if (!schedule.empty()) return schedule[static_cast<std::size_t>(hour - 1)];
    // Every unit runs at the same fraction of its range so that the outputs sum to demand.
    double lo = 0.0, hi = 0.0;
    for (const auto& g : generators) {
        lo += g.p_min;
        hi += g.p_max;
    }
    const double fraction = std::clamp((demand[static_cast<std::size_t>(hour - 1)] - lo) / (hi - lo), 0.0, 1.0);
    std::vector<double> out(generators.size());
    for (std::size_t n = 0; n < generators.size(); ++n) {
        out[n] = generators[n].p_min + fraction * (generators[n].p_max - generators[n].p_min);
    }
    return out;
}

double RedeedParams::agent_level_power(std::size_t level) const {
    const auto& g = generators[kAgent];
    if (agent_levels == 1) return 0.5 * (g.p_min + g.p_max);
    return g.p_min + (g.p_max - g.p_min) * static_cast<double>(level) / static_cast<double>(agent_levels - 1);
}

double redeed_cost(const RedeedGenerator& g, double power) {
    return g.a + g.b * power + g.c * power * power + std::abs(g.d * std::sin(g.e * (g.p_min - power)));
}

double redeed_emissions(const RedeedGenerator& g, double power, double emission_scale, bool wind) {
    if (wind) return 0.0;
    return emission_scale * (g.alpha + g.beta * power + g.gamma * power * power + g.eta * std::exp(g.delta * power));
}

double redeed_penalty(std::span<const Violation> violations, double penalty_scale) {
    double total = 0.0;
    for (const auto& v : violations) total += penalty_scale * std::abs(v.magnitude + 1.0) * v.weight;
    return total;
}

namespace {

void check_range(double power, const RedeedGenerator& g, std::vector<Violation>& out) {
    if (power > g.p_max) out.push_back({power - g.p_max, 1.0});
    if (power < g.p_min) out.push_back({g.p_min - power, 1.0});
}

void check_ramp(double power, double previous, const RedeedGenerator& g, std::vector<Violation>& out) {
    const double change = power - previous;
    if (change > g.ramp_up) out.push_back({change - g.ramp_up, 1.0});
    if (-change > g.ramp_down) out.push_back({-change - g.ramp_down, 1.0});
}

}  // namespace

HourDispatch redeed_dispatch(const RedeedParams& params, int hour, double agent_power, double wind_multiplier,
                             std::optional<double> prev_agent_power, std::optional<double> prev_slack_power) {
    HourDispatch out;
    out.power = params.scheduled_output(hour);
    out.power[RedeedParams::kAgent] = agent_power;
    out.power[RedeedParams::kWind] *= wind_multiplier;
    double others = 0.0;
    for (std::size_t n = 0; n < out.power.size(); ++n) {
        if (n != RedeedParams::kSlack) others += out.power[n];
    }
    out.power[RedeedParams::kSlack] = params.demand[static_cast<std::size_t>(hour - 1)] - others;

    const auto& slack = params.generators[RedeedParams::kSlack];
    const auto& agent = params.generators[RedeedParams::kAgent];
    check_range(out.power[RedeedParams::kSlack], slack, out.violations);
    check_range(agent_power, agent, out.violations);
    if (prev_slack_power) check_ramp(out.power[RedeedParams::kSlack], *prev_slack_power, slack, out.violations);
    if (prev_agent_power) check_ramp(agent_power, *prev_agent_power, agent, out.violations);

    out.local_cost.resize(out.power.size());
    out.local_emissions.resize(out.power.size());
    for (std::size_t n = 0; n < out.power.size(); ++n) {
        out.local_cost[n] = redeed_cost(params.generators[n], out.power[n]);
        out.local_emissions[n] = redeed_emissions(params.generators[n], out.power[n], params.emission_scale,
                                                  n == RedeedParams::kWind);
        out.cost += out.local_cost[n];
        out.emissions += out.local_emissions[n];
    }
    out.penalty = redeed_penalty(out.violations, params.penalty_scale);
    return out;
}

Redeed::Redeed(RedeedParams params) : params_(std::move(params)) { params_.validate(); }

StateId Redeed::encode(std::size_t hours_done, std::size_t prev_level, std::size_t prev_wind) const {
    return (static_cast<StateId>(hours_done) * (params_.agent_levels + 1) + prev_level) * 3 + prev_wind;
}

std::size_t Redeed::hours_done(StateId state) const {
    return static_cast<std::size_t>(state / 3 / (params_.agent_levels + 1));
}

StateId Redeed::initial_state() const { return encode(0, params_.agent_levels, 1); }

std::size_t Redeed::sample_wind(int hour, Rng& rng) const {
    if (hour < params_.storm_start_hour) return 1;
    const double u = rng.uniform();
    if (u < params_.wind_probabilities[0]) return 0;
    if (u < params_.wind_probabilities[0] + params_.wind_probabilities[1]) return 1;
    return 2;
}

HourDispatch Redeed::dispatch_for(StateId state, std::size_t action, std::size_t wind_index) const {
    if (action >= params_.agent_levels) throw UsageError("REDEED action out of range");
    const std::size_t done = hours_done(state);
    const std::size_t prev_level = static_cast<std::size_t>(state / 3 % (params_.agent_levels + 1));
    const std::size_t prev_wind = static_cast<std::size_t>(state % 3);
    const int hour = static_cast<int>(done) + 1;
    std::optional<double> prev_agent, prev_slack;
    if (prev_level < params_.agent_levels) {
        prev_agent = params_.agent_level_power(prev_level);
        const HourDispatch previous = redeed_dispatch(params_, hour - 1, *prev_agent,
                                                      params_.wind_multipliers[prev_wind], std::nullopt, std::nullopt);
        prev_slack = previous.power[RedeedParams::kSlack];
    }
    return redeed_dispatch(params_, hour, params_.agent_level_power(action), params_.wind_multipliers[wind_index],
                           prev_agent, prev_slack);
}

StepResult Redeed::step(StateId state, std::size_t action, Rng& rng) const {
    if (is_terminal(state)) throw UsageError("REDEED stepped past hour 24");
    const std::size_t done = hours_done(state);
    const std::size_t wind = sample_wind(static_cast<int>(done) + 1, rng);
    const HourDispatch hour = dispatch_for(state, action, wind);
    StepResult out;
    out.reward = ReturnVector{-hour.cost, -hour.emissions, -hour.penalty};
    out.next_state = encode(done + 1, action, wind);
    out.terminal = done + 1 >= RedeedParams::kHours;
    return out;
}

std::string Redeed::describe_state(StateId state) const {
    return "hour=" + std::to_string(hours_done(state) + 1);
}

}  // namespace esr::envs

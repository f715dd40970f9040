#include "esr/envs/random_momdp.hpp"

#include <numeric>
#include <string>

namespace esr::envs {

RandomMomdpParams RandomMomdpParams::from(const ParamMap& params) {
    RandomMomdpParams p;
    p.seed = static_cast<std::uint64_t>(get_int(params, "seed", static_cast<std::int64_t>(p.seed)));
    p.states = static_cast<std::size_t>(get_int(params, "states", static_cast<std::int64_t>(p.states)));
    p.actions = static_cast<std::size_t>(get_int(params, "actions", static_cast<std::int64_t>(p.actions)));
    p.objectives = static_cast<std::size_t>(get_int(params, "objectives", static_cast<std::int64_t>(p.objectives)));
    p.successors = static_cast<std::size_t>(get_int(params, "successors", static_cast<std::int64_t>(p.successors)));
    p.horizon = static_cast<int>(get_int(params, "horizon", p.horizon));
    p.validate();
    return p;
}

void RandomMomdpParams::validate() const {
    if (states < 1 || actions < 1) throw UsageError("random MOMDP needs at least one state and one action");
    if (objectives < 1 || objectives > ReturnVector::kMaxObjectives) {
        throw UsageError("random MOMDP objectives must lie in 1.." + std::to_string(ReturnVector::kMaxObjectives));
    }
    if (successors < 1 || successors > states) {
        throw UsageError("random MOMDP successors (" + std::to_string(successors) + ") must lie in 1..states (" +
                         std::to_string(states) + ")");
    }
    if (horizon < 1) throw UsageError("random MOMDP horizon must be >= 1");
}

RandomMomdp random_momdp_build(const RandomMomdpParams& params) {
    params.validate();
    RandomMomdp env;
    env.params_ = params;
    env.table_.resize(params.states * params.actions);
    Rng rng(params.seed);
    std::vector<std::size_t> pool(params.states);
    for (std::size_t s = 0; s < params.states; ++s) {
        for (std::size_t a = 0; a < params.actions; ++a) {
            // Partial Fisher-Yates: the first `successors` entries are a uniform sample without replacement.
            std::iota(pool.begin(), pool.end(), std::size_t{0});
            for (std::size_t i = 0; i < params.successors; ++i) {
                const auto j = i + static_cast<std::size_t>(rng.below(params.states - i));
                std::swap(pool[i], pool[j]);
            }
            auto& row = env.table_[s * params.actions + a];
            row.resize(params.successors);
            double total = 0.0;
            for (std::size_t i = 0; i < params.successors; ++i) {
                row[i].next = pool[i];
                // (0, 1]: keeps every listed successor reachable.
                row[i].probability = 1.0 - rng.uniform();
                total += row[i].probability;
                row[i].reward = ReturnVector::zeros(params.objectives);
                for (std::size_t o = 0; o < params.objectives; ++o) row[i].reward[o] = rng.uniform();
            }
            for (auto& o : row) o.probability /= total;
        }
    }
    return env;
}

StepResult RandomMomdp::step(StateId state, std::size_t action, Rng& rng) const {
    if (action >= params_.actions) throw UsageError("random MOMDP action out of range");
    const auto& row = outcomes(base_state(state), action);
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t pick = row.size() - 1;
    for (std::size_t i = 0; i < row.size(); ++i) {
        acc += row[i].probability;
        if (u < acc) {
            pick = i;
            break;
        }
    }
    const int t = timestep(state) + 1;
    StepResult out;
    out.next_state = static_cast<StateId>(t) * params_.states + row[pick].next;
    out.reward = row[pick].reward;
    out.terminal = t >= params_.horizon;
    return out;
}

std::string RandomMomdp::describe_state(StateId state) const {
    return "t=" + std::to_string(timestep(state)) + " s=" + std::to_string(base_state(state));
}

}  // namespace esr::envs

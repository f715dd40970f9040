#include "esr/planner.hpp"

#include <limits>
#include <string>

namespace esr {

PlannerKind planner_kind_from(const RunConfig& config) {
    if (config.algorithm == Algorithm::nlu_mcts) return NluMctsParams{config.exploration};
    return DmctsParams{config.replicates, config.alpha_init, config.beta_init};
}

Planner::Planner(const EnvironmentModel& model, PlannerKind kind, UtilitySpec utility)
    : model_(&model), kind_(kind), utility_(std::move(utility)) {
    if (const auto* d = std::get_if<DmctsParams>(&kind_)) {
        if (d->replicates == 0) throw UsageError("DMCTS needs J >= 1");
        if (!(d->beta_init > 0.0)) throw UsageError("DMCTS needs beta_init > 0");
    } else if (const auto* n = std::get_if<NluMctsParams>(&kind_); !(n->exploration >= 0.0)) {
        throw UsageError("NLU-MCTS needs C >= 0");
    }
}

TreeOptions Planner::tree_options(double reward_tolerance) const {
    TreeOptions options;
    options.reward_tolerance = model_->integer_rewards() ? 0.0 : reward_tolerance;
    if (const auto* d = std::get_if<DmctsParams>(&kind_)) {
        options.bts_prototype.emplace(d->replicates, d->alpha_init, d->beta_init);
    }
    return options;
}

std::size_t Planner::plan(SearchTree& tree, const ReturnVector& accrued, std::size_t iterations, Rng& rng) const {
    if (iterations == 0) throw UsageError("plan needs at least one iteration");
    if (tree.decision(tree.root()).terminal) throw UsageError("plan called on a terminal root");
    for (std::size_t i = 0; i < iterations; ++i) iterate(tree, accrued, rng);
    const auto best = best_mean_action(tree, tree.root());
    if (!best) throw ContractViolation("no visited action at the root after planning");
    return *best;
}

Trace Planner::iterate(SearchTree& tree, const ReturnVector& accrued, Rng& rng) const {
    Trace trace = selection(tree, tree.root(), ReturnVector::zeros(model_->objectives()), rng);
    if (!tree.decision(trace.leaf()).terminal) expansion(tree, trace, rng);
    trace.future = simulate_rollout(tree, trace.leaf(), trace.future, rng);
    backpropagate(tree, trace, add_returns(accrued, trace.future), rng);
    return trace;
}

Trace Planner::selection(SearchTree& tree, NodeId start, ReturnVector future, Rng& rng) const {
    Trace trace;
    trace.decisions.push_back(start);
    trace.future = future;
    for (;;) {
        const DecisionNode& node = tree.decision(trace.leaf());
        if (node.terminal || !node.fully_expanded()) return trace;
        const NodeId chance = select_child(tree, trace.leaf(), rng);
        trace.chances.push_back(chance);
        trace.decisions.push_back(sample_outcome(tree, chance, trace.future, rng));
    }
}

NodeId Planner::select_child(const SearchTree& tree, NodeId decision, Rng& rng) const {
    if (const auto* n = std::get_if<NluMctsParams>(&kind_)) return best_child_ucb(tree, decision, n->exploration);
    return thompson_select(tree, decision, rng);
}

NodeId Planner::thompson_select(const SearchTree& tree, NodeId decision, Rng& rng) const {
    const DecisionNode& node = tree.decision(decision);
    if (!node.fully_expanded() || node.children.empty()) {
        throw ContractViolation("thompson_select on a node with unexpanded actions");
    }
    NodeId best = kNoNode;
    double best_sample = -std::numeric_limits<double>::infinity();
    for (NodeId child : node.children) {
        const ChanceNode& c = tree.chance(child);
        if (!c.bts) throw ContractViolation("thompson_select on a chance node without a BTS distribution");
        const double sample = c.bts->sample_mean(rng);
        if (best == kNoNode || sample > best_sample) {
            best = child;
            best_sample = sample;
        }
    }
    return best;
}

void Planner::expansion(SearchTree& tree, Trace& trace, Rng& rng) const {
    const NodeId leaf = trace.leaf();
    const DecisionNode& node = tree.decision(leaf);
    const std::size_t remaining = node.num_actions() - node.expanded;
    if (remaining == 0) throw ContractViolation("expansion on a fully expanded node");
    auto pick = rng.below(remaining);
    std::size_t action = 0;
    for (; action < node.children.size(); ++action) {
        if (node.children[action] != kNoNode) continue;
        if (pick == 0) break;
        --pick;
    }
    const NodeId chance = tree.add_chance(leaf, action);
    trace.chances.push_back(chance);
    trace.decisions.push_back(sample_outcome(tree, chance, trace.future, rng));
}

NodeId Planner::sample_outcome(SearchTree& tree, NodeId chance, ReturnVector& future, Rng& rng) const {
    const ChanceNode& c = tree.chance(chance);
    const StepResult step = model_->step(c.state, c.action, rng);
    future += step.reward;
    return tree.find_or_create_child(*model_, chance, step.next_state, step.reward).first;
}

ReturnVector Planner::simulate_rollout(const SearchTree& tree, NodeId decision, ReturnVector future,
                                       Rng& rng) const {
    StateId state = tree.decision(decision).state;
    const int limit = model_->horizon();
    int steps = 0;
    while (!model_->is_terminal(state)) {
        if (++steps > limit) {
            throw ContractViolation("rollout exceeded the horizon of " + model_->name() + " (" +
                                    std::to_string(limit) + " steps)");
        }
        const auto action = static_cast<std::size_t>(rng.below(model_->num_actions(state)));
        const StepResult step = model_->step(state, action, rng);
        future += step.reward;
        state = step.next_state;
    }
    return future;
}

void Planner::backpropagate(SearchTree& tree, const Trace& trace, const ReturnVector& cumulative, Rng& rng) const {
    const bool distributional = this->distributional();
    for (std::size_t i = trace.chances.size(); i-- > 0;) {
        // The cumulative return is shared by the whole path, so every node sees the same utility.
        const double u = eval_utility(utility_, cumulative);
        tree.update_stats(trace.chances[i], trace.decisions[i], u);
        if (distributional) tree.chance(trace.chances[i]).bts->update(u, rng);
    }
    ++tree.decision(trace.leaf()).visits;
}

EpisodeRunner::EpisodeRunner(const EnvironmentModel& model, PlannerKind kind, UtilitySpec utility,
                             std::size_t n_exec, bool tree_persistence, double reward_tolerance)
    : planner_(model, kind, std::move(utility)),
      tree_(planner_.tree_options(reward_tolerance)),
      n_exec_(n_exec),
      persistence_(tree_persistence) {
    if (n_exec == 0) throw UsageError("n_exec must be >= 1");
}

EpisodeResult EpisodeRunner::run_episode(Rng& planner_rng, Rng& env_rng) {
    const EnvironmentModel& model = planner_.model();
    tree_.begin_episode(model, persistence_);
    EpisodeResult result;
    StateId state = model.initial_state();
    ReturnVector accrued = ReturnVector::zeros(model.objectives());
    int steps = 0;
    while (!model.is_terminal(state)) {
        if (++steps > model.horizon()) throw ContractViolation("episode exceeded the horizon of " + model.name());
        const std::size_t action = planner_.plan(tree_, accrued, n_exec_, planner_rng);
        const StepResult step = model.step(state, action, env_rng);
        accrued += step.reward;
        result.trajectory.push_back({state, action, step.reward});
        result.iterations_per_step.push_back(n_exec_);
        tree_.re_root(model, action, step.next_state, step.reward);
        state = step.next_state;
    }
    result.cumulative = accrued;
    result.utility = eval_utility(planner_.utility(), accrued);
    return result;
}

EpisodeResult run_episode(const EnvironmentModel& model, const PlannerKind& kind, const UtilitySpec& utility,
                          const RunConfig& config, Rng& rng) {
    config.validate();
    Rng planner_rng(derive_seed(rng(), 1));
    Rng env_rng(derive_seed(rng(), 2));
    EpisodeRunner runner(model, kind, utility, config.n_exec, false, config.reward_tolerance);
    return runner.run_episode(planner_rng, env_rng);
}

}  // namespace esr

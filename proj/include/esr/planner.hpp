#pragma once

#include <cstddef>
#include <numbers>
#include <variant>
#include <vector>

#include "esr/core.hpp"
#include "esr/tree.hpp"
#include "esr/utility.hpp"

namespace esr {

/// UCB-driven expectimax search on the utility of cumulative returns.
struct NluMctsParams {
    double exploration = std::numbers::sqrt2;
};

/// Bootstrap-Thompson-sampling expectimax search; each chance node keeps a
/// distribution over its expected utility.
struct DmctsParams {
    std::size_t replicates = 100;
    double alpha_init = 1.0;
    double beta_init = 1.0;
};

using PlannerKind = std::variant<NluMctsParams, DmctsParams>;

PlannerKind planner_kind_from(const RunConfig& config);

/// Nodes visited by one planning iteration: decisions[i] -> chances[i] -> decisions[i + 1].
struct Trace {
    std::vector<NodeId> decisions;
    std::vector<NodeId> chances;
    ReturnVector future;

    NodeId leaf() const { return decisions.back(); }
};

struct Transition {
    StateId state = 0;
    std::size_t action = 0;
    ReturnVector reward;
};

struct EpisodeResult {
    std::vector<Transition> trajectory;
    ReturnVector cumulative;
    double utility = 0.0;
    std::vector<std::size_t> iterations_per_step;
};

/// The planning phases over a SearchTree. Stateless apart from its configuration;
/// randomness comes from the rng passed to each call.
class Planner {
public:
    Planner(const EnvironmentModel& model, PlannerKind kind, UtilitySpec utility);

    const EnvironmentModel& model() const { return *model_; }
    const PlannerKind& kind() const { return kind_; }
    const UtilitySpec& utility() const { return utility_; }
    bool distributional() const { return std::holds_alternative<DmctsParams>(kind_); }

    /// Tree options matching this planner (a BTS prototype for DMCTS).
    TreeOptions tree_options(double reward_tolerance) const;

    /// Runs `iterations` planning iterations from the tree's root with the accrued
    /// returns held fixed, then returns the action with the highest mean utility.
    std::size_t plan(SearchTree& tree, const ReturnVector& accrued, std::size_t iterations, Rng& rng) const;

    /// One selection -> expansion -> simulation -> backpropagation pass.
    Trace iterate(SearchTree& tree, const ReturnVector& accrued, Rng& rng) const;

    /// Descends from `start` until a terminal node or a node with unexpanded actions.
    /// `iterate` expands the latter before simulating.
    Trace selection(SearchTree& tree, NodeId start, ReturnVector future, Rng& rng) const;

    /// One sampled replicate mean per child; the argmax wins (ties -> lowest action).
    NodeId thompson_select(const SearchTree& tree, NodeId decision, Rng& rng) const;

    /// Adds a chance node for a uniformly random unexpanded action of the trace's
    /// leaf and samples one outcome below it, extending the trace.
    void expansion(SearchTree& tree, Trace& trace, Rng& rng) const;

    /// One model step from the chance node; the reward is added to `future`.
    NodeId sample_outcome(SearchTree& tree, NodeId chance, ReturnVector& future, Rng& rng) const;

    /// Uniform-random rollout from the node's state to a terminal state.
    ReturnVector simulate_rollout(const SearchTree& tree, NodeId decision, ReturnVector future, Rng& rng) const;

    /// Credits u(cumulative) to every node on the trace (and its BTS for DMCTS).
    void backpropagate(SearchTree& tree, const Trace& trace, const ReturnVector& cumulative, Rng& rng) const;

private:
    NodeId select_child(const SearchTree& tree, NodeId decision, Rng& rng) const;

    const EnvironmentModel* model_;
    PlannerKind kind_;
    UtilitySpec utility_;
};

/// Plans and acts in the environment, one executed action per planning phase,
/// keeping a search tree across calls when persistence is on.
class EpisodeRunner {
public:
    EpisodeRunner(const EnvironmentModel& model, PlannerKind kind, UtilitySpec utility, std::size_t n_exec,
                  bool tree_persistence, double reward_tolerance = 1e-9);

    EpisodeResult run_episode(Rng& planner_rng, Rng& env_rng);

    const SearchTree& tree() const { return tree_; }
    const Planner& planner() const { return planner_; }

private:
    Planner planner_;
    SearchTree tree_;
    std::size_t n_exec_;
    bool persistence_;
};

/// Single episode with a fresh tree; `rng` is split into planner and environment streams.
EpisodeResult run_episode(const EnvironmentModel& model, const PlannerKind& kind, const UtilitySpec& utility,
                          const RunConfig& config, Rng& rng);

}  // namespace esr

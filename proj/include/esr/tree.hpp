#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "esr/bts.hpp"
#include "esr/core.hpp"

namespace esr {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct DecisionNode {
    StateId state = 0;
    ReturnVector reward;         // reward on the edge from the parent chance node
    std::uint64_t visits = 0;
    std::vector<NodeId> children;  // indexed by action; kNoNode while unexpanded
    std::size_t expanded = 0;
    bool terminal = false;
    int depth = 0;               // timesteps below the tree's initial root
    NodeId parent = kNoNode;     // chance node

    std::size_t num_actions() const { return children.size(); }
    bool fully_expanded() const { return expanded == children.size(); }
};

struct ChanceNode {
    StateId state = 0;
    std::size_t action = 0;
    double total_utility = 0.0;
    std::uint64_t visits = 0;
    std::optional<BtsDistribution> bts;  // DMCTS only
    std::vector<NodeId> children;        // decision nodes, one per distinct (state, reward)
    NodeId parent = kNoNode;             // decision node
    int depth = 0;

    double mean_utility() const { return total_utility / static_cast<double>(visits); }
};

struct TreeOptions {
    /// Absolute tolerance for matching outcome rewards; 0 demands exact equality.
    double reward_tolerance = 0.0;
    /// When set, every new chance node receives a copy of this distribution.
    std::optional<BtsDistribution> bts_prototype;
};

/// Expectimax tree of alternating decision and chance nodes stored in two arenas.
/// Parents refer to children by id, so re-rooting is an id swap and never
/// invalidates statistics.
class SearchTree {
public:
    explicit SearchTree(TreeOptions options = {});

    /// Drops every node and creates a fresh root for `state`.
    NodeId reset(const EnvironmentModel& model, StateId state);

    /// Starts a new episode. With persistence the episode's first root (and all its
    /// statistics) is reused; otherwise the tree is rebuilt from scratch.
    NodeId begin_episode(const EnvironmentModel& model, bool persistence);

    NodeId root() const { return root_; }
    NodeId initial_root() const { return initial_root_; }
    bool empty() const { return decisions_.empty(); }

    DecisionNode& decision(NodeId id) { return decisions_.at(id); }
    const DecisionNode& decision(NodeId id) const { return decisions_.at(id); }
    ChanceNode& chance(NodeId id) { return chances_.at(id); }
    const ChanceNode& chance(NodeId id) const { return chances_.at(id); }

    std::size_t decision_count() const { return decisions_.size(); }
    std::size_t chance_count() const { return chances_.size(); }
    const TreeOptions& options() const { return options_; }

    /// Creates the chance child of `decision` for `action`. Throws ContractViolation
    /// when that action is already expanded.
    NodeId add_chance(NodeId decision, std::size_t action);

    /// Child of `chance` matching (outcome_state, reward), created when absent.
    std::pair<NodeId, bool> find_or_create_child(const EnvironmentModel& model, NodeId chance,
                                                 StateId outcome_state, const ReturnVector& reward);

    /// v += utility and N += 1 on the chance node, N += 1 on the decision node.
    void update_stats(NodeId chance, NodeId decision, double utility);

    /// Moves the root to the decision node reached by executing `action` at the
    /// current root and observing (state, reward). Missing nodes are created.
    NodeId re_root(const EnvironmentModel& model, std::size_t action, StateId observed_state,
                   const ReturnVector& observed_reward);

    /// One node per line: `<id> <kind> state=<s> action=<a> v=<v> N=<n> depth=<d>`.
    void dump(std::ostream& os) const;

private:
    NodeId new_decision(const EnvironmentModel& model, StateId state, ReturnVector reward, NodeId parent,
                        int depth);

    TreeOptions options_;
    std::vector<DecisionNode> decisions_;
    std::vector<ChanceNode> chances_;
    NodeId root_ = kNoNode;
    NodeId initial_root_ = kNoNode;
};

/// mean + C * sqrt(ln(parent_visits) / N). Throws ContractViolation for an
/// unvisited child or parent_visits == 0.
double ucb_score(const ChanceNode& child, std::uint64_t parent_visits, double exploration);

/// Chance child maximising the UCB score; ties go to the lowest action. Throws
/// ContractViolation if the node is not fully expanded.
NodeId best_child_ucb(const SearchTree& tree, NodeId decision, double exploration);

/// Expanded root child with the highest mean utility (ties -> lowest action).
/// Returns the action index, or nullopt if nothing is expanded.
std::optional<std::size_t> best_mean_action(const SearchTree& tree, NodeId decision);

}  // namespace esr

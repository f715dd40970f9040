#include "esr/tree.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace esr {

SearchTree::SearchTree(TreeOptions options) : options_(std::move(options)) {}

NodeId SearchTree::reset(const EnvironmentModel& model, StateId state) {
    decisions_.clear();
    chances_.clear();
    ReturnVector zero = ReturnVector::zeros(model.objectives());
    root_ = new_decision(model, state, zero, kNoNode, 0);
    initial_root_ = root_;
    return root_;
}

NodeId SearchTree::begin_episode(const EnvironmentModel& model, bool persistence) {
    if (persistence && initial_root_ != kNoNode && decisions_[initial_root_].state == model.initial_state()) {
        root_ = initial_root_;
        return root_;
    }
    return reset(model, model.initial_state());
}

NodeId SearchTree::new_decision(const EnvironmentModel& model, StateId state, ReturnVector reward, NodeId parent,
                                int depth) {
    if (decisions_.size() >= static_cast<std::size_t>(kNoNode)) throw ContractViolation("decision arena exhausted");
    DecisionNode node;
    node.state = state;
    node.reward = reward;
    node.terminal = model.is_terminal(state);
    node.children.assign(node.terminal ? 0 : model.num_actions(state), kNoNode);
    node.depth = depth;
    node.parent = parent;
    decisions_.push_back(std::move(node));
    return static_cast<NodeId>(decisions_.size() - 1);
}

NodeId SearchTree::add_chance(NodeId decision, std::size_t action) {
    DecisionNode& parent = decisions_.at(decision);
    if (action >= parent.children.size()) {
        throw ContractViolation("action " + std::to_string(action) + " out of range for decision node");
    }
    if (parent.children[action] != kNoNode) {
        throw ContractViolation("action " + std::to_string(action) + " already expanded");
    }
    if (chances_.size() >= static_cast<std::size_t>(kNoNode)) throw ContractViolation("chance arena exhausted");
    ChanceNode node;
    node.state = parent.state;
    node.action = action;
    node.parent = decision;
    node.depth = parent.depth;
    node.bts = options_.bts_prototype;
    const auto id = static_cast<NodeId>(chances_.size());
    parent.children[action] = id;
    ++parent.expanded;
    chances_.push_back(std::move(node));
    return id;
}

std::pair<NodeId, bool> SearchTree::find_or_create_child(const EnvironmentModel& model, NodeId chance,
                                                         StateId outcome_state, const ReturnVector& reward) {
    const ChanceNode& node = chances_.at(chance);
    for (NodeId child : node.children) {
        const DecisionNode& d = decisions_[child];
        if (d.state == outcome_state && returns_match(d.reward, reward, options_.reward_tolerance)) {
            return {child, false};
        }
    }
    const int depth = node.depth + 1;
    const NodeId id = new_decision(model, outcome_state, reward, chance, depth);
    chances_[chance].children.push_back(id);
    return {id, true};
}

void SearchTree::update_stats(NodeId chance, NodeId decision, double utility) {
    ChanceNode& c = chances_.at(chance);
    c.total_utility += utility;
    ++c.visits;
    ++decisions_.at(decision).visits;
}

NodeId SearchTree::re_root(const EnvironmentModel& model, std::size_t action, StateId observed_state,
                           const ReturnVector& observed_reward) {
    NodeId chance = decisions_.at(root_).children.at(action);
    if (chance == kNoNode) chance = add_chance(root_, action);
    root_ = find_or_create_child(model, chance, observed_state, observed_reward).first;
    return root_;
}

void SearchTree::dump(std::ostream& os) const {
    const auto old_precision = os.precision(17);
    for (std::size_t i = 0; i < decisions_.size(); ++i) {
        const DecisionNode& d = decisions_[i];
        os << 'd' << i << " decision state=" << d.state << " action=- v=- N=" << d.visits << " depth=" << d.depth
           << '\n';
    }
    for (std::size_t i = 0; i < chances_.size(); ++i) {
        const ChanceNode& c = chances_[i];
        os << 'c' << i << " chance state=" << c.state << " action=" << c.action << " v=" << c.total_utility
           << " N=" << c.visits << " depth=" << c.depth << '\n';
    }
    os.precision(old_precision);
}

double ucb_score(const ChanceNode& child, std::uint64_t parent_visits, double exploration) {
    if (child.visits == 0) throw ContractViolation("UCB score of an unvisited chance node");
    if (parent_visits == 0) throw ContractViolation("UCB score with zero parent visits");
    const double n = static_cast<double>(child.visits);
    return child.total_utility / n + exploration * std::sqrt(std::log(static_cast<double>(parent_visits)) / n);
}

NodeId best_child_ucb(const SearchTree& tree, NodeId decision, double exploration) {
    const DecisionNode& node = tree.decision(decision);
    if (!node.fully_expanded()) throw ContractViolation("best_child_ucb on a node with unexpanded actions");
    if (node.children.empty()) throw ContractViolation("best_child_ucb on a node without actions");
    NodeId best = kNoNode;
    double best_score = -std::numeric_limits<double>::infinity();
    for (NodeId child : node.children) {
        const double score = ucb_score(tree.chance(child), node.visits, exploration);
        if (best == kNoNode || score > best_score) {
            best = child;
            best_score = score;
        }
    }
    return best;
}

std::optional<std::size_t> best_mean_action(const SearchTree& tree, NodeId decision) {
    const DecisionNode& node = tree.decision(decision);
    std::optional<std::size_t> best;
    double best_mean = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < node.children.size(); ++a) {
        if (node.children[a] == kNoNode) continue;
        const ChanceNode& c = tree.chance(node.children[a]);
        if (c.visits == 0) continue;
        const double m = c.mean_utility();
        if (!best || m > best_mean) {
            best = a;
            best_mean = m;
        }
    }
    return best;
}

}  // namespace esr

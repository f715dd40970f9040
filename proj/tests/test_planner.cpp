#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <functional>

#include "esr/envs/bandit.hpp"
#include "esr/envs/fishwood.hpp"
#include "esr/planner.hpp"
#include "test_support.hpp"

using esr::DmctsParams;
using esr::NluMctsParams;
using esr::Planner;
using esr::ReturnVector;
using esr::Rng;
using esr::SearchTree;
using esr::testing::TableMdp;

namespace {

const esr::PlannerKind kBoth[] = {NluMctsParams{}, DmctsParams{}};

const char* kind_name(const esr::PlannerKind& k) {
    return std::holds_alternative<NluMctsParams>(k) ? "nlu-mcts" : "dmcts";
}

TableMdp dominant_mdp() {
    TableMdp m(1, 1, 2);
    m.set(0, 0, {{1.0, 0, {1}}});
    m.set(0, 1, {{1.0, 0, {0}}});
    return m;
}

// Rewards split over two steps. Under u = r0 * r1:
//   action 0: E[u(r1 + r2)] = 0.5,  E[u(r1) + u(r2)] = 0
//   action 1: E[u(r1 + r2)] = 0.75, E[u(r1) + u(r2)] = 0.25
// The second step has the same law for both actions, so the rollout policy does
// not change the targets.
TableMdp split_reward_mdp() {
    TableMdp m(2, 2, 2);
    m.set(0, 0, {{0.5, 1, {1, 0}}, {0.5, 2, {0, 1}}});
    m.set(0, 1, {{1.0, 3, {0.5, 0.5}}});
    for (std::size_t s = 1; s <= 3; ++s)
        for (std::size_t a = 0; a < 2; ++a) m.set(s, a, {{0.3, 0, {1, 0}}, {0.7, 0, {0, 1}}});
    return m;
}

struct Enumerated {
    double esr = 0.0;
    double summed = 0.0;
};

// Exhaustive expectation over every outcome path of `m` from slot 0 taking
// `first` at the root and action 0 afterwards.
Enumerated enumerate(const TableMdp& m, std::size_t first, const esr::UtilitySpec& spec) {
    Enumerated out;
    std::function<void(std::size_t, int, double, ReturnVector, double)> walk =
        [&](std::size_t slot, int t, double p, ReturnVector acc, double summed) {
            if (t == m.horizon()) {
                out.esr += p * esr::eval_utility(spec, acc);
                out.summed += p * summed;
                return;
            }
            for (const auto& o : m.outcomes(slot, t == 0 ? first : 0)) {
                walk(o.next, t + 1, p * o.probability, acc + o.reward, summed + esr::eval_utility(spec, o.reward));
            }
        };
    walk(0, 0, 1.0, ReturnVector::zeros(m.objectives()), 0.0);
    return out;
}

void check_visit_conservation(const SearchTree& tree) {
    for (std::size_t i = 0; i < tree.chance_count(); ++i) {
        const auto& c = tree.chance(static_cast<esr::NodeId>(i));
        std::uint64_t below = 0;
        for (auto d : c.children) below += tree.decision(d).visits;
        CHECK(below == c.visits);
    }
    for (std::size_t i = 0; i < tree.decision_count(); ++i) {
        const auto& d = tree.decision(static_cast<esr::NodeId>(i));
        if (d.terminal) continue;
        std::uint64_t below = 0;
        for (auto c : d.children)
            if (c != esr::kNoNode) below += tree.chance(c).visits;
        CHECK(below <= d.visits);
        CHECK(d.visits <= below + 1);
    }
}

}  // namespace

TEST_CASE("dominant action after 50 iterations") {
    const TableMdp m = dominant_mdp();
    for (const auto& kind : kBoth) {
        Planner planner(m, kind, esr::parse_utility("product"));
        SearchTree tree(planner.tree_options(1e-9));
        tree.reset(m, 0);
        Rng rng(1);
        CHECK_MESSAGE(planner.plan(tree, {0}, 50, rng) == 0, kind_name(kind));
    }
}

TEST_CASE("plan preconditions") {
    const TableMdp m = dominant_mdp();
    Planner planner(m, NluMctsParams{}, esr::parse_utility("product"));
    SearchTree tree(planner.tree_options(1e-9));
    tree.reset(m, 0);
    Rng rng(1);
    CHECK_THROWS_AS(planner.plan(tree, {0}, 0, rng), esr::UsageError);
    tree.reset(m, TableMdp::kSlots);
    CHECK_THROWS_AS(planner.plan(tree, {0}, 10, rng), esr::UsageError);
    CHECK_THROWS_AS(Planner(m, DmctsParams{0, 1, 1}, esr::parse_utility("product")), esr::UsageError);
    CHECK_THROWS_AS(Planner(m, NluMctsParams{-1}, esr::parse_utility("product")), esr::UsageError);
}

TEST_CASE("symmetric MDP gives a reproducible action") {
    TableMdp m(1, 2, 2);
    for (std::size_t a = 0; a < 2; ++a) m.set(0, a, {{0.5, 0, {1}}, {0.5, 0, {0}}});
    for (const auto& kind : kBoth) {
        Planner planner(m, kind, esr::parse_utility("risk_seeking_sq"));
        std::size_t first = 0;
        for (int rep = 0; rep < 3; ++rep) {
            SearchTree tree(planner.tree_options(1e-9));
            tree.reset(m, 0);
            Rng rng(99);
            const auto a = planner.plan(tree, {0}, 40, rng);
            if (rep == 0) first = a;
            CHECK(a == first);
        }
    }
}

TEST_CASE("fishwood: with 2 wood and 5 steps left the river is preferred") {
    const esr::envs::FishwoodParams params;
    const auto spec = esr::parse_utility("fishwood_min");
    REQUIRE(esr::envs::fishwood_optimal_action(params, spec, 5, 0, 2) == esr::envs::Fishwood::go_river);
    const esr::envs::Fishwood env(params);
    const auto start = esr::envs::Fishwood::encode(params.horizon - 5, esr::envs::Fishwood::woods);
    for (const auto& kind : kBoth) {
        Planner planner(env, kind, spec);
        SearchTree tree(planner.tree_options(1e-9));
        tree.reset(env, start);
        Rng rng(5);
        CHECK_MESSAGE(planner.plan(tree, {0, 2}, 20000, rng) == esr::envs::Fishwood::go_river, kind_name(kind));
    }
}

TEST_CASE("selection") {
    const TableMdp m = split_reward_mdp();
    Planner planner(m, NluMctsParams{}, esr::parse_utility("product"));
    SearchTree tree(planner.tree_options(1e-9));
    const auto root = tree.reset(m, 0);
    Rng rng(2);

    SUBCASE("unexpanded root returns immediately") {
        const auto trace = planner.selection(tree, root, {0.25, 0}, rng);
        CHECK(trace.decisions.size() == 1);
        CHECK(trace.chances.empty());
        CHECK(trace.future == ReturnVector{0.25, 0});
    }
    SUBCASE("fully expanded chain reaches a terminal node with the path rewards") {
        TableMdp chain(1, 3, 1);
        chain.set(0, 0, {{1.0, 1, {2}}});
        chain.set(1, 0, {{1.0, 2, {3}}});
        chain.set(2, 0, {{1.0, 0, {-1}}});
        Planner p(chain, NluMctsParams{}, esr::parse_utility("product"));
        SearchTree t(p.tree_options(1e-9));
        t.reset(chain, 0);
        for (int i = 0; i < 3; ++i) p.iterate(t, {0}, rng);
        const auto trace = p.selection(t, t.root(), {0}, rng);
        CHECK(t.decision(trace.leaf()).terminal);
        CHECK(trace.chances.size() == 3);
        CHECK(trace.future == ReturnVector{4});
    }
}

TEST_CASE("thompson_select") {
    const TableMdp m = dominant_mdp();
    Planner planner(m, DmctsParams{100, 1, 1}, esr::parse_utility("product"));
    SearchTree tree(planner.tree_options(1e-9));
    const auto root = tree.reset(m, 0);
    const auto a = tree.add_chance(root, 0);
    const auto b = tree.add_chance(root, 1);
    Rng rng(3);

    SUBCASE("fresh nodes tie and go to action 0") {
        for (int i = 0; i < 20; ++i) CHECK(planner.thompson_select(tree, root, rng) == a);
    }
    SUBCASE("dominant replicates always win") {
        tree.chance(a).bts.emplace(100, 1, 1);
        tree.chance(b).bts.emplace(100, 2, 1);
        for (int i = 0; i < 200; ++i) CHECK(planner.thompson_select(tree, root, rng) == b);
    }
    SUBCASE("identical distributions are chosen half the time each") {
        Rng coins(4);
        for (int k = 0; k < 30; ++k) {
            const auto words = esr::BtsDistribution::draw_coin_words(coins, 100);
            tree.chance(a).bts->update_with_coins(coins.uniform(), words);
        }
        tree.chance(b).bts = tree.chance(a).bts;
        const int n = 10000;
        int picks_a = 0;
        for (int i = 0; i < n; ++i) picks_a += planner.thompson_select(tree, root, rng) == a;
        CHECK(std::abs(picks_a / double(n) - 0.5) <= 0.05);
    }
    SUBCASE("missing distribution") {
        tree.chance(b).bts.reset();
        CHECK_THROWS_AS(planner.thompson_select(tree, root, rng), esr::ContractViolation);
    }
}

TEST_CASE("expansion") {
    const TableMdp m = split_reward_mdp();
    Planner planner(m, NluMctsParams{}, esr::parse_utility("product"));

    auto expand_once = [&](std::uint64_t seed) {
        SearchTree tree(planner.tree_options(1e-9));
        const auto root = tree.reset(m, 0);
        Rng rng(seed);
        auto trace = planner.selection(tree, root, ReturnVector::zeros(2), rng);
        planner.expansion(tree, trace, rng);
        return std::pair{tree.chance(trace.chances.back()).action, tree.decision(root).expanded};
    };
    CHECK(expand_once(31) == expand_once(31));
    CHECK(expand_once(31).second == 1);

    int zeros = 0;
    for (std::uint64_t s = 0; s < 2000; ++s) zeros += expand_once(s).first == 0;
    CHECK(std::abs(zeros / 2000.0 - 0.5) < 0.05);

    SearchTree tree(planner.tree_options(1e-9));
    const auto root = tree.reset(m, 0);
    Rng rng(7);
    auto trace = planner.selection(tree, root, ReturnVector::zeros(2), rng);
    planner.expansion(tree, trace, rng);
    CHECK(trace.decisions.size() == 2);
    CHECK(tree.decision(trace.leaf()).reward == trace.future);
    trace = planner.selection(tree, root, ReturnVector::zeros(2), rng);
    planner.expansion(tree, trace, rng);
    CHECK(tree.decision(root).fully_expanded());
    esr::Trace at_root;
    at_root.decisions.push_back(root);
    at_root.future = ReturnVector::zeros(2);
    CHECK_THROWS_AS(planner.expansion(tree, at_root, rng), esr::ContractViolation);
    tree.update_stats(tree.decision(root).children[0], root, 0.0);
    tree.update_stats(tree.decision(root).children[1], root, 0.0);
    trace = planner.selection(tree, root, ReturnVector::zeros(2), rng);
    CHECK(trace.chances.size() == 1);
}

TEST_CASE("sample_outcome") {
    const TableMdp m = dominant_mdp();
    Planner planner(m, NluMctsParams{}, esr::parse_utility("product"));
    SearchTree tree(planner.tree_options(1e-9));
    const auto root = tree.reset(m, 0);
    const auto c = tree.add_chance(root, 0);
    Rng rng(1);
    ReturnVector future{0};
    const auto first = planner.sample_outcome(tree, c, future, rng);
    for (int i = 0; i < 10; ++i) CHECK(planner.sample_outcome(tree, c, future, rng) == first);
    CHECK(future == ReturnVector{11});

    const esr::envs::Fishwood env;
    Planner fp(env, NluMctsParams{}, esr::parse_utility("fishwood_min"));
    SearchTree ft(fp.tree_options(1e-9));
    const auto froot = ft.reset(env, env.initial_state());
    const auto river = ft.add_chance(froot, esr::envs::Fishwood::go_river);
    int fish = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        ReturnVector r{0, 0};
        fp.sample_outcome(ft, river, r, rng);
        fish += r[0] == 1.0;
        CHECK(r[1] == 0.0);
    }
    CHECK(std::abs(fish / double(n) - 0.25) <= 0.02);
    CHECK(ft.chance(river).children.size() == 2);
}

TEST_CASE("simulate_rollout") {
    TableMdp one(1, 1, 3);
    for (std::size_t a = 0; a < 3; ++a) one.set(0, a, {{1.0, 0, {2}}});
    Planner planner(one, NluMctsParams{}, esr::parse_utility("product"));
    SearchTree tree(planner.tree_options(1e-9));
    const auto root = tree.reset(one, 0);
    Rng rng(4);
    CHECK(planner.simulate_rollout(tree, root, {1}, rng) == ReturnVector{3});
    const auto term = tree.find_or_create_child(one, tree.add_chance(root, 0), TableMdp::kSlots, {2}).first;
    CHECK(planner.simulate_rollout(tree, term, {7}, rng) == ReturnVector{7});

    // Uniform rollout from the Fishwood start: each of the 13 steps is in the woods
    // with probability 1/2 and collects wood with probability 0.65.
    const esr::envs::Fishwood env;
    Planner fp(env, NluMctsParams{}, esr::parse_utility("fishwood_min"));
    SearchTree ft(fp.tree_options(1e-9));
    const auto froot = ft.reset(env, env.initial_state());
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = fp.simulate_rollout(ft, froot, {0, 0}, rng)[1];
        sum += w;
        sum2 += w * w;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - 13 * 0.5 * 0.65) < 4 * se);
}

TEST_CASE("backpropagate gives every node on the path the same credit") {
    TableMdp chain(1, 3, 1);
    chain.set(0, 0, {{1.0, 1, {2}}});
    chain.set(1, 0, {{1.0, 2, {2}}});
    chain.set(2, 0, {{1.0, 0, {1}}});
    for (const auto& kind : kBoth) {
        Planner planner(chain, kind, esr::parse_utility("product"));
        SearchTree tree(planner.tree_options(1e-9));
        esr::Trace trace;
        trace.decisions.push_back(tree.reset(chain, 0));
        for (int depth = 0; depth < 3; ++depth) {
            const auto c = tree.add_chance(trace.leaf(), 0);
            trace.chances.push_back(c);
            trace.decisions.push_back(
                tree.find_or_create_child(chain, c, (depth + 1) * TableMdp::kSlots + depth + 1, {1}).first);
        }
        Rng rng(6);
        planner.backpropagate(tree, trace, {5}, rng);
        for (auto c : trace.chances) {
            CHECK(tree.chance(c).total_utility == 5.0);
            CHECK(tree.chance(c).visits == 1);
            if (planner.distributional()) {
                const auto& d = *tree.chance(c).bts;
                for (std::size_t j = 0; j < d.size(); ++j) CHECK((d.alpha(j) == 1.0 || d.alpha(j) == 6.0));
            }
        }
        for (auto d : trace.decisions) CHECK(tree.decision(d).visits == 1);

        planner.backpropagate(tree, trace, {-3}, rng);
        for (auto c : trace.chances) CHECK(tree.chance(c).mean_utility() == 1.0);
    }
}

TEST_CASE("root visits equal the iteration count and visits are conserved") {
    const esr::envs::Fishwood env;
    for (const auto& kind : kBoth) {
        Planner planner(env, kind, esr::parse_utility("fishwood_min"));
        SearchTree tree(planner.tree_options(1e-9));
        const auto root = tree.reset(env, env.initial_state());
        Rng rng(8);
        for (int i = 1; i <= 300; ++i) {
            planner.iterate(tree, {0, 0}, rng);
            std::uint64_t sum = 0;
            for (auto c : tree.decision(root).children)
                if (c != esr::kNoNode) sum += tree.chance(c).visits;
            REQUIRE(sum == static_cast<std::uint64_t>(i));
            REQUIRE(tree.decision(root).visits == static_cast<std::uint64_t>(i));
        }
        check_visit_conservation(tree);
    }
}

TEST_CASE("chance-node estimates match exact enumeration of E[u(cumulative)]") {
    const TableMdp m = split_reward_mdp();
    const auto spec = esr::parse_utility("product");
    const Enumerated e0 = enumerate(m, 0, spec), e1 = enumerate(m, 1, spec);
    REQUIRE(e0.esr == doctest::Approx(0.5));
    REQUIRE(e1.esr == doctest::Approx(0.75));
    REQUIRE(e0.summed == doctest::Approx(0.0));
    REQUIRE(e1.summed == doctest::Approx(0.25));

    for (const auto& kind : kBoth) {
        Planner planner(m, kind, spec);
        SearchTree tree(planner.tree_options(1e-9));
        const auto root = tree.reset(m, 0);
        Rng rng(10);
        for (int i = 0; i < 100000; ++i) planner.iterate(tree, ReturnVector::zeros(2), rng);
        const double v0 = tree.chance(tree.decision(root).children[0]).mean_utility();
        const double v1 = tree.chance(tree.decision(root).children[1]).mean_utility();
        INFO(kind_name(kind), " v0=", v0, " v1=", v1);
        CHECK(std::abs(v1 - e1.esr) <= 0.02);
        CHECK(std::abs(v1 - e1.summed) > 0.1);
        if (tree.chance(tree.decision(root).children[0]).visits >= 2000) {
            CHECK(std::abs(v0 - e0.esr) <= 0.02);
            CHECK(std::abs(v0 - e0.summed) > 0.1);
        }
        check_visit_conservation(tree);
    }
}

TEST_CASE("accrued returns shift the utility seen by the planner") {
    // u = r0 * r1 with 2 units of r1 already accrued: the one-step action giving
    // [1, 0] is worth 2, the one giving [0, 1] is worth 0.
    TableMdp m(2, 1, 2);
    m.set(0, 0, {{1.0, 0, {0, 1}}});
    m.set(0, 1, {{1.0, 0, {1, 0}}});
    for (const auto& kind : kBoth) {
        Planner planner(m, kind, esr::parse_utility("product"));
        SearchTree tree(planner.tree_options(1e-9));
        const auto root = tree.reset(m, 0);
        Rng rng(12);
        CHECK(planner.plan(tree, {0, 2}, 30, rng) == 1);
        CHECK(tree.chance(tree.decision(root).children[1]).mean_utility() == 2.0);
        CHECK(tree.chance(tree.decision(root).children[0]).mean_utility() == 0.0);
    }
}

TEST_CASE("episodes") {
    SUBCASE("horizon-1 environment executes exactly one action") {
        const esr::envs::Bandit env(esr::envs::BanditParams::momab(), "momab");
        esr::RunConfig config;
        config.n_exec = 20;
        Rng rng(0);
        const auto r = esr::run_episode(env, DmctsParams{}, esr::parse_utility("momab_scaled_product"), config, rng);
        CHECK(r.trajectory.size() == 1);
        CHECK(r.iterations_per_step == std::vector<std::size_t>{20});
    }
    SUBCASE("accrued ledger equals the executed rewards and the utility matches") {
        const esr::envs::Fishwood env;
        const auto spec = esr::parse_utility("fishwood_min");
        esr::EpisodeRunner runner(env, NluMctsParams{}, spec, 2, true);
        Rng prng(1), erng(2);
        for (int ep = 0; ep < 20; ++ep) {
            const auto r = runner.run_episode(prng, erng);
            CHECK(r.trajectory.size() == 13u);
            ReturnVector sum = ReturnVector::zeros(2);
            for (const auto& t : r.trajectory) sum += t.reward;
            CHECK(sum == r.cumulative);
            CHECK(r.utility == esr::eval_utility(spec, r.cumulative));
        }
        CHECK(runner.tree().root() != runner.tree().initial_root());
    }
    SUBCASE("fixed seeds give bit-identical episodes") {
        const esr::envs::Fishwood env;
        const auto spec = esr::parse_utility("fishwood_min");
        for (const auto& kind : kBoth) {
            auto play = [&] {
                esr::EpisodeRunner runner(env, kind, spec, 4, true);
                Rng prng(21), erng(22);
                std::vector<esr::EpisodeResult> out;
                for (int ep = 0; ep < 10; ++ep) out.push_back(runner.run_episode(prng, erng));
                return out;
            };
            const auto x = play(), y = play();
            for (std::size_t ep = 0; ep < x.size(); ++ep) {
                REQUIRE(x[ep].trajectory.size() == y[ep].trajectory.size());
                for (std::size_t t = 0; t < x[ep].trajectory.size(); ++t) {
                    CHECK(x[ep].trajectory[t].state == y[ep].trajectory[t].state);
                    CHECK(x[ep].trajectory[t].action == y[ep].trajectory[t].action);
                    CHECK(x[ep].trajectory[t].reward == y[ep].trajectory[t].reward);
                }
                CHECK(std::memcmp(&x[ep].utility, &y[ep].utility, sizeof(double)) == 0);
            }
        }
    }
}

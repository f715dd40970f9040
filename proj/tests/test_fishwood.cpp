#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "esr/envs/fishwood.hpp"

using esr::envs::Fishwood;
using esr::envs::FishwoodParams;
using esr::ReturnVector;

namespace {

// Same numbers as a brute-force enumeration over every location sequence.
constexpr double kOptimalEsr = 1.543960140049905;
constexpr double kUniformEsr = 1.0918527136298535;

}  // namespace

TEST_CASE("step") {
    esr::Rng rng(1);
    const Fishwood sure(FishwoodParams{1.0, 0.0, 13});
    for (int i = 0; i < 20; ++i) {
        const auto r = sure.step(sure.initial_state(), Fishwood::go_river, rng);
        CHECK(r.reward == ReturnVector{1, 0});
        CHECK(Fishwood::location(r.next_state) == Fishwood::river);
        CHECK(sure.step(sure.initial_state(), Fishwood::go_woods, rng).reward == ReturnVector{0, 0});
    }
    CHECK_THROWS_AS(sure.step(0, 2, rng), esr::UsageError);

    const Fishwood env;
    int fish = 0, wood = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        fish += env.step(Fishwood::encode(3, Fishwood::woods), Fishwood::go_river, rng).reward[0] == 1.0;
        wood += env.step(Fishwood::encode(3, Fishwood::river), Fishwood::go_woods, rng).reward[1] == 1.0;
    }
    CHECK(std::abs(fish / double(n) - 0.25) <= 0.02);
    CHECK(std::abs(wood / double(n) - 0.65) <= 0.02);
}

TEST_CASE("episodes end after the horizon with constant reward length") {
    const Fishwood env;
    esr::Rng rng(2);
    for (int ep = 0; ep < 100; ++ep) {
        auto s = env.initial_state();
        int steps = 0;
        while (!env.is_terminal(s)) {
            const auto r = env.step(s, rng.below(2), rng);
            CHECK(r.reward.size() == 2);
            CHECK(r.terminal == env.is_terminal(r.next_state));
            s = r.next_state;
            ++steps;
        }
        CHECK(steps == 13);
    }
}

TEST_CASE("seeded steps are reproducible") {
    const Fishwood env;
    esr::Rng a(3), b(3);
    for (int i = 0; i < 200; ++i) {
        const auto x = env.step(Fishwood::encode(i % 13, Fishwood::woods), i % 2, a);
        const auto y = env.step(Fishwood::encode(i % 13, Fishwood::woods), i % 2, b);
        CHECK(x.reward == y.reward);
        CHECK(x.next_state == y.next_state);
    }
}

TEST_CASE("optimal ESR oracle") {
    const auto spec = esr::parse_utility("fishwood_min");
    CHECK(esr::envs::fishwood_optimal_esr(FishwoodParams{1.0, 0.65, 1}, spec) == 0.0);
    CHECK(esr::envs::fishwood_optimal_esr(FishwoodParams{1.0, 1.0, 3}, spec) == 1.0);
    CHECK(esr::envs::fishwood_optimal_esr(FishwoodParams{}, spec) == doctest::Approx(kOptimalEsr).epsilon(1e-12));
    CHECK(esr::envs::fishwood_uniform_esr(FishwoodParams{}, spec) == doctest::Approx(kUniformEsr).epsilon(1e-12));
    CHECK(esr::envs::fishwood_optimal_value(FishwoodParams{}, spec, 0, 3, 5) == 2.0);
    CHECK(esr::envs::fishwood_optimal_value(FishwoodParams{}, spec, 13, 0, 0) ==
          doctest::Approx(kOptimalEsr).epsilon(1e-12));
    CHECK_THROWS_AS(esr::envs::fishwood_optimal_esr(FishwoodParams{}, spec, 100), esr::UsageError);
    CHECK_THROWS_AS(esr::envs::fishwood_optimal_action(FishwoodParams{}, spec, 0, 0, 0), esr::UsageError);
}

TEST_CASE("oracle is monotone in horizon and probabilities") {
    const auto spec = esr::parse_utility("fishwood_min");
    for (double pf = 0.0; pf <= 1.0; pf += 0.25) {
        for (double pw = 0.0; pw <= 1.0; pw += 0.25) {
            double prev = -1.0;
            for (int h = 1; h <= 10; ++h) {
                const double v = esr::envs::fishwood_optimal_esr(FishwoodParams{pf, pw, h}, spec);
                CHECK(v >= prev - 1e-12);
                prev = v;
                if (pf + 0.25 <= 1.0) {
                    CHECK(esr::envs::fishwood_optimal_esr(FishwoodParams{pf + 0.25, pw, h}, spec) >= v - 1e-12);
                }
                if (pw + 0.25 <= 1.0) {
                    CHECK(esr::envs::fishwood_optimal_esr(FishwoodParams{pf, pw + 0.25, h}, spec) >= v - 1e-12);
                }
            }
        }
    }
}

TEST_CASE("uniform-policy oracle agrees with Monte Carlo") {
    const Fishwood env;
    const auto spec = esr::parse_utility("fishwood_min");
    esr::Rng rng(4);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int ep = 0; ep < n; ++ep) {
        ReturnVector acc{0, 0};
        for (auto s = env.initial_state(); !env.is_terminal(s);) {
            const auto r = env.step(s, rng.below(2), rng);
            acc += r.reward;
            s = r.next_state;
        }
        const double u = esr::eval_utility(spec, acc);
        sum += u;
        sum2 += u * u;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - kUniformEsr) < 4 * se);
}

TEST_CASE("parameters") {
    const auto p = FishwoodParams::from({{"p_fish", "0.5"}, {"horizon", "4"}});
    CHECK(p.p_fish == 0.5);
    CHECK(p.p_wood == 0.65);
    CHECK(p.horizon == 4);
    CHECK_THROWS_AS(FishwoodParams::from({{"p_fish", "1.5"}}), esr::ConfigError);
    CHECK_THROWS_AS(FishwoodParams::from({{"horizon", "0"}}), esr::ConfigError);
}

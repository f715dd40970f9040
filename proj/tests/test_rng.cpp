#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "esr/rng.hpp"

using esr::Rng;

TEST_CASE("same seed gives the same stream") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a() == b());
}

TEST_CASE("derived seeds differ per stream") {
    CHECK(esr::derive_seed(7, 0) != esr::derive_seed(7, 1));
    CHECK(esr::derive_seed(7, 0) != esr::derive_seed(8, 0));
    CHECK(esr::derive_seed(7, 3) == esr::derive_seed(7, 3));
}

TEST_CASE("uniform lies in [0, 1) with mean 1/2") {
    Rng rng(1);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("below is uniform over its range") {
    Rng rng(2);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto k = rng.below(7);
        REQUIRE(k < 7);
        ++counts[k];
    }
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
    CHECK(chi2 < 22.46);  // chi-square, 6 dof, p = 0.001
    CHECK(rng.below(1) == 0);
}

TEST_CASE("normal has zero mean and unit variance") {
    Rng rng(3);
    double s = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        s += x;
        s2 += x * x;
    }
    CHECK(std::abs(s / n) < 0.01);
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("split streams are reproducible and distinct") {
    Rng a(9), b(9);
    Rng a1 = a.split(1), b1 = b.split(1);
    CHECK(a1() == b1());
    Rng c(9);
    Rng c2 = c.split(2);
    Rng d(9);
    Rng d1 = d.split(1);
    CHECK(c2() != d1());
}

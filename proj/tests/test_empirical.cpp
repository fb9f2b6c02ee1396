#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "huberband/distributions.hpp"
#include "huberband/empirical.hpp"
#include "huberband/normal.hpp"
#include "oracles.hpp"

using namespace huberband;

TEST_CASE("empirical quantile uses the ceiling convention") {
    const SortedSample s({4, 1, 3, 2});
    CHECK(empirical_quantile(s, 0.5) == 2);
    CHECK(empirical_quantile(s, 1.0) == 4);
    CHECK(empirical_quantile(s, 0.6) == 3);
    CHECK(empirical_quantile(s, 0.25) == 1);
    CHECK(empirical_quantile(s, 0.2500001) == 2);
    CHECK_THROWS_AS(empirical_quantile(s, 0.0), DomainError);
    CHECK_THROWS_AS(empirical_quantile(s, 1.01), DomainError);
}

TEST_CASE("quantile_index is exact at representable products") {
    // the double 0.3 lies just below 3/10: the product rounds to 3 but its floor is 2
    CHECK(quantile_index(10, 0.3) == 3);
    CHECK(quantile_index(1000, 0.001) == 2);
    CHECK(quantile_index(4, 0.5) == 2);
    CHECK(quantile_index(5, 1e-300) == 1);
    CHECK(floor_index(10, 0.3) == 2);
    CHECK(floor_index(4, 0.49) == 1);
    CHECK(floor_index(7, 0.0) == 0);
    for (std::size_t n : {7u, 100u, 2000u, 99991u}) {
        for (std::size_t k = 1; k <= std::min<std::size_t>(50, n); ++k) {
            const double q = static_cast<double>(k) / static_cast<double>(n);
            const long double exact = static_cast<long double>(q) * n;
            CHECK(quantile_index(n, q) == static_cast<std::size_t>(std::ceil(exact)));
            CHECK(floor_index(n, q) == static_cast<std::size_t>(std::floor(exact)));
        }
    }
}

TEST_CASE("empirical cdf") {
    const SortedSample s({1, 2, 3});
    CHECK(empirical_cdf(s, 2) == doctest::Approx(2.0 / 3));
    CHECK(empirical_cdf(s, 0.5) == 0);
    CHECK(empirical_cdf(s, 9) == 1);
}

TEST_CASE("dkw radius") {
    CHECK(dkw_radius(2000, 0.05) == doctest::Approx(std::sqrt(std::log(40.0) / 4000)).epsilon(1e-15));
    CHECK(dkw_radius(2000, 0.05) == doctest::Approx(0.030368).epsilon(1e-5));
    CHECK(dkw_radius(1, 2 / std::exp(2.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dkw_radius(4000, 0.05) == doctest::Approx(dkw_radius(1000, 0.05) / 2).epsilon(1e-15));
    CHECK_THROWS_AS(dkw_radius(0, 0.05), DomainError);
    CHECK_THROWS_AS(dkw_radius(10, 1.0), DomainError);
}

TEST_CASE("median and MAD") {
    auto m = median_and_mad(SortedSample({0, 0, 0}));
    CHECK(m.median == 0);
    CHECK(m.scale == 0);
    m = median_and_mad(SortedSample({-1, 0, 1}));
    CHECK(m.median == 0);
    CHECK(m.scale == doctest::Approx(1 / 0.6744897501960817).epsilon(1e-12));
    std::vector<double> v;
    const auto g = LocationFamily::gaussian().sample(0, 100000, 22);
    for (double x : g.values()) v.push_back(2 * x);
    m = median_and_mad(SortedSample(v));
    CHECK(std::abs(m.scale - 2) <= 0.05);
}

TEST_CASE("quantiles are monotone and shift-equivariant") {
    const auto s = LocationFamily::laplace().sample(0, 301, 4);
    std::vector<double> shifted;
    for (double x : s.values()) shifted.push_back(x + 0.75);
    const SortedSample t(shifted);
    double prev = -kInf;
    for (int i = 1; i <= 1000; ++i) {
        const double q = i / 1000.0;
        const double a = empirical_quantile(s, q);
        CHECK(a >= prev);
        prev = a;
        CHECK(empirical_quantile(t, q) == s.order_stat(quantile_index(301, q)) + 0.75);
    }
}

TEST_CASE("ks distance at order statistics") {
    const SortedSample s({0.0});
    CHECK(ks_distance(s, [](double x) { return Phi(x); }) == doctest::Approx(0.5));
    const SortedSample u({0.25, 0.75});
    // uniform cdf: max gap 0.25 on either side
    CHECK(ks_distance(u, [](double x) { return std::clamp(x, 0.0, 1.0); }) == doctest::Approx(0.25));
}

TEST_CASE("DKW band holds at nominal level") {
    const std::size_t reps = 2000, n = 500;
    const double r = dkw_radius(n, 0.05);
    std::size_t ok = 0;
    for (std::size_t i = 0; i < reps; ++i) {
        const auto s = LocationFamily::gaussian().sample(0, n, 1000 + i);
        ok += ks_distance(s, [](double x) { return Phi(x); }) <= r;
    }
    CHECK(static_cast<double>(ok) / reps >= oracle::mc_floor(0.95, reps));
}

TEST_CASE("read_sample accepts lines and a one-column csv") {
    std::istringstream a("1.5\n-2\n\n3e-1\n");
    auto s = read_sample(a);
    CHECK(s.size() == 3);
    CHECK(s.min() == -2);
    std::istringstream b("x\n4\n2\n");
    s = read_sample(b);
    CHECK(s.size() == 2);
    CHECK(s.max() == 4);
    std::istringstream c("1\nfoo\n");
    CHECK_THROWS_AS(read_sample(c), ConfigError);
    std::istringstream d("");
    CHECK_THROWS_AS(read_sample(d), ConfigError);
    CHECK_THROWS_AS(SortedSample({1.0, std::nan("")}), ConfigError);
}

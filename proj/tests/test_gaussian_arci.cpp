#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "huberband/distributions.hpp"
#include "huberband/gaussian_arci.hpp"
#include "huberband/harness.hpp"
#include "huberband/normal.hpp"
#include "huberband/rng.hpp"
#include "oracles.hpp"

using namespace huberband;

namespace {

SortedSample normal_sample(double theta, std::size_t n, std::uint64_t seed) {
    return LocationFamily::gaussian().sample(theta, n, seed);
}

std::vector<double> as_vector(const SortedSample& s) { return {s.values().begin(), s.values().end()}; }

}  // namespace

TEST_CASE("theta_hat estimators on clean data") {
    const auto s = normal_sample(0, 100000, 17);
    // population value: Phi^{-1}(2(1 - Phi(2))) + 2
    const double pop = Phi_inv(2 * Phi_upper(2.0)) + 2.0;
    CHECK(pop == doctest::Approx(0.3104).epsilon(1e-3));
    CHECK(std::abs(theta_hat_L(s, 2, 1) - pop) <= 0.05);
    CHECK(std::abs(theta_hat_R(s, 2, 1) + pop) <= 0.05);
    bool clamped = false;
    const SortedSample tiny({0, 1, 2});
    theta_hat_L(tiny, 6, 1, &clamped);
    CHECK(clamped);
    CHECK(theta_hat_L(tiny, 6, 1) == doctest::Approx(6.0));
    CHECK(theta_hat_R(tiny, 6, 1) == doctest::Approx(2.0 - 6.0));
}

TEST_CASE("t_epsilon") {
    CHECK(t_epsilon(0, 2000, 0.05) == doctest::Approx(1.875411).epsilon(1e-6));
    CHECK(t_epsilon(0, 2000, 0.05) == doctest::Approx(oracle::Phi_inv_upper(dkw_radius(2000, 0.05))).epsilon(1e-12));
    CHECK(t_epsilon(0.05, 1000000000, 0.05) == doctest::Approx(1.64485).epsilon(1e-3));
    CHECK_THROWS_AS(t_epsilon(0.99, 100, 0.05), DomainError);
    const auto tp = gaussian_tuning(0.01, 5000, 0.05);
    CHECK(tp.r_eps == doctest::Approx(2 / tp.t_eps));
}

TEST_CASE("breakpoint grid") {
    const auto g = breakpoint_grid(100, 1.6, 3.0);
    REQUIRE(!g.empty());
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(g[i] >= 1.6);
        CHECK(g[i] <= 3.0);
        if (i) CHECK(g[i] > g[i - 1]);
    }
    // i/(2n) levels: Phi_upper(T_i) * 200 is an integer
    for (double t : g) CHECK(std::abs(Phi_upper(t) * 200 - std::round(Phi_upper(t) * 200)) <= 1e-9);
}

TEST_CASE("exact optimizer matches a dense scan") {
    Rng rng(99);
    for (int rep = 0; rep < 12; ++rep) {
        const std::size_t n = 10 + static_cast<std::size_t>(rng.uniform() * 190);
        ContaminationSpec cs;
        cs.eps = 0.1 * rng.uniform();
        cs.q = PointMass{8 * rng.uniform() - 4};
        const auto s = generate_contaminated(cs, n, 500 + rep);
        const auto v = as_vector(s);
        // t_max falls below 1.6 for n this small, so use a fixed range
        const double t_lo = 0.5, t_hi = 3.5;
        const auto res = optimize_over_t(s, t_lo, t_hi, 1.0, 2.0);
        double L = -kInf, U = kInf;
        const int m = 100000;
        auto visit = [&](double t) {
            L = std::max(L, oracle::lower_objective(v, t, 1.0, 2.0));
            U = std::min(U, oracle::upper_objective(v, t, 1.0, 2.0));
        };
        for (int i = 0; i <= m; ++i) visit(t_lo + (t_hi - t_lo) * i / m);
        for (double b : breakpoint_grid(n, t_lo, t_hi)) {
            visit(std::max(t_lo, b - 1e-12));
            visit(std::min(t_hi, b + 1e-12));
        }
        CAPTURE(n);
        CHECK(std::abs(res.interval.lower - L) <= 1e-9);
        CHECK(std::abs(res.interval.upper - U) <= 1e-9);
        CHECK(lower_objective(s, 2.0, 1.0, 2.0) == doctest::Approx(oracle::lower_objective(v, 2.0, 1.0, 2.0)));
    }
}

TEST_CASE("enlarging the t range never enlarges the interval") {
    for (int rep = 0; rep < 20; ++rep) {
        ContaminationSpec cs;
        cs.eps = 0.03;
        cs.q = GaussianAt{5, 1};
        const auto s = generate_contaminated(cs, 800, 40 + rep);
        const double t_hi = t_max_gaussian(800, 0.05);
        const auto narrow = optimize_over_t(s, 1.8, t_hi - 0.2, 1, 2).interval;
        const auto wide = optimize_over_t(s, 1.6, t_hi, 1, 2).interval;
        CHECK(wide.lower >= narrow.lower);
        CHECK(wide.upper <= narrow.upper);
    }
    const auto vac = optimize_over_t(normal_sample(0, 50, 1), 3, 2, 1, 2);
    CHECK(vac.interval.lower == -kInf);
    CHECK(vac.interval.upper == kInf);
    CHECK(!vac.diagnostics.empty());
}

TEST_CASE("clean-data coverage and length") {
    const std::size_t reps = 1000, n = 2000;
    const double bound = 4 / t_epsilon(0, n, 0.05);
    CHECK(bound == doctest::Approx(2.134).epsilon(1e-3));
    std::size_t cover = 0, short_enough = 0;
    for (std::size_t i = 0; i < reps; ++i) {
        const auto iv = arci_gaussian(normal_sample(3, n, mix_seed(5, i)), {}).interval;
        cover += iv.contains(3);
        short_enough += iv.length() <= bound;
    }
    CHECK(cover / double(reps) >= oracle::mc_floor(0.95, reps));
    CHECK(short_enough / double(reps) >= 0.95);
}

TEST_CASE("one-sided guarantees hold simultaneously over the grid") {
    const std::size_t reps = 300, n = 2000;
    const double t_hi = t_max_gaussian(n, 0.05);
    const auto grid = breakpoint_grid(n, 1.6, t_hi);
    for (double eps : {0.0, 0.05}) {
        ContaminationSpec cs;
        cs.eps = eps;
        cs.q = PointMass{10};
        std::size_t ok = 0, two_sided = 0;
        const double te = t_epsilon(eps, n, 0.05);
        for (std::size_t i = 0; i < reps; ++i) {
            const auto s = generate_contaminated(cs, n, mix_seed(77, i));
            bool all = true;
            for (double t : grid) {
                all = all && theta_hat_L(s, t, 1) <= 2 / t + 1e-12 && theta_hat_R(s, t, 1) >= -2 / t - 1e-12;
                if (!all) break;
            }
            ok += all;
            two_sided += theta_hat_L(s, te, 1) >= 0 && theta_hat_R(s, te, 1) <= 0;
        }
        CAPTURE(eps);
        CHECK(ok / double(reps) >= oracle::mc_floor(0.95, reps));
        CHECK(two_sided / double(reps) >= oracle::mc_floor(0.95, reps));
    }
}

TEST_CASE("sigma scaling") {
    const auto s = normal_sample(0, 1000, 8);
    std::vector<double> v;
    for (double x : s.values()) v.push_back(3 * x);
    GaussianArciConfig c1, c3;
    c3.sigma = 3;
    const auto a = arci_gaussian(s, c1).interval;
    const auto b = arci_gaussian(SortedSample(v), c3).interval;
    CHECK(b.lower == doctest::Approx(3 * a.lower).epsilon(1e-12));
    CHECK(b.upper == doctest::Approx(3 * a.upper).epsilon(1e-12));
    GaussianArciConfig bad;
    bad.sigma = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {};
    bad.alpha = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("eps_max = 0.49 variant") {
    const std::size_t n = 100000;
    const double R = conservative_radius(n, 0.05);
    const auto clean = arci_gaussian_049(normal_sample(0, n, 3), 0.05).interval;
    CHECK(clean.contains(0));
    CHECK(clean.length() <= 2 * R);
    ContaminationSpec cs;
    cs.eps = 0.3;
    cs.q = PointMass{1e6};
    int cover = 0;
    for (int i = 0; i < 20; ++i) {
        const auto iv = arci_gaussian_049(generate_contaminated(cs, n, 900 + i), 0.05).interval;
        cover += iv.contains(0);
        CHECK(iv.length() <= 2 * R + 1e-12);
    }
    CHECK(cover >= 19);
}

TEST_CASE("small eps_max variant") {
    std::vector<double> scaled;
    for (std::size_t n : {1000u, 10000u, 100000u}) {
        const double em = 1 / std::sqrt(double(n));
        std::vector<double> len;
        int cover = 0;
        for (int i = 0; i < 40; ++i) {
            const auto iv = arci_gaussian_small_epsmax(normal_sample(0, n, mix_seed(n, i)), 0.05, em).interval;
            cover += iv.contains(0);
            len.push_back(iv.length());
        }
        std::nth_element(len.begin(), len.begin() + 20, len.end());
        scaled.push_back(len[20] * std::sqrt(double(n)));
        CHECK(cover >= 36);
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    CHECK(*hi / *lo < 3);
    const auto g = small_epsmax_grid(0.01);
    CHECK(g.front() == 0);
    CHECK(g.back() == 0.01);
    CHECK_THROWS_AS(arci_gaussian_small_epsmax(normal_sample(0, 100, 1), 0.05, 0.2), ConfigError);
}

TEST_CASE("baseline intervals") {
    const auto s = normal_sample(0, 10000, 2);
    const auto m = median_interval(s, 0);
    CHECK(m.length() / 2 == doctest::Approx(0.034936).epsilon(1e-4));
    CHECK(median_interval(normal_sample(0, 10, 1), 0.05).length() / 2 ==
          doctest::Approx(std::sqrt(2.1 * std::numbers::pi) * (1.36 / std::sqrt(10.0) + 0.05)));
    CHECK(conservative_interval(s, 1).length() == doctest::Approx(2.0));
    CHECK_THROWS_AS(conservative_interval(s, 0), ConfigError);
    CHECK_THROWS_AS(median_interval(s, 1.0), ConfigError);
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "huberband/general_arci.hpp"
#include "huberband/harness.hpp"
#include "huberband/rng.hpp"

using namespace huberband;

TEST_CASE("tail levels") {
    const double expected = (6 / 0.95) * (100 * std::log(640.0) / (3 * 0.95 * 1e6));
    CHECK(q_bar(0, 1000000, 0.05, 0.05) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(q_bar(0, 1000000, 0.05, 0.05) == doctest::Approx(1.4319e-3).epsilon(1e-4));
    CHECK(q_under(0, 1000, 0.05, 0.05) == doctest::Approx(2.5e-5).epsilon(1e-12));
    CHECK(q_bar(0, 1000000000000ull, 0.05, 0.05) < 1e-8);
    CHECK(q_bar(0.01, 100000, 0.05, 0.05) > q_bar(0, 100000, 0.05, 0.05));
    CHECK_THROWS_AS(q_bar(0.2, 1000, 0.05, 0.05), DomainError);
    CHECK_THROWS_AS(q_under(0, 1000, 0, 0.05), ConfigError);
}

TEST_CASE("theoretical rates") {
    const auto lap = LocationFamily::laplace();
    for (std::size_t n : {1000u, 100000u})
        for (double e : {0.0, 1e-4}) CHECK(theoretical_rate(lap, n, e) == 1.0);
    CHECK(theoretical_rate(LocationFamily::bates(2), 10000, 0) == doctest::Approx(1e-2).epsilon(1e-14));
    CHECK(theoretical_rate(LocationFamily::mollifier(1), 10000, 0) ==
          doctest::Approx(std::pow(1 / std::log(1e4), 2.0)).epsilon(1e-14));
    CHECK(theoretical_rate(LocationFamily::generalized_gaussian(1), 5000, 0.01) == 1.0);
}

TEST_CASE("monotone likelihood ratio detection") {
    CHECK(has_monotone_ratio(LocationFamily::gaussian()));
    CHECK(has_monotone_ratio(LocationFamily::laplace()));
    CHECK(has_monotone_ratio(LocationFamily::bates(3)));
    CHECK(!has_monotone_ratio(LocationFamily::student_t(3)));
}

TEST_CASE("the separation chain on the desk grid") {
    const std::vector<LocationFamily> fams{LocationFamily::uniform(), LocationFamily::bates(2),
                                           LocationFamily::generalized_gaussian(2), LocationFamily::mollifier(1)};
    for (const auto& f : fams) {
        for (double e : {0.0, 0.005, 0.025}) {
            const std::size_t n = 100000;
            const double rd = r_down(f, e, n, 0.05, 0.05), ru = r_under(f, e, n, 0.05, 0.05);
            const double rb = r_bar(f, e, n, 0.05, 0.05), rp = r_up(f, e, n, 0.05, 0.05);
            CAPTURE(f.name());
            CAPTURE(e);
            CHECK(rd <= ru + 1e-8);
            CHECK(ru <= 2 * rb + 1e-8);
            CHECK(rb <= rp + 1e-8);
        }
    }
    CHECK_THROWS_AS(r_bar(LocationFamily::gaussian(), 0, 1000, 0.05, 0.05), DomainError);
}

TEST_CASE("r_up bisection agrees with a brute-force scan") {
    Rng rng(31);
    const std::vector<LocationFamily> fams{LocationFamily::gaussian(), LocationFamily::laplace(),
                                           LocationFamily::generalized_gaussian(1.5), LocationFamily::bates(3)};
    for (int rep = 0; rep < 12; ++rep) {
        const auto& f = fams[rep % fams.size()];
        const double e = 0.01 * rng.uniform();
        const std::size_t n = 20000 + static_cast<std::size_t>(rng.uniform() * 1e6);
        const double r = r_up(f, e, n, 0.05, 0.05);
        if (!std::isfinite(r)) continue;
        const double a = f.upper_quantile(q_bar(e, n, 0.05, 0.05));
        const double target = std::log(6 / 0.95);
        auto holds = [&](double x) {
            const double lp = f.log_pdf(a + x);
            return std::isinf(lp) || f.log_pdf(a) - lp >= target;
        };
        const double cap = 8 * f.tail_extent();
        const int m = 100000;
        int k = 0;
        while (k < m && !holds(cap * k / m)) ++k;
        const double tol = 2 * f.numeric().root_tol;
        CAPTURE(f.name());
        CHECK(r >= cap * (k - 1) / m - tol);
        CHECK(r <= cap * k / m + tol);
    }
}

TEST_CASE("heavy tails give a rate bounded away from zero") {
    const auto t3 = LocationFamily::student_t(3);
    double prev = kInf;
    for (std::size_t n : {100000u, 1000000u, 10000000u}) {
        const double r = r_up(t3, 0, n, 0.05, 0.05);
        CHECK(r > 0.5);
        CHECK(r <= prev * (1 + 1e-9));
        prev = r;
    }
}

TEST_CASE("t_eps_general sits inside its bracket") {
    const auto f = LocationFamily::generalized_gaussian(2);
    const double qb = q_bar(0, 100000, 0.05, 0.05);
    const double rb = r_bar(f, 0, 100000, 0.05, 0.05);
    const double t = t_eps_general(f, rb, qb, 0.05);
    CHECK(t >= rb);
    CHECK(t <= rb + f.upper_quantile(qb) + 1e-12);
    CHECK(f.sf(t - rb) >= (6 / 0.95) * f.sf(t) * (1 - 1e-9));
    CHECK_THROWS_AS(t_eps_general(f, kInf, qb, 0.05), ConstructionError);
}

TEST_CASE("general ARCI plan and coverage") {
    CHECK_THROWS_AS(plan_general_arci(LocationFamily::laplace(), 1000, 0.05, 0.05), ConfigError);
    const auto grid = general_eps_grid(0.05, 8);
    CHECK(grid.size() == 9);
    CHECK(grid.front() == 0);
    CHECK(grid.back() == doctest::Approx(0.05));

    for (const auto& f : {LocationFamily::laplace(), LocationFamily::generalized_gaussian(2)}) {
        const std::size_t n = 20000;
        const auto plan = plan_general_arci(f, n, 0.05, 0.05, 16);
        REQUIRE(!plan.points.empty());
        for (const auto& p : plan.points) {
            CHECK(p.threshold > 0);
            CHECK(p.threshold < 1);
            CHECK(p.r > 0);
        }
        ContaminationSpec cs;
        cs.family = f;
        cs.theta = 1.5;
        cs.eps = 0.02;
        cs.q = PointMass{12};
        int cover = 0;
        const int reps = 40;
        for (int i = 0; i < reps; ++i) cover += arci_general(generate_contaminated(cs, n, mix_seed(3, i)), plan).interval.contains(1.5);
        CAPTURE(f.name());
        CHECK(cover >= 37);
    }
}

TEST_CASE("rate quantities bundle") {
    const auto rq = rate_quantities(LocationFamily::bates(3), 0.001, 100000, 0.05, 0.05);
    CHECK(rq.r_bar > 0);
    CHECK(rq.t_eps >= rq.r_bar);
    CHECK(rq.q_under < rq.q_bar);
    CHECK(rq.n == 100000);
}

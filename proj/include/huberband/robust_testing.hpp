#pragma once

#include <cstddef>
#include <vector>

#include "huberband/distributions.hpp"
#include "huberband/empirical.hpp"
#include "huberband/general_arci.hpp"
#include "huberband/interval.hpp"

namespace huberband {

enum class Direction { Minus, Plus };
enum class Regime { Gaussian005, General, SmallEpsMax };
enum class TestOutcome { AcceptNull, RejectNull };

struct TestSpec {
    double theta0 = 0;
    Direction direction = Direction::Minus;
    double r_eps = 0;
    double t_eps = 0;
    double threshold = 0;
    Regime regime = Regime::Gaussian005;

    void validate() const;
};

double gaussian005_threshold(double t);
double general_threshold(const LocationFamily& family, double t, double eps, std::size_t n, double alpha);
double small_epsmax_threshold(double t, double eps, std::size_t n, double alpha);

// Minus rejects iff #{X_i - (theta0 - r) >= t} <= n * threshold; Plus rejects
// iff #{X_i - (theta0 + r) <= -t} < n * threshold. Counts are compared
// against n * threshold without dividing, so the inversion below is exact.
TestOutcome run_test(const TestSpec& spec, const SortedSample& s);

// One (t, r, threshold) triple; instantiated at theta0 as a Minus/Plus pair.
struct GridTest {
    double t = 0;
    double r = 0;
    double threshold = 0;
    Regime regime = Regime::Gaussian005;

    TestSpec at(double theta0, Direction d) const { return {theta0, d, r, t, threshold, regime}; }
};

// Gaussian tests at the given t values with r = margin / t.
std::vector<GridTest> gaussian005_tests(const std::vector<double>& t_values, double margin_mult = 2.0);
// t_lo, t_hi and both sides of every breakpoint in between.
std::vector<double> gaussian005_t_grid(std::size_t n, double t_lo, double t_hi, double delta = 1e-11);
std::vector<GridTest> small_epsmax_tests(std::size_t n, double alpha, double eps_max);
std::vector<GridTest> general_tests(const GeneralArciPlan& plan);

// {theta : every test of the grid accepts}, in closed form.
Interval invert_tests(const SortedSample& s, const std::vector<GridTest>& tests);
// Convenience: grid holds t values (Gaussian005; empty = breakpoint grid on
// [1.6, t_max]) or is ignored (General, SmallEpsMax use their eps grids).
Interval invert_tests(const SortedSample& s, double alpha, Regime regime, const LocationFamily& family,
                      double eps_max, const std::vector<double>& grid = {});

bool all_accept(const SortedSample& s, const std::vector<GridTest>& tests, double theta);

}  // namespace huberband

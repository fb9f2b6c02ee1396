#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace huberband {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericConfig {
    double quad_tol = 1e-12;
    double root_tol = 1e-10;
    int max_iter = 200;

    void validate() const;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using RealFn = std::function<double(double)>;

// Adaptive Gauss-Kronrod over [a, b]; either limit may be infinite.
// Interior breakpoints (discontinuities, kinks) are integrated piecewise.
double integrate(const RealFn& f, double a, double b, double rel_tol = 1e-12,
                 const std::vector<double>& breaks = {});

// Smallest x in [lo, hi] with pred(x) true, assuming pred is monotone
// (false ... false true ... true). Returns hi when pred(lo) is false and
// the bracket is exhausted; callers check pred(hi) first.
double bisect_first_true(const std::function<bool(double)>& pred, double lo, double hi,
                         double tol, int max_iter);

// Largest x in [lo, hi] with pred(x) true for pred monotone true ... false.
double bisect_last_true(const std::function<bool(double)>& pred, double lo, double hi,
                        double tol, int max_iter);

struct Extremum {
    double arg;
    double value;
};

// Maximum of f over [a, b]: dense scan, then Brent refinement around the
// best scan points. Endpoints are always evaluated.
Extremum maximize_scan(const RealFn& f, double a, double b, int scan_points = 256,
                       int refine_top = 3);

}  // namespace huberband

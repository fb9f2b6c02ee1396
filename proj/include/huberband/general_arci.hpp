#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "huberband/distributions.hpp"
#include "huberband/gaussian_arci.hpp"

namespace huberband {

double q_bar(double eps, std::size_t n, double alpha, double eps_max);
double q_under(double eps, std::size_t n, double alpha, double eps_max);

// Numerical check that f(t - r) / f(t) is nondecreasing in t (512-point grid,
// several r). Families failing it route r_up/r_down to r_bar/r_under.
bool has_monotone_ratio(const LocationFamily& family);

double r_up(const LocationFamily& family, double eps, std::size_t n, double alpha, double eps_max);
double r_down(const LocationFamily& family, double eps, std::size_t n, double alpha, double eps_max);
double r_bar(const LocationFamily& family, double eps, std::size_t n, double alpha, double eps_max);
double r_under(const LocationFamily& family, double eps, std::size_t n, double alpha, double eps_max);

// Largest t in [r_bar, r_bar + F^{-1}(1 - q_bar)] with
// 1 - F(t - r_bar) >= (6 / (1 - eps_max)) (1 - F(t)).
double t_eps_general(const LocationFamily& family, double r_bar_value, double q_bar_value,
                     double eps_max);

struct RateQuantities {
    double q_bar = 0, q_under = 0;
    double r_bar = 0, r_under = 0, r_up = 0, r_down = 0;
    double t_eps = 0;
    double eps = 0, eps_max = 0, alpha = 0;
    std::size_t n = 0;
};

RateQuantities rate_quantities(const LocationFamily& family, double eps, std::size_t n, double alpha,
                               double eps_max);

// Closed-form rate shape of the four canonical families (Gaussian and Laplace
// are read as generalized Gaussian with beta = 2 and 1, Uniform as Bates k = 1).
double theoretical_rate(const LocationFamily& family, std::size_t n, double eps);

// Per-eps tuning of the general ARCI; depends only on (family, n, alpha, eps_max),
// so it is built once and reused across samples.
struct GeneralGridPoint {
    double eps = 0;
    double t = 0;
    double r = 0;
    double threshold = 0;
};

struct GeneralArciPlan {
    std::size_t n = 0;
    double alpha = 0;
    double eps_max = 0;
    std::vector<GeneralGridPoint> points;
    std::vector<std::string> diagnostics;
};

std::vector<double> general_eps_grid(double eps_max, std::size_t grid_size);

GeneralArciPlan plan_general_arci(const LocationFamily& family, std::size_t n, double alpha,
                                  double eps_max, std::size_t grid_size = 32);

ArciResult arci_general(const SortedSample& s, const GeneralArciPlan& plan);
ArciResult arci_general(const SortedSample& s, const LocationFamily& family, double alpha,
                        double eps_max, std::size_t grid_size = 32);

}  // namespace huberband

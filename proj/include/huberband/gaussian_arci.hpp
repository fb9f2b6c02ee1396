#pragma once

#include <string>
#include <vector>

#include "huberband/empirical.hpp"
#include "huberband/interval.hpp"

namespace huberband {

enum class EpsMaxMode { Std005, Large049, Small };

struct GaussianArciConfig {
    double alpha = 0.05;
    double sigma = 1.0;
    double t_min = 1.6;
    double margin_mult = 2.0;
    EpsMaxMode mode = EpsMaxMode::Std005;
    double eps_max = 0.05;  // used by Small

    void validate() const;
};

struct TuningParams {
    double t_eps;
    double r_eps;
};

struct ArciResult {
    Interval interval;
    std::vector<std::string> diagnostics;
};

// F_n^{-1}(2(1 - Phi(t))) + t sigma; *clamped set when the level falls below 1/n.
double theta_hat_L(const SortedSample& s, double t, double sigma, bool* clamped = nullptr);
// F_n^{-1}(1 - 2(1 - Phi(t))) - t sigma.
double theta_hat_R(const SortedSample& s, double t, double sigma, bool* clamped = nullptr);

double t_epsilon(double eps, std::size_t n, double alpha);
TuningParams gaussian_tuning(double eps, std::size_t n, double alpha);
double t_max_gaussian(std::size_t n, double alpha);

// Breakpoints Phi^{-1}(1 - i/(2n)) lying in [t_lo, t_hi], increasing.
std::vector<double> breakpoint_grid(std::size_t n, double t_lo, double t_hi);

// Objectives of the max/min over t, evaluated pointwise.
double lower_objective(const SortedSample& s, double t, double sigma, double margin_mult);
double upper_objective(const SortedSample& s, double t, double sigma, double margin_mult);

// Exact sup/inf of the objectives over [t_lo, t_hi]; vacuous (whole line)
// when t_lo >= t_hi.
ArciResult optimize_over_t(const SortedSample& s, double t_lo, double t_hi, double sigma,
                           double margin_mult);

ArciResult arci_gaussian(const SortedSample& s, const GaussianArciConfig& cfg);
// t in [4, t_max], margin 8/t.
ArciResult just_coverage_interval(const SortedSample& s, double alpha, double sigma = 1.0);
double conservative_radius(std::size_t n, double alpha);
ArciResult arci_gaussian_049(const SortedSample& s, double alpha);
double t_epsilon_small(double eps, std::size_t n, double alpha, double eps_max);
std::vector<double> small_epsmax_grid(double eps_max);
ArciResult arci_gaussian_small_epsmax(const SortedSample& s, double alpha, double eps_max);
Interval median_interval(const SortedSample& s, double eps, double sigma = 1.0);
Interval conservative_interval(const SortedSample& s, double R);

// Dispatch on cfg.mode.
ArciResult gaussian_ci(const SortedSample& s, const GaussianArciConfig& cfg);

}  // namespace huberband

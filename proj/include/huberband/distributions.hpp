#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "huberband/empirical.hpp"
#include "huberband/numeric.hpp"

namespace huberband {

enum class FamilyKind { Gaussian, Laplace, StudentT, GeneralizedGaussian, Mollifier, Bates, Uniform };

// Symmetric unimodal location family centred at 0 with unit scale.
class LocationFamily {
public:
    static LocationFamily gaussian();
    static LocationFamily laplace();
    static LocationFamily student_t(double nu);
    static LocationFamily generalized_gaussian(double beta);
    static LocationFamily mollifier(double beta);
    static LocationFamily bates(int k);
    static LocationFamily uniform();
    // "gaussian", "laplace", "t:<nu>", "gengauss:<beta>", "mollifier:<beta>",
    // "bates:<k>", "uniform".
    static LocationFamily parse(std::string_view spec);

    FamilyKind kind() const { return kind_; }
    double shape() const { return shape_; }
    int bates_k() const { return static_cast<int>(shape_); }
    double norm_const() const { return norm_; }
    std::string name() const;
    const NumericConfig& numeric() const { return cfg_; }
    LocationFamily with_numeric(const NumericConfig& cfg) const;

    double pdf(double x) const;
    double log_pdf(double x) const;
    double cdf(double x) const;
    // 1 - F(x), accurate in the upper tail.
    double sf(double x) const;
    double quantile(double q) const;
    // F^{-1}(1 - q), accurate for small q.
    double upper_quantile(double q) const;

    // Half-width of the support; infinite for unbounded families.
    double support_half_width() const;
    bool bounded() const { return std::isfinite(support_half_width()); }
    // A point beyond which the upper tail is negligible (F^{-1}(1 - 1e-12) or the edge).
    double tail_extent() const;
    // Points where the density is not smooth.
    std::vector<double> knots() const;

    // n i.i.d. draws from P_theta by inverse-CDF transform.
    SortedSample sample(double theta, std::size_t n, std::uint64_t seed) const;

private:
    LocationFamily(FamilyKind kind, double shape);
    double mollifier_tail(double x) const;
    double tail_by_bisection(double q) const;

    FamilyKind kind_;
    double shape_ = 0;
    double norm_ = 1;
    NumericConfig cfg_{};
};

// Closed-form Bates upper tail P(X >= x) on (1/2 - 1/k, 1/2].
double bates_tail_closed_form(int k, double x);
// 1/2 - F^{-1}(1 - q) for q <= 1/k!.
double bates_upper_gap_closed_form(int k, double q);

struct QuantileBounds {
    double lower;
    double upper;
};
// Analytic sandwich for F^{-1}(1-q) (generalized Gaussian, beta > 1) or for
// 1 - F^{-1}(1-q)^2 (mollifier). Requires q <= 1e-3.
QuantileBounds quantile_lemma_bounds(const LocationFamily& family, double q);

}  // namespace huberband

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "huberband/distributions.hpp"
#include "huberband/numeric.hpp"
#include "huberband/rng.hpp"

namespace huberband {

enum class AdversaryKind {
    GaussianTruncated,
    GaussianShiftedExact,
    LaplaceExact,
    GeneralTruncated,
    GeneralExact,
    UnknownVariance,
    SmallEpsMaxTruncated,
    SmallEpsMaxExact,
};

AdversaryKind parse_adversary_kind(std::string_view s);
std::string to_string(AdversaryKind k);
bool is_exact_match(AdversaryKind k);

struct InvalidSeparation : ConstructionError {
    InvalidSeparation(const std::string& what, double max_r) : ConstructionError(what), max_valid_r(max_r) {}
    double max_valid_r;
};

// Integration range and interior kinks/jumps of a density.
struct SupportHint {
    double lo = -kInf;
    double hi = kInf;
    std::vector<double> breaks;
};

struct DensityCheck {
    double mass = 0;
    double min_value = 0;
    double argmin = 0;
};

DensityCheck validate_density(const RealFn& density, const SupportHint& hint);
// 0.5 * integral |p - q|.
double numeric_tv(const RealFn& p, const RealFn& q, const SupportHint& hint);

// Proposal mixture sum_i w_i g_i with exact samplers; the envelope is M * mixture.
struct Envelope {
    struct Component {
        double weight = 1;
        RealFn density;
        std::function<double(Rng&)> draw;
    };
    std::vector<Component> parts;
    double M = 1;

    double eval(double x) const;
    double draw_proposal(Rng& rng) const;
};

// Location-scale family component for envelopes and mixtures.
Envelope::Component family_component(const LocationFamily& f, double loc, double scale, double weight = 1);

// One exact draw by rejection; throws ConstructionError on envelope violation.
double draw_by_rejection(const RealFn& density, const Envelope& env, Rng& rng, std::size_t* proposals = nullptr);
SortedSample sample_density(const RealFn& density, const Envelope& env, std::size_t n, std::uint64_t seed,
                            double* acceptance_rate = nullptr);

struct AdversaryParams {
    AdversaryKind kind = AdversaryKind::GaussianTruncated;
    LocationFamily family = LocationFamily::gaussian();
    double r = 0;
    double eps = 0;
    double eps_max = 0.05;
    double alpha = 0.05;
    std::size_t n = 1000;
    double sigma = 1;
};

enum class Side { Null, Alternative };

// Null side: (1 - eps_max) P_{r, sigma0} + eps_max Q0.
// Alternative side: (1 - eps) P_{0, sigma1} + eps Q1.
struct AdversarialPair {
    AdversaryParams params;
    double theta0 = 0, theta1 = 0;
    double sigma0 = 1, sigma1 = 1;
    RealFn q0, q1;
    Envelope env0, env1;
    SupportHint support;
    std::map<std::string, double> internals;
    double max_valid_r = 0;

    struct Validity {
        double min_density = 0;
        double mass0 = 0, mass1 = 0;
        double tv_bound = 0;  // NaN when no closed-form bound exists
        bool exact_zero = false;
        double tv_numeric = 0;
        double match_error = 0;  // sup |mixture0 - mixture1| on a 1e4-point grid
    } validity;

    double clean_density(Side s, double x) const;
    double mixture(Side s, double x) const;
    double eps_of(Side s) const { return s == Side::Null ? params.eps_max : params.eps; }
    double center(Side s) const { return s == Side::Null ? theta0 : theta1; }
    double draw_contamination(Side s, Rng& rng) const;
    // n i.i.d. points from the chosen side's mixture.
    SortedSample sample(Side s, std::size_t n, std::uint64_t seed) const;
};

double max_valid_r(const AdversaryParams& p);
AdversarialPair build_adversary(const AdversaryParams& p);

}  // namespace huberband

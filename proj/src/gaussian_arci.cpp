#include "huberband/gaussian_arci.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "huberband/normal.hpp"
#include "huberband/numeric.hpp"

namespace huberband {

void GaussianArciConfig::validate() const {
    if (!(alpha > 0 && alpha < 1)) throw ConfigError("alpha must lie in (0, 1)");
    if (!(sigma > 0)) throw ConfigError("sigma must be positive");
    if (!(t_min > 0)) throw ConfigError("t_min must be positive");
    if (!(margin_mult > 0)) throw ConfigError("margin multiplier must be positive");
    if (mode == EpsMaxMode::Small && !(eps_max > 0 && eps_max <= 0.05))
        throw ConfigError("small mode needs eps_max in (0, 0.05]");
}

namespace {

// Lower tail level 2(1 - Phi(t)).
double two_tail(double t) { return 2.0 * Phi_upper(t); }

double lower_value(double x, double t, double sigma, double m) { return (x + t * sigma) - (m * sigma) / t; }
double upper_value(double x, double t, double sigma, double m) { return (x - t * sigma) + (m * sigma) / t; }

// Index of F_n^{-1}(1 - p) = X_(ceil(n(1-p))) = X_(n - floor(n p)).
std::size_t upper_index(std::size_t n, double p) {
    const std::size_t fl = floor_index(n, p);
    return fl >= n ? 1 : n - fl;
}

SortedSample scaled(const SortedSample& s, double sigma) {
    std::vector<double> v(s.values().begin(), s.values().end());
    for (double& x : v) x /= sigma;
    return SortedSample(std::move(v));
}

ArciResult rescale(ArciResult r, double sigma) {
    r.interval.lower *= sigma;
    r.interval.upper *= sigma;
    return r;
}

}  // namespace

double theta_hat_L(const SortedSample& s, double t, double sigma, bool* clamped) {
    const double p = two_tail(t);
    if (!(p > 0 && p <= 1)) throw DomainError("theta_hat_L: 2(1 - Phi(t)) must lie in (0, 1]");
    if (clamped) *clamped = p * static_cast<double>(s.size()) < 1.0;
    return s.order_stat(quantile_index(s.size(), p)) + t * sigma;
}

double theta_hat_R(const SortedSample& s, double t, double sigma, bool* clamped) {
    const double p = two_tail(t);
    if (!(p >= 0 && p < 1)) throw DomainError("theta_hat_R: 1 - 2(1 - Phi(t)) must lie in (0, 1]");
    if (clamped) *clamped = floor_index(s.size(), p) >= s.size();
    return s.order_stat(upper_index(s.size(), p)) - t * sigma;
}

double t_epsilon(double eps, std::size_t n, double alpha) {
    const double level = eps + dkw_radius(n, alpha);
    if (!(eps >= 0) || !(level < 1)) throw DomainError("t_epsilon needs eps >= 0 and eps + dkw < 1");
    return Phi_inv_upper(level);
}

TuningParams gaussian_tuning(double eps, std::size_t n, double alpha) {
    const double t = t_epsilon(eps, n, alpha);
    return {t, 2.0 / t};
}

double t_max_gaussian(std::size_t n, double alpha) { return Phi_inv_upper(dkw_radius(n, alpha)); }

std::vector<double> breakpoint_grid(std::size_t n, double t_lo, double t_hi) {
    std::vector<double> out;
    if (!(t_lo < t_hi)) return out;
    const double two_n = 2.0 * static_cast<double>(n);
    const std::size_t i_hi = floor_index(n, two_tail(t_lo));
    const std::size_t i_lo = quantile_index(n, two_tail(t_hi));
    for (std::size_t i = i_hi + 1; i-- > std::max<std::size_t>(i_lo, 1);) {
        const double t = Phi_inv_upper(static_cast<double>(i) / two_n);
        if (t >= t_lo && t <= t_hi) out.push_back(t);
    }
    return out;
}

double lower_objective(const SortedSample& s, double t, double sigma, double margin_mult) {
    const std::size_t k = quantile_index(s.size(), two_tail(t));
    return lower_value(s.order_stat(k), t, sigma, margin_mult);
}

double upper_objective(const SortedSample& s, double t, double sigma, double margin_mult) {
    return upper_value(s.order_stat(upper_index(s.size(), two_tail(t))), t, sigma, margin_mult);
}

ArciResult optimize_over_t(const SortedSample& s, double t_lo, double t_hi, double sigma, double m) {
    ArciResult res;
    if (!(t_lo < t_hi)) {
        res.diagnostics.push_back("vacuous: t_min >= t_max, interval is the whole line");
        return res;
    }
    const std::size_t n = s.size();
    const double two_n = 2.0 * static_cast<double>(n);
    const double p_hi = two_tail(t_hi), p_lo = two_tail(t_lo);
    if (p_hi * static_cast<double>(n) < 1.0)
        res.diagnostics.push_back("quantile level below 1/n at t_max; index clamped to X_(1)");

    // Lower end: on {k(t) = j} = [T_j, T_{j-1}) the quantile is constant and the
    // smooth part increases, so the supremum sits at the open right end.
    const std::size_t jb = quantile_index(n, p_hi), ja = quantile_index(n, p_lo);
    double L = lower_value(s.order_stat(jb), t_hi, sigma, m);
    for (std::size_t j = jb + 1; j <= ja; ++j) {
        const double T = Phi_inv_upper(static_cast<double>(j - 1) / two_n);
        L = std::max(L, lower_value(s.order_stat(j), T, sigma, m));
    }

    // Upper end: segments (T_{i+1}, T_i] are closed on the right, where the
    // decreasing smooth part attains its infimum.
    const std::size_t ib = floor_index(n, p_hi), ia = std::min(floor_index(n, p_lo), n - 1);
    double U = upper_value(s.order_stat(upper_index(n, p_hi)), t_hi, sigma, m);
    for (std::size_t i = ib + 1; i <= ia; ++i) {
        const double T = Phi_inv_upper(static_cast<double>(i) / two_n);
        U = std::min(U, upper_value(s.order_stat(n - i), T, sigma, m));
    }
    res.interval = {L, U};
    if (res.interval.empty()) res.diagnostics.push_back("empty interval");
    return res;
}

ArciResult arci_gaussian(const SortedSample& s, const GaussianArciConfig& cfg) {
    cfg.validate();
    return optimize_over_t(s, cfg.t_min, t_max_gaussian(s.size(), cfg.alpha), cfg.sigma, cfg.margin_mult);
}

ArciResult just_coverage_interval(const SortedSample& s, double alpha, double sigma) {
    return optimize_over_t(s, 4.0, t_max_gaussian(s.size(), alpha), sigma, 8.0);
}

double conservative_radius(std::size_t n, double alpha) {
    return (1.0 / normal_pdf(Phi_inv(0.991))) * (1.0 / static_cast<double>(n) + dkw_radius(n, alpha) + 0.49);
}

ArciResult arci_gaussian_049(const SortedSample& s, double alpha) {
    ArciResult res = just_coverage_interval(s, alpha);
    res.interval = res.interval.intersect(conservative_interval(s, conservative_radius(s.size(), alpha)));
    return res;
}

double t_epsilon_small(double eps, std::size_t n, double alpha, double eps_max) {
    const double nd = static_cast<double>(n), lg = std::log(2.0 / alpha);
    const double a = eps_max * std::sqrt(nd / (2.0 * lg));
    const double b = Phi_inv_upper(1.0 / (eps_max / (std::sqrt(2.0 * lg / nd) + eps) + 10.0 * std::numbers::e));
    return std::min(a, b);
}

std::vector<double> small_epsmax_grid(double eps_max) {
    std::vector<double> g{0.0};
    const double lo = eps_max * 1e-8;
    for (int i = 0; i < 64; ++i) g.push_back(lo * std::pow(eps_max / lo, i / 63.0));
    g.back() = eps_max;
    return g;
}

ArciResult arci_gaussian_small_epsmax(const SortedSample& s, double alpha, double eps_max) {
    if (!(eps_max > 0 && eps_max <= 0.05)) throw ConfigError("eps_max must lie in (0, 0.05]");
    ArciResult res;
    const std::size_t n = s.size();
    const double dk = dkw_radius(n, alpha);
    for (double eps : small_epsmax_grid(eps_max)) {
        const double t = t_epsilon_small(eps, n, alpha, eps_max);
        const double r = 6.0 * eps_max / t;
        const double thr = Phi_upper(t) + eps + dk;
        if (!(thr > 0 && thr < 1)) {
            res.diagnostics.push_back("skipped eps=" + std::to_string(eps) + ": quantile level outside (0,1)");
            continue;
        }
        const Interval piece{s.order_stat(quantile_index(n, thr)) + t - r,
                             s.order_stat(upper_index(n, thr)) - t + r};
        res.interval = res.interval.intersect(piece);
    }
    if (res.interval.empty()) res.diagnostics.push_back("empty interval");
    return res;
}

Interval median_interval(const SortedSample& s, double eps, double sigma) {
    if (!(eps >= 0 && eps < 1)) throw ConfigError("eps must lie in [0, 1)");
    const double med = empirical_quantile(s, 0.5);
    const double h = std::sqrt(2.1 * std::numbers::pi) * sigma *
                     (1.36 / std::sqrt(static_cast<double>(s.size())) + eps);
    return {med - h, med + h};
}

Interval conservative_interval(const SortedSample& s, double R) {
    if (!(R > 0)) throw ConfigError("conservative radius must be positive");
    const double med = empirical_quantile(s, 0.5);
    return {med - R, med + R};
}

ArciResult gaussian_ci(const SortedSample& s, const GaussianArciConfig& cfg) {
    cfg.validate();
    switch (cfg.mode) {
        case EpsMaxMode::Std005: return arci_gaussian(s, cfg);
        case EpsMaxMode::Large049:
            if (cfg.sigma == 1.0) return arci_gaussian_049(s, cfg.alpha);
            return rescale(arci_gaussian_049(scaled(s, cfg.sigma), cfg.alpha), cfg.sigma);
        case EpsMaxMode::Small:
            if (cfg.sigma == 1.0) return arci_gaussian_small_epsmax(s, cfg.alpha, cfg.eps_max);
            return rescale(arci_gaussian_small_epsmax(scaled(s, cfg.sigma), cfg.alpha, cfg.eps_max), cfg.sigma);
    }
    return {};
}

}  // namespace huberband

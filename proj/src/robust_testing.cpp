#include "huberband/robust_testing.hpp"

#include <algorithm>
#include <cmath>

#include "huberband/gaussian_arci.hpp"
#include "huberband/normal.hpp"

namespace huberband {

void TestSpec::validate() const {
    if (!(threshold >= 0 && threshold <= 1)) throw ConfigError("test threshold must lie in [0, 1]");
    if (!(r_eps > 0) || !(t_eps > 0)) throw ConfigError("r_eps and t_eps must be positive");
}

double gaussian005_threshold(double t) { return 2.0 * Phi_upper(t); }

double general_threshold(const LocationFamily& family, double t, double eps, std::size_t n, double alpha) {
    return 1.5 * (family.sf(t) + 10.0 * std::log(4.0 / alpha) / (9.0 * static_cast<double>(n)) + eps);
}

double small_epsmax_threshold(double t, double eps, std::size_t n, double alpha) {
    return Phi_upper(t) + eps + dkw_radius(n, alpha);
}

TestOutcome run_test(const TestSpec& spec, const SortedSample& s) {
    spec.validate();
    const auto v = s.values();
    const std::size_t n = s.size();
    if (spec.direction == Direction::Minus) {
        const double shift = spec.theta0 - spec.r_eps;
        const auto count = static_cast<std::size_t>(
            std::count_if(v.begin(), v.end(), [&](double x) { return x - shift >= spec.t_eps; }));
        return count <= floor_index(n, spec.threshold) ? TestOutcome::RejectNull : TestOutcome::AcceptNull;
    }
    const double shift = spec.theta0 + spec.r_eps;
    const auto count = static_cast<std::size_t>(
        std::count_if(v.begin(), v.end(), [&](double x) { return x - shift <= -spec.t_eps; }));
    // count < n*thr  <=>  count < ceil(n*thr)
    const std::size_t need = spec.threshold > 0 ? quantile_index(n, spec.threshold) : 0;
    return count < need ? TestOutcome::RejectNull : TestOutcome::AcceptNull;
}

std::vector<GridTest> gaussian005_tests(const std::vector<double>& t_values, double margin_mult) {
    std::vector<GridTest> out;
    out.reserve(t_values.size());
    for (double t : t_values) out.push_back({t, margin_mult / t, gaussian005_threshold(t), Regime::Gaussian005});
    return out;
}

std::vector<double> gaussian005_t_grid(std::size_t n, double t_lo, double t_hi, double delta) {
    std::vector<double> g{t_lo, t_hi};
    for (double b : breakpoint_grid(n, t_lo, t_hi))
        for (double t : {b - delta, b, b + delta})
            if (t >= t_lo && t <= t_hi) g.push_back(t);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

std::vector<GridTest> small_epsmax_tests(std::size_t n, double alpha, double eps_max) {
    std::vector<GridTest> out;
    for (double eps : small_epsmax_grid(eps_max)) {
        const double t = t_epsilon_small(eps, n, alpha, eps_max);
        const double thr = small_epsmax_threshold(t, eps, n, alpha);
        if (thr > 0 && thr < 1) out.push_back({t, 6.0 * eps_max / t, thr, Regime::SmallEpsMax});
    }
    return out;
}

std::vector<GridTest> general_tests(const GeneralArciPlan& plan) {
    std::vector<GridTest> out;
    for (const auto& p : plan.points) out.push_back({p.t, p.r, p.threshold, Regime::General});
    return out;
}

Interval invert_tests(const SortedSample& s, const std::vector<GridTest>& tests) {
    const std::size_t n = s.size();
    Interval out;
    for (const auto& g : tests) {
        // Plus accepts iff #{X_i <= theta + r - t} >= ceil(n thr), i.e. theta >= X_(ceil) + t - r.
        const double lo = g.threshold > 0 ? s.order_stat(quantile_index(n, g.threshold)) + g.t - g.r : -kInf;
        // Minus accepts iff #{X_i >= theta - r + t} > floor(n thr).
        const std::size_t fl = floor_index(n, g.threshold);
        const double hi = fl >= n ? -kInf : s.order_stat(n - fl) - g.t + g.r;
        out = out.intersect({lo, hi});
    }
    return out;
}

Interval invert_tests(const SortedSample& s, double alpha, Regime regime, const LocationFamily& family,
                      double eps_max, const std::vector<double>& grid) {
    switch (regime) {
        case Regime::Gaussian005: {
            auto ts = grid;
            if (ts.empty()) {
                const double t_hi = t_max_gaussian(s.size(), alpha);
                if (!(1.6 < t_hi)) return Interval::whole();
                ts = gaussian005_t_grid(s.size(), 1.6, t_hi);
            }
            return invert_tests(s, gaussian005_tests(ts));
        }
        case Regime::General:
            return invert_tests(s, general_tests(plan_general_arci(family, s.size(), alpha, eps_max)));
        case Regime::SmallEpsMax: return invert_tests(s, small_epsmax_tests(s.size(), alpha, eps_max));
    }
    return Interval::whole();
}

bool all_accept(const SortedSample& s, const std::vector<GridTest>& tests, double theta) {
    for (const auto& g : tests)
        for (Direction d : {Direction::Minus, Direction::Plus})
            if (run_test(g.at(theta, d), s) == TestOutcome::RejectNull) return false;
    return true;
}

}  // namespace huberband

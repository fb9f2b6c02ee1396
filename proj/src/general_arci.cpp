#include "huberband/general_arci.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "huberband/numeric.hpp"

namespace huberband {

namespace {

void check_inputs(double eps, std::size_t n, double alpha, double eps_max) {
    if (n < 1) throw ConfigError("n must be positive");
    if (!(alpha > 0 && alpha < 1)) throw ConfigError("alpha must lie in (0, 1)");
    if (!(eps_max > 0 && eps_max < 1)) throw ConfigError("eps_max must lie in (0, 1)");
    if (!(eps >= 0 && eps <= eps_max)) throw DomainError("eps must lie in [0, eps_max]");
}

// log(num) - log(den) for log-densities that may be -inf outside the support.
double log_ratio(double num, double den) {
    if (std::isinf(den) && den < 0) return (std::isinf(num) && num < 0) ? -kInf : kInf;
    return num - den;
}

double bracket_cap(const LocationFamily& f) { return 8.0 * f.tail_extent(); }

double log_sf(const LocationFamily& f, double x) { return std::log(f.sf(x)); }

double tail_point(const LocationFamily& f, double q, const char* what) {
    if (!(q > 0 && q < 1)) throw DomainError(std::string(what) + " must lie in (0, 1)");
    return f.upper_quantile(q);
}

}  // namespace

double q_bar(double eps, std::size_t n, double alpha, double eps_max) {
    check_inputs(eps, n, alpha, eps_max);
    const double k = 1.0 - eps_max;
    return (6.0 / k) * (eps + 100.0 * std::log(32.0 / alpha) / (3.0 * k * static_cast<double>(n)));
}

double q_under(double eps, std::size_t n, double alpha, double eps_max) {
    check_inputs(eps, n, alpha, eps_max);
    const double k = 1.0 - eps_max;
    return (1.0 / (2.0 * k)) * (eps + alpha * k / static_cast<double>(n));
}

bool has_monotone_ratio(const LocationFamily& family) {
    const double T = family.tail_extent();
    constexpr int kGrid = 512;
    for (double rs : std::array{0.05, 0.25, 1.0}) {
        const double r = rs * std::min(T, 4.0);
        double prev = -kInf;
        for (int i = 0; i < kGrid; ++i) {
            const double t = -T + 2.0 * T * i / (kGrid - 1);
            const double lr = log_ratio(family.log_pdf(t - r), family.log_pdf(t));
            if (!std::isfinite(lr)) continue;
            if (lr < prev - 1e-9 * std::max(1.0, std::abs(prev))) return false;
            prev = lr;
        }
    }
    return true;
}

double r_up(const LocationFamily& family, double eps, std::size_t n, double alpha, double eps_max) {
    if (!has_monotone_ratio(family)) return r_bar(family, eps, n, alpha, eps_max);
    const double a = tail_point(family, q_bar(eps, n, alpha, eps_max), "q_bar");
    const double target = std::log(6.0 / (1.0 - eps_max));
    const double la = family.log_pdf(a);
    auto pred = [&](double r) { return log_ratio(la, family.log_pdf(a + r)) >= target; };
    const double cap = bracket_cap(family);
    if (!pred(cap)) return kInf;
    const auto& nc = family.numeric();
    return bisect_first_true(pred, 0.0, cap, nc.root_tol, nc.max_iter);
}

double r_down(const LocationFamily& family, double eps, std::size_t n, double alpha, double eps_max) {
    if (!has_monotone_ratio(family)) return r_under(family, eps, n, alpha, eps_max);
    const double a = tail_point(family, q_under(eps, n, alpha, eps_max), "q_under");
    const double bound = std::log((1.0 - eps_max / 2.0) / (1.0 - eps_max));
    const double la = family.log_pdf(a);
    auto pred = [&](double r) { return log_ratio(la, family.log_pdf(a + r)) <= bound; };
    const double cap = bracket_cap(family);
    if (pred(cap)) return kInf;
    const auto& nc = family.numeric();
    return bisect_last_true(pred, 0.0, cap, nc.root_tol, nc.max_iter);
}

double r_bar(const LocationFamily& family, double eps, std::size_t n, double alpha, double eps_max) {
    const double qb = q_bar(eps, n, alpha, eps_max);
    if (!(qb <= 0.5)) throw DomainError("r_bar needs q_bar <= 1/2 so that F^{-1}(1 - q_bar) >= 0");
    const double a = family.upper_quantile(qb);
    const double target = std::log(6.0 / (1.0 - eps_max));
    auto pred = [&](double r) {
        auto g = [&](double u) { return log_ratio(log_sf(family, u), log_sf(family, u + r)); };
        return maximize_scan(g, 0.0, a).value >= target;
    };
    const double cap = bracket_cap(family);
    if (!pred(cap)) return kInf;
    const auto& nc = family.numeric();
    return bisect_first_true(pred, 0.0, cap, nc.root_tol, nc.max_iter);
}

double r_under(const LocationFamily& family, double eps, std::size_t n, double alpha, double eps_max) {
    const double a = tail_point(family, q_under(eps, n, alpha, eps_max), "q_under");
    const double worst = std::max(eps, alpha / static_cast<double>(n));
    if (worst > eps_max) throw DomainError("r_under needs max(eps, alpha/n) <= eps_max");
    const double bound = std::log((1.0 - worst) / (1.0 - eps_max));
    // For t <= r/2 the ratio is at most one by symmetry and unimodality.
    auto pred = [&](double r) {
        auto g = [&](double t) { return log_ratio(family.log_pdf(t - r), family.log_pdf(t)); };
        return maximize_scan(g, r / 2.0, r + a).value <= bound;
    };
    const double cap = bracket_cap(family);
    if (pred(cap)) return kInf;
    const auto& nc = family.numeric();
    return bisect_last_true(pred, 0.0, cap, nc.root_tol, nc.max_iter);
}

double t_eps_general(const LocationFamily& family, double rb, double qb, double eps_max) {
    if (!std::isfinite(rb)) throw ConstructionError("t_eps: r_bar is infinite");
    const double a = tail_point(family, qb, "q_bar");
    const double K = 6.0 / (1.0 - eps_max);
    const double target = std::log(K);
    auto g = [&](double u) { return log_ratio(log_sf(family, u), log_sf(family, u + rb)) - target; };
    if (g(a) >= 0) return rb + a;
    const Extremum best = maximize_scan(g, 0.0, a);
    const double slack = family.sf(best.arg) - K * family.sf(best.arg + rb);
    if (slack < -1e-10) throw ConstructionError("t_eps: constraint infeasible at r_bar");
    if (g(best.arg) < 0) return rb + best.arg;
    const auto& nc = family.numeric();
    return rb + bisect_last_true([&](double u) { return g(u) >= 0; }, best.arg, a, nc.root_tol, nc.max_iter);
}

RateQuantities rate_quantities(const LocationFamily& family, double eps, std::size_t n, double alpha,
                               double eps_max) {
    RateQuantities q;
    q.eps = eps;
    q.eps_max = eps_max;
    q.alpha = alpha;
    q.n = n;
    q.q_bar = q_bar(eps, n, alpha, eps_max);
    q.q_under = q_under(eps, n, alpha, eps_max);
    if (q.q_under > q.q_bar) throw ConstructionError("q_under exceeds q_bar");
    q.r_bar = r_bar(family, eps, n, alpha, eps_max);
    q.r_under = r_under(family, eps, n, alpha, eps_max);
    q.r_up = r_up(family, eps, n, alpha, eps_max);
    q.r_down = r_down(family, eps, n, alpha, eps_max);
    q.t_eps = std::isfinite(q.r_bar) ? t_eps_general(family, q.r_bar, q.q_bar, eps_max) : kInf;
    return q;
}

double theoretical_rate(const LocationFamily& family, std::size_t n, double eps) {
    if (n < 2) throw DomainError("theoretical_rate needs n >= 2");
    if (!(eps >= 0 && eps < 1)) throw DomainError("eps must lie in [0, 1)");
    const double base = 1.0 / std::log(static_cast<double>(n)) + (eps > 0 ? 1.0 / std::log(1.0 / eps) : 0.0);
    switch (family.kind()) {
        case FamilyKind::StudentT: return 1.0;
        case FamilyKind::Gaussian: return std::pow(base, 0.5);
        case FamilyKind::Laplace: return 1.0;
        case FamilyKind::GeneralizedGaussian: {
            const double b = family.shape();
            return std::pow(base, std::max(b - 1.0, 0.0) / b);
        }
        case FamilyKind::Mollifier: {
            const double b = family.shape();
            return std::pow(base, (b + 1.0) / b);
        }
        case FamilyKind::Bates:
        case FamilyKind::Uniform: {
            const int k = family.kind() == FamilyKind::Uniform ? 1 : family.bates_k();
            return std::pow(1.0 / static_cast<double>(n) + eps, 1.0 / k);
        }
    }
    throw DomainError("unsupported family");
}

std::vector<double> general_eps_grid(double eps_max, std::size_t grid_size) {
    std::vector<double> g{0.0};
    if (grid_size == 0) return g;
    const double lo = eps_max * 1e-8;
    for (std::size_t i = 0; i < grid_size; ++i)
        g.push_back(grid_size == 1 ? eps_max
                                   : lo * std::pow(eps_max / lo, static_cast<double>(i) / (grid_size - 1)));
    g.back() = eps_max;
    return g;
}

GeneralArciPlan plan_general_arci(const LocationFamily& family, std::size_t n, double alpha, double eps_max,
                                  std::size_t grid_size) {
    check_inputs(0.0, n, alpha, eps_max);
    if (q_bar(eps_max, n, alpha, eps_max) > 1.0)
        throw ConfigError("general ARCI requires q_bar(eps_max) <= 1; increase n or decrease eps_max");
    GeneralArciPlan plan;
    plan.n = n;
    plan.alpha = alpha;
    plan.eps_max = eps_max;
    const double nd = static_cast<double>(n);
    for (double eps : general_eps_grid(eps_max, grid_size)) {
        const double qb = q_bar(eps, n, alpha, eps_max);
        const std::string tag = "eps=" + std::to_string(eps) + ": ";
        if (qb > 0.5) {
            plan.diagnostics.push_back(tag + "skipped, q_bar > 1/2");
            continue;
        }
        const double r = r_bar(family, eps, n, alpha, eps_max);
        if (!std::isfinite(r)) {
            plan.diagnostics.push_back(tag + "skipped, separation is constant order (r_bar infinite)");
            continue;
        }
        const double t = t_eps_general(family, r, qb, eps_max);
        const double thr = 1.5 * (family.sf(t) + 10.0 * std::log(4.0 / alpha) / (9.0 * nd) + eps);
        if (!(thr > 0 && thr < 1)) {
            plan.diagnostics.push_back(tag + "skipped, quantile level outside (0,1)");
            continue;
        }
        plan.points.push_back({eps, t, r, thr});
    }
    return plan;
}

ArciResult arci_general(const SortedSample& s, const GeneralArciPlan& plan) {
    if (s.size() != plan.n) throw ConfigError("plan was built for a different sample size");
    ArciResult res;
    res.diagnostics = plan.diagnostics;
    const std::size_t n = s.size();
    for (const auto& p : plan.points) {
        const Interval piece{s.order_stat(quantile_index(n, p.threshold)) + p.t - p.r,
                             s.order_stat(n - floor_index(n, p.threshold)) - p.t + p.r};
        res.interval = res.interval.intersect(piece);
    }
    if (plan.points.empty()) res.diagnostics.push_back("no usable grid point; interval is the whole line");
    if (res.interval.empty()) res.diagnostics.push_back("empty interval");
    return res;
}

ArciResult arci_general(const SortedSample& s, const LocationFamily& family, double alpha, double eps_max,
                        std::size_t grid_size) {
    return arci_general(s, plan_general_arci(family, s.size(), alpha, eps_max, grid_size));
}

}  // namespace huberband

#include "huberband/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "huberband/general_arci.hpp"
#include "huberband/normal.hpp"

namespace huberband {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct KindName {
    AdversaryKind kind;
    const char* name;
};

constexpr KindName kKindNames[] = {
    {AdversaryKind::GaussianTruncated, "gaussian-truncated"},
    {AdversaryKind::GaussianShiftedExact, "gaussian-shifted-exact"},
    {AdversaryKind::LaplaceExact, "laplace-exact"},
    {AdversaryKind::GeneralTruncated, "general-truncated"},
    {AdversaryKind::GeneralExact, "general-exact"},
    {AdversaryKind::UnknownVariance, "unknown-variance"},
    {AdversaryKind::SmallEpsMaxTruncated, "small-epsmax-truncated"},
    {AdversaryKind::SmallEpsMaxExact, "small-epsmax-exact"},
};

double log_ratio(double num, double den) {
    if (std::isinf(den) && den < 0) return (std::isinf(num) && num < 0) ? -kInf : kInf;
    return num - den;
}

void require_gaussian(const AdversaryParams& p) {
    if (p.family.kind() != FamilyKind::Gaussian)
        throw ConfigError(to_string(p.kind) + " is defined for the Gaussian family only");
}

void check_common(const AdversaryParams& p) {
    if (!(p.eps_max > 0 && p.eps_max < 1)) throw ConfigError("eps_max must lie in (0, 1)");
    if (!(p.eps >= 0 && p.eps <= p.eps_max)) throw ConfigError("eps must lie in [0, eps_max]");
    if (!(p.alpha > 0 && p.alpha < 1)) throw ConfigError("alpha must lie in (0, 1)");
    if (p.n < 1) throw ConfigError("n must be positive");
    if (!(p.sigma > 0)) throw ConfigError("sigma must be positive");
}

// Gaussian shifted-exact: q0 >= 0 iff min_x g(x) >= 1 - eps_max with
// g(x) = A e^{-rx} + B e^{(mu-r)x}.
bool shifted_exact_valid(double r, double eps, double eps_max) {
    const double mu = std::sqrt(std::log(1.0 / eps));
    if (r <= 0) return true;
    if (r >= mu) return false;
    const double logA = std::log1p(-eps) + r * r / 2;
    const double logB = std::log(eps) + (r * r - mu * mu) / 2;
    const double xs = (std::log(r) + logA - std::log(mu - r) - logB) / mu;
    const double g = std::exp(logA - r * xs) + std::exp(logB + (mu - r) * xs);
    return g >= 1.0 - eps_max;
}

// Boundary of S = {x : (1 - eps_max) f(x - r) > (1 - eps) f(x)}; +inf when S is empty.
double general_exact_xstar(const LocationFamily& f, double r, double eps, double eps_max) {
    if (r <= 0) return kInf;
    const double L = std::log((1.0 - eps) / (1.0 - eps_max));
    auto pred = [&](double x) { return log_ratio(f.log_pdf(x - r), f.log_pdf(x)) > L; };
    double hi = f.bounded() ? f.support_half_width() + r / 2 : f.tail_extent() + r;
    for (int i = 0; i < 40 && !pred(hi); ++i) {
        if (f.bounded() || hi > 1e6) return kInf;
        hi *= 2;
    }
    if (!pred(hi)) return kInf;
    const auto& nc = f.numeric();
    return bisect_first_true(pred, r / 2, hi, nc.root_tol * 1e-2, nc.max_iter);
}

double general_exact_mass(const LocationFamily& f, double r, double eps, double eps_max) {
    const double xs = general_exact_xstar(f, r, eps, eps_max);
    return std::isfinite(xs) ? f.sf(xs - r) : 0.0;
}

double small_exact_xstar(double r, double eps, double eps_max) {
    return std::log((1.0 - eps) / (1.0 - eps_max)) / r + r / 2;
}

double small_exact_excess(double r, double eps, double eps_max) {
    if (r <= 0) return 0.0;
    const double xs = small_exact_xstar(r, eps, eps_max);
    return (1.0 - eps_max) * Phi_upper(xs - r) - (1.0 - eps) * Phi_upper(xs);
}

double general_truncated_worst(const LocationFamily& f, double r, double t) {
    auto g = [&](double x) { return log_ratio(f.log_pdf(x - r), f.log_pdf(x)); };
    return maximize_scan(g, r / 2, r + t).value;
}

Envelope single(const Envelope::Component& c, double M) { return Envelope{{c}, M}; }

}  // namespace

AdversaryKind parse_adversary_kind(std::string_view s) {
    for (const auto& k : kKindNames)
        if (s == k.name) return k.kind;
    throw ConfigError("unknown adversary kind: " + std::string(s));
}

std::string to_string(AdversaryKind k) {
    for (const auto& e : kKindNames)
        if (e.kind == k) return e.name;
    return "unknown";
}

bool is_exact_match(AdversaryKind k) {
    switch (k) {
        case AdversaryKind::LaplaceExact:
        case AdversaryKind::GaussianShiftedExact:
        case AdversaryKind::GeneralExact:
        case AdversaryKind::SmallEpsMaxExact:
        case AdversaryKind::UnknownVariance: return true;
        default: return false;
    }
}

DensityCheck validate_density(const RealFn& density, const SupportHint& hint) {
    DensityCheck c;
    c.mass = integrate(density, hint.lo, hint.hi, 1e-10, hint.breaks);
    const double lo = std::isfinite(hint.lo) ? hint.lo : -1e3, hi = std::isfinite(hint.hi) ? hint.hi : 1e3;
    const Extremum m = maximize_scan([&](double x) { return -density(x); }, lo, hi, 100000, 10);
    c.min_value = -m.value;
    c.argmin = m.arg;
    for (double b : hint.breaks)
        for (double x : {b, std::nextafter(b, -kInf), std::nextafter(b, kInf)})
            if (x >= lo && x <= hi && density(x) < c.min_value) {
                c.min_value = density(x);
                c.argmin = x;
            }
    return c;
}

double numeric_tv(const RealFn& p, const RealFn& q, const SupportHint& hint) {
    return 0.5 * integrate([&](double x) { return std::abs(p(x) - q(x)); }, hint.lo, hint.hi, 1e-10, hint.breaks);
}

double Envelope::eval(double x) const {
    double s = 0;
    for (const auto& c : parts) s += c.weight * c.density(x);
    return M * s;
}

double Envelope::draw_proposal(Rng& rng) const {
    if (parts.size() == 1) return parts.front().draw(rng);
    double u = rng.uniform(), acc = 0;
    for (const auto& c : parts) {
        acc += c.weight;
        if (u < acc) return c.draw(rng);
    }
    return parts.back().draw(rng);
}

Envelope::Component family_component(const LocationFamily& f, double loc, double scale, double weight) {
    return {weight, [f, loc, scale](double x) { return f.pdf((x - loc) / scale) / scale; },
            [f, loc, scale](Rng& rng) { return loc + scale * f.quantile(rng.uniform()); }};
}

double draw_by_rejection(const RealFn& density, const Envelope& env, Rng& rng, std::size_t* proposals) {
    for (std::size_t i = 1; i <= 100'000'000; ++i) {
        const double x = env.draw_proposal(rng);
        double p = density(x);
        const double e = env.eval(x);
        if (p < 0) {
            if (p < -1e-10) throw ConstructionError("negative density encountered while sampling");
            p = 0;
        }
        if (p > e * (1 + 1e-9) + 1e-300) throw ConstructionError("envelope does not dominate the density");
        if (rng.uniform() * e <= p) {
            if (proposals) *proposals += i;
            return x;
        }
    }
    throw ConstructionError("rejection sampler made no progress");
}

SortedSample sample_density(const RealFn& density, const Envelope& env, std::size_t n, std::uint64_t seed,
                            double* acceptance_rate) {
    if (n < 1) throw ConfigError("sample size must be positive");
    Rng rng(seed);
    std::vector<double> xs(n);
    std::size_t proposals = 0;
    for (auto& x : xs) x = draw_by_rejection(density, env, rng, &proposals);
    if (acceptance_rate) *acceptance_rate = static_cast<double>(n) / static_cast<double>(proposals);
    return SortedSample(std::move(xs));
}

double AdversarialPair::clean_density(Side s, double x) const {
    const double sg = s == Side::Null ? sigma0 : sigma1;
    return params.family.pdf((x - center(s)) / sg) / sg;
}

double AdversarialPair::mixture(Side s, double x) const {
    const double e = eps_of(s);
    return (1.0 - e) * clean_density(s, x) + e * (s == Side::Null ? q0(x) : q1(x));
}

double AdversarialPair::draw_contamination(Side s, Rng& rng) const {
    return s == Side::Null ? draw_by_rejection(q0, env0, rng) : draw_by_rejection(q1, env1, rng);
}

SortedSample AdversarialPair::sample(Side s, std::size_t n, std::uint64_t seed) const {
    if (n < 1) throw ConfigError("sample size must be positive");
    Rng rng(seed);
    const double e = eps_of(s), c = center(s), sg = s == Side::Null ? sigma0 : sigma1;
    std::vector<double> xs(n);
    for (auto& x : xs)
        x = rng.uniform() < e ? draw_contamination(s, rng) : c + sg * params.family.quantile(rng.uniform());
    return SortedSample(std::move(xs));
}

double max_valid_r(const AdversaryParams& p) {
    check_common(p);
    const double em = p.eps_max;
    switch (p.kind) {
        case AdversaryKind::GaussianTruncated: {
            require_gaussian(p);
            const double t = Phi_inv_upper(p.alpha / static_cast<double>(p.n));
            const double L = std::log1p(-p.alpha / static_cast<double>(p.n)) - std::log1p(-em);
            return 2.0 * L / (t + std::sqrt(t * t + 2.0 * L));
        }
        case AdversaryKind::GaussianShiftedExact: {
            require_gaussian(p);
            if (!(p.eps > 0 && p.eps <= em / 2)) throw ConfigError("gaussian-shifted-exact needs eps in (0, eps_max/2]");
            const double mu = std::sqrt(std::log(1.0 / p.eps));
            return bisect_last_true([&](double r) { return shifted_exact_valid(r, p.eps, em); }, 0.0, mu, 1e-13, 200);
        }
        case AdversaryKind::LaplaceExact:
            if (p.family.kind() != FamilyKind::Laplace) throw ConfigError("laplace-exact needs the Laplace family");
            return -std::log1p(-em);
        case AdversaryKind::GeneralTruncated: {
            const auto& f = p.family;
            const double t = f.upper_quantile(p.alpha / static_cast<double>(p.n));
            const double bound = std::log((1.0 - f.sf(t)) / (1.0 - em));
            auto valid = [&](double r) { return general_truncated_worst(f, r, t) <= bound; };
            const double cap = 8.0 * f.tail_extent();
            if (valid(cap)) return kInf;
            return bisect_last_true(valid, 0.0, cap, f.numeric().root_tol, f.numeric().max_iter);
        }
        case AdversaryKind::GeneralExact: {
            const auto& f = p.family;
            if (!(p.eps > 0 && p.eps < em)) throw ConfigError("general-exact needs eps in (0, eps_max)");
            if (!has_monotone_ratio(f)) throw ConfigError("general-exact needs a family with monotone density ratio");
            auto valid = [&](double r) { return (1.0 - em) * general_exact_mass(f, r, p.eps, em) <= p.eps; };
            const double cap = 8.0 * f.tail_extent();
            if (valid(cap)) return kInf;
            return bisect_last_true(valid, 0.0, cap, f.numeric().root_tol, f.numeric().max_iter);
        }
        case AdversaryKind::UnknownVariance:
            require_gaussian(p);
            return p.sigma * std::sqrt(2.0 * (1.0 - 0.99 * 0.99) * std::log(0.99 / (1.0 - em)));
        case AdversaryKind::SmallEpsMaxTruncated: require_gaussian(p); return kInf;
        case AdversaryKind::SmallEpsMaxExact: {
            require_gaussian(p);
            if (!(p.eps > 0 && p.eps < em)) throw ConfigError("small-epsmax-exact needs eps in (0, eps_max)");
            return bisect_last_true([&](double r) { return small_exact_excess(r, p.eps, em) <= p.eps; }, 0.0, 40.0,
                                    1e-12, 200);
        }
    }
    throw ConfigError("unknown adversary kind");
}

AdversarialPair build_adversary(const AdversaryParams& p) {
    AdversarialPair a;
    a.params = p;
    a.max_valid_r = max_valid_r(p);
    if (!(p.r >= 0) || !std::isfinite(p.r)) throw ConfigError("r must be finite and nonnegative");
    if (p.r > a.max_valid_r)
        throw InvalidSeparation("r = " + std::to_string(p.r) + " exceeds max_valid_r = " + std::to_string(a.max_valid_r),
                                a.max_valid_r);

    const double r = p.r, e = p.eps, em = p.eps_max;
    const auto& f = p.family;
    const auto gauss = LocationFamily::gaussian();
    a.theta0 = r;
    a.theta1 = 0;
    double tv_bound = kNaN;

    auto gaussian_hint = [&](std::initializer_list<double> locs, double scale, std::vector<double> breaks) {
        const auto [lo, hi] = std::minmax(locs);
        return SupportHint{lo - 12 * scale, hi + 12 * scale, std::move(breaks)};
    };

    switch (p.kind) {
        case AdversaryKind::GaussianTruncated: {
            const double t = Phi_inv_upper(p.alpha / static_cast<double>(p.n));
            const double Pt = Phi(t);
            a.internals = {{"t", t}, {"c_bar", 1.0 / Pt}};
            a.q1 = [](double x) { return normal_pdf(x); };
            a.q0 = [=](double x) {
                const double cut = (x - r <= t) ? normal_pdf(x - r) / Pt : 0.0;
                return (normal_pdf(x) - (1.0 - em) * cut) / em;
            };
            a.env0 = single(family_component(gauss, 0, 1), 1.0 / em);
            a.env1 = single(family_component(gauss, 0, 1), 1.0);
            a.support = gaussian_hint({0.0, r}, 1.0, {r + t});
            tv_bound = (1.0 - em) * Phi_upper(t);
            break;
        }
        case AdversaryKind::GaussianShiftedExact: {
            const double mu = std::sqrt(std::log(1.0 / e));
            a.internals = {{"mu", mu}};
            a.q1 = [=](double x) { return normal_pdf(x - mu); };
            a.q0 = [=](double x) {
                return ((1.0 - e) * normal_pdf(x) + e * normal_pdf(x - mu) - (1.0 - em) * normal_pdf(x - r)) / em;
            };
            a.env0 = Envelope{{family_component(gauss, 0, 1, 1.0 - e), family_component(gauss, mu, 1, e)}, 1.0 / em};
            a.env1 = single(family_component(gauss, mu, 1), 1.0);
            a.support = gaussian_hint({0.0, r, mu}, 1.0, {});
            break;
        }
        case AdversaryKind::LaplaceExact: {
            a.q1 = [f](double x) { return f.pdf(x); };
            a.q0 = [=](double x) { return (f.pdf(x) - (1.0 - em) * f.pdf(x - r)) / em; };
            a.env0 = single(family_component(f, 0, 1), 1.0 / em);
            a.env1 = single(family_component(f, 0, 1), 1.0);
            a.support = {-60.0, 60.0 + r, {0.0, r}};
            break;
        }
        case AdversaryKind::GeneralTruncated: {
            const double t = f.upper_quantile(p.alpha / static_cast<double>(p.n));
            const double Ft = 1.0 - f.sf(t);
            a.internals = {{"t", t}, {"c_bar", 1.0 / Ft}};
            a.q1 = [f](double x) { return f.pdf(x); };
            a.q0 = [=](double x) {
                const double cut = (x - r <= t) ? f.pdf(x - r) / Ft : 0.0;
                return (f.pdf(x) - (1.0 - em) * cut) / em;
            };
            a.env0 = single(family_component(f, 0, 1), 1.0 / em);
            a.env1 = single(family_component(f, 0, 1), 1.0);
            const double T = f.tail_extent();
            std::vector<double> br{0.0, r, r + t};
            for (double k : f.knots()) br.insert(br.end(), {k, k + r});
            a.support = {-T - r, T + r, br};
            tv_bound = (1.0 - em) * f.sf(t);
            break;
        }
        case AdversaryKind::GeneralExact: {
            const double xs = general_exact_xstar(f, r, e, em);
            const double P = std::isfinite(xs) ? f.sf(xs - r) : 0.0;
            a.internals = {{"x_star", xs}, {"P_r_S", P}};
            Envelope::Component c1;
            if (P > 0) {
                a.internals["c_star"] = e / ((1.0 - em) * P);
                a.q1 = [=](double x) { return x > xs ? f.pdf(x - r) / P : 0.0; };
                c1 = {1.0, a.q1, [=](Rng& rng) { return r + f.upper_quantile(rng.uniform() * P); }};
            } else {
                a.q1 = [f](double x) { return f.pdf(x); };
                c1 = family_component(f, 0, 1);
            }
            a.q0 = [=, q1 = a.q1](double x) {
                return ((1.0 - e) * f.pdf(x) + e * q1(x) - (1.0 - em) * f.pdf(x - r)) / em;
            };
            a.env0 = Envelope{{family_component(f, 0, 1, 1.0 - e), Envelope::Component{e, c1.density, c1.draw}}, 1.0 / em};
            a.env1 = single(c1, 1.0);
            const double T = f.tail_extent();
            std::vector<double> br{0.0, r};
            if (std::isfinite(xs)) br.push_back(xs);
            for (double k : f.knots()) br.insert(br.end(), {k, k + r});
            a.support = {-T - r, T + r, br};
            break;
        }
        case AdversaryKind::UnknownVariance: {
            const double s1 = p.sigma, s0 = 0.99 * p.sigma;
            a.sigma0 = s0;
            a.sigma1 = s1;
            a.q1 = [=](double x) { return normal_pdf(x / s1) / s1; };
            a.q0 = [=](double x) {
                return (normal_pdf(x / s1) / s1 - (1.0 - em) * normal_pdf((x - r) / s0) / s0) / em;
            };
            a.env0 = single(family_component(gauss, 0, s1), 1.0 / em);
            a.env1 = single(family_component(gauss, 0, s1), 1.0);
            a.support = gaussian_hint({0.0, r}, s1, {});
            break;
        }
        case AdversaryKind::SmallEpsMaxTruncated: {
            if (!(r > 0)) throw ConfigError("small-epsmax-truncated needs r > 0");
            const double t = 2.0 * em / (3.0 * r);
            const double delta = em / (Phi(t) - (1.0 - em) * Phi(t - r));
            a.internals = {{"t", t}, {"delta", delta}};
            a.q1 = [](double x) { return normal_pdf(x); };
            a.q0 = [=](double x) {
                return x <= t ? delta * (normal_pdf(x) - (1.0 - em) * normal_pdf(x - r)) / em : 0.0;
            };
            a.env0 = single(family_component(gauss, 0, 1), delta / em);
            a.env1 = single(family_component(gauss, 0, 1), 1.0);
            a.support = gaussian_hint({0.0, r}, 1.0, {t});
            break;
        }
        case AdversaryKind::SmallEpsMaxExact: {
            if (!(r > 0)) throw ConfigError("small-epsmax-exact needs r > 0");
            const double xs = small_exact_xstar(r, e, em);
            const double D = small_exact_excess(r, e, em);
            const double zeta = e / D;
            const double tail = Phi_upper(xs - r);
            a.internals = {{"x_star", xs}, {"zeta", zeta}};
            a.q1 = [=](double x) {
                const double d = (1.0 - em) * normal_pdf(x - r) - (1.0 - e) * normal_pdf(x);
                return x > xs && d > 0 ? zeta * d / e : 0.0;
            };
            Envelope::Component trunc{1.0, [=](double x) { return x > xs ? normal_pdf(x - r) / tail : 0.0; },
                                      [=](Rng& rng) { return r + Phi_inv_upper(rng.uniform() * tail); }};
            a.env1 = single(trunc, zeta * (1.0 - em) * tail / e);
            Envelope::Component exact_q1{e, a.q1, [q1 = a.q1, env = a.env1](Rng& rng) {
                                             return draw_by_rejection(q1, env, rng);
                                         }};
            a.q0 = [=, q1 = a.q1](double x) {
                return ((1.0 - e) * normal_pdf(x) + e * q1(x) - (1.0 - em) * normal_pdf(x - r)) / em;
            };
            a.env0 = Envelope{{family_component(gauss, 0, 1, 1.0 - e), exact_q1}, 1.0 / em};
            a.support = gaussian_hint({0.0, r}, 1.0, {xs});
            break;
        }
    }

    auto& v = a.validity;
    const DensityCheck c0 = validate_density(a.q0, a.support), c1 = validate_density(a.q1, a.support);
    v.mass0 = c0.mass;
    v.mass1 = c1.mass;
    v.min_density = std::min(c0.min_value, c1.min_value);
    v.tv_bound = tv_bound;
    v.exact_zero = is_exact_match(p.kind);
    v.tv_numeric = numeric_tv([&](double x) { return a.mixture(Side::Null, x); },
                              [&](double x) { return a.mixture(Side::Alternative, x); }, a.support);
    const double lo = a.support.lo, hi = a.support.hi;
    for (int i = 0; i < 10000; ++i) {
        const double x = lo + (hi - lo) * i / 9999.0;
        v.match_error = std::max(v.match_error, std::abs(a.mixture(Side::Null, x) - a.mixture(Side::Alternative, x)));
    }
    if (std::abs(v.mass0 - 1) > 1e-6 || std::abs(v.mass1 - 1) > 1e-6 || v.min_density < -1e-10)
        throw ConstructionError("adversary failed validation (mass0=" + std::to_string(v.mass0) +
                                ", mass1=" + std::to_string(v.mass1) + ", min=" + std::to_string(v.min_density) + ")");
    return a;
}

}  // namespace huberband

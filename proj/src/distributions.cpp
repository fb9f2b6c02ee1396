#include "huberband/distributions.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <charconv>
#include <numbers>
#include <vector>

#include "huberband/normal.hpp"
#include "huberband/rng.hpp"

namespace huberband {

namespace {

double parse_number(std::string_view s, std::string_view spec) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("bad family shape in '" + std::string(spec) + "'");
    return v;
}

double factorial(int k) { return std::tgamma(k + 1.0); }

double binomial(int k, int j) {
    return std::round(std::exp(std::lgamma(k + 1.0) - std::lgamma(j + 1.0) - std::lgamma(k - j + 1.0)));
}

// Irwin-Hall sums at s = k (x + 1/2) for x <= 0.
double bates_cdf_left(int k, double x) {
    const double s = k * (x + 0.5);
    if (s <= 0) return 0.0;
    double acc = 0;
    for (int j = 0; j <= static_cast<int>(std::floor(s)) && j <= k; ++j)
        acc += ((j % 2) ? -1.0 : 1.0) * binomial(k, j) * std::pow(s - j, k);
    return acc / factorial(k);
}

double bates_pdf_left(int k, double x) {
    const double s = k * (x + 0.5);
    if (s < 0) return 0.0;
    if (k == 1) return 1.0;
    double acc = 0;
    for (int j = 0; j <= static_cast<int>(std::floor(s)) && j <= k; ++j)
        acc += ((j % 2) ? -1.0 : 1.0) * binomial(k, j) * std::pow(s - j, k - 1);
    return std::max(0.0, k * acc / factorial(k - 1));
}

}  // namespace

LocationFamily::LocationFamily(FamilyKind kind, double shape) : kind_(kind), shape_(shape) {
    switch (kind_) {
        case FamilyKind::StudentT:
            if (!(shape_ > 0)) throw ConfigError("t family needs nu > 0");
            break;
        case FamilyKind::GeneralizedGaussian:
            if (!(shape_ > 0)) throw ConfigError("generalized Gaussian needs beta > 0");
            norm_ = shape_ / (2.0 * std::tgamma(1.0 / shape_));
            break;
        case FamilyKind::Mollifier: {
            if (!(shape_ > 0)) throw ConfigError("mollifier needs beta > 0");
            const double b = shape_;
            auto g = [b](double t) {
                const double u = (1.0 - t) * (1.0 + t);
                return u <= 0 ? 0.0 : std::exp(-1.0 / std::pow(u, b));
            };
            norm_ = 2.0 * integrate(g, 0.0, 1.0, cfg_.quad_tol);
            break;
        }
        case FamilyKind::Bates:
            if (!(shape_ >= 1) || shape_ != std::floor(shape_))
                throw ConfigError("Bates family needs an integer k >= 1");
            break;
        default:
            break;
    }
}

LocationFamily LocationFamily::gaussian() { return {FamilyKind::Gaussian, 0}; }
LocationFamily LocationFamily::laplace() { return {FamilyKind::Laplace, 0}; }
LocationFamily LocationFamily::student_t(double nu) { return {FamilyKind::StudentT, nu}; }
LocationFamily LocationFamily::generalized_gaussian(double beta) {
    return {FamilyKind::GeneralizedGaussian, beta};
}
LocationFamily LocationFamily::mollifier(double beta) { return {FamilyKind::Mollifier, beta}; }
LocationFamily LocationFamily::bates(int k) { return {FamilyKind::Bates, static_cast<double>(k)}; }
LocationFamily LocationFamily::uniform() { return {FamilyKind::Uniform, 0}; }

LocationFamily LocationFamily::parse(std::string_view spec) {
    auto colon = spec.find(':');
    std::string_view head = spec.substr(0, colon);
    std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    auto need_arg = [&] {
        if (arg.empty()) throw ConfigError("family '" + std::string(spec) + "' needs a shape");
        return parse_number(arg, spec);
    };
    auto no_arg = [&] {
        if (!arg.empty()) throw ConfigError("family '" + std::string(head) + "' takes no shape");
    };
    if (head == "gaussian") return no_arg(), gaussian();
    if (head == "laplace") return no_arg(), laplace();
    if (head == "uniform") return no_arg(), uniform();
    if (head == "t") return student_t(need_arg());
    if (head == "gengauss") return generalized_gaussian(need_arg());
    if (head == "mollifier") return mollifier(need_arg());
    if (head == "bates") {
        double k = need_arg();
        if (k != std::floor(k) || k < 1 || k > 64) throw ConfigError("Bates k must be an integer in [1, 64]");
        return bates(static_cast<int>(k));
    }
    throw ConfigError("unknown family '" + std::string(spec) + "'");
}

std::string LocationFamily::name() const {
    auto num = [](double v) {
        std::string s = std::to_string(v);
        s.erase(s.find_last_not_of('0') + 1);
        if (s.back() == '.') s.pop_back();
        return s;
    };
    switch (kind_) {
        case FamilyKind::Gaussian: return "gaussian";
        case FamilyKind::Laplace: return "laplace";
        case FamilyKind::Uniform: return "uniform";
        case FamilyKind::StudentT: return "t:" + num(shape_);
        case FamilyKind::GeneralizedGaussian: return "gengauss:" + num(shape_);
        case FamilyKind::Mollifier: return "mollifier:" + num(shape_);
        case FamilyKind::Bates: return "bates:" + std::to_string(bates_k());
    }
    return "?";
}

LocationFamily LocationFamily::with_numeric(const NumericConfig& cfg) const {
    cfg.validate();
    LocationFamily f = *this;
    f.cfg_ = cfg;
    return f;
}

double LocationFamily::support_half_width() const {
    switch (kind_) {
        case FamilyKind::Mollifier: return 1.0;
        case FamilyKind::Bates:
        case FamilyKind::Uniform: return 0.5;
        default: return kInf;
    }
}

double LocationFamily::pdf(double x) const {
    const double a = std::fabs(x);
    switch (kind_) {
        case FamilyKind::Gaussian: return normal_pdf(a);
        case FamilyKind::Uniform: return a <= 0.5 ? 1.0 : 0.0;
        case FamilyKind::Bates: return a <= 0.5 ? bates_pdf_left(bates_k(), -a) : 0.0;
        default: {
            const double l = log_pdf(a);
            return l == -kInf ? 0.0 : std::exp(l);
        }
    }
}

double LocationFamily::log_pdf(double x) const {
    const double a = std::fabs(x);
    switch (kind_) {
        case FamilyKind::Gaussian: return normal_log_pdf(a);
        case FamilyKind::Laplace: return -std::numbers::ln2 - a;
        case FamilyKind::StudentT: {
            const double nu = shape_;
            return std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2) - 0.5 * std::log(nu * std::numbers::pi) -
                   (nu + 1) / 2 * std::log1p(a * a / nu);
        }
        case FamilyKind::GeneralizedGaussian: return std::log(norm_) - std::pow(a, shape_);
        case FamilyKind::Mollifier: {
            if (a >= 1.0) return -kInf;
            const double u = (1.0 - a) * (1.0 + a);
            return -1.0 / std::pow(u, shape_) - std::log(norm_);
        }
        case FamilyKind::Uniform:
        case FamilyKind::Bates: {
            const double p = pdf(a);
            return p > 0 ? std::log(p) : -kInf;
        }
    }
    return -kInf;
}

double LocationFamily::mollifier_tail(double x) const {
    if (x >= 1.0) return 0.0;
    const double b = shape_;
    constexpr double kSplit = 0.5;
    if (x < kSplit) {
        auto g = [b](double t) { return std::exp(-1.0 / std::pow((1.0 - t) * (1.0 + t), b)); };
        return integrate(g, x, kSplit, cfg_.quad_tol) / norm_ + mollifier_tail(kSplit);
    }
    // v = (1 - t^2)^{-b} - v0 pulls the factor exp(-v0) out of the integral;
    // what remains is exp(-v) times a slowly varying function of v.
    const double v0 = std::pow((1.0 - x) * (1.0 + x), -b);
    auto h = [b, v0](double v) {
        const double w = v + v0;
        const double u = std::pow(w, -1.0 / b);
        const double t = std::sqrt(1.0 - u);
        return std::exp(-v) * std::pow(w, -1.0 / b - 1.0) / (2.0 * b * t);
    };
    return std::exp(-v0) * integrate(h, 0.0, kInf, cfg_.quad_tol) / norm_;
}

double LocationFamily::sf(double x) const {
    if (x == 0.0) return 0.5;
    if (x < 0) return 1.0 - sf(-x);
    switch (kind_) {
        case FamilyKind::Gaussian: return Phi_upper(x);
        case FamilyKind::Laplace: return 0.5 * std::exp(-x);
        case FamilyKind::Uniform: return x >= 0.5 ? 0.0 : 0.5 - x;
        case FamilyKind::Bates: return x >= 0.5 ? 0.0 : bates_cdf_left(bates_k(), -x);
        case FamilyKind::StudentT: {
            boost::math::students_t_distribution<double> d(shape_);
            return boost::math::cdf(boost::math::complement(d, x));
        }
        case FamilyKind::GeneralizedGaussian:
            return 0.5 * boost::math::gamma_q(1.0 / shape_, std::pow(x, shape_));
        case FamilyKind::Mollifier: return mollifier_tail(x);
    }
    return 0.0;
}

double LocationFamily::cdf(double x) const {
    if (x == 0.0) return 0.5;
    if (x < 0) return sf(-x);
    return 1.0 - sf(x);
}

double LocationFamily::tail_by_bisection(double q) const {
    double hi = 2.0;
    if (bounded()) {
        hi = support_half_width();
    } else {
        for (int i = 0; i < 64 && sf(hi) > q; ++i) hi *= 2;
    }
    return bisect_first_true([&](double t) { return sf(t) <= q; }, 0.0, hi, cfg_.root_tol, cfg_.max_iter);
}

double LocationFamily::upper_quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
    if (q == 0.5) return 0.0;
    if (q > 0.5) return -upper_quantile(1.0 - q);
    switch (kind_) {
        case FamilyKind::Gaussian: return Phi_inv_upper(q);
        case FamilyKind::Laplace: return -std::log(2.0 * q);
        case FamilyKind::Uniform: return 0.5 - q;
        case FamilyKind::StudentT: {
            boost::math::students_t_distribution<double> d(shape_);
            return boost::math::quantile(boost::math::complement(d, q));
        }
        case FamilyKind::GeneralizedGaussian:
            return std::pow(boost::math::gamma_q_inv(1.0 / shape_, 2.0 * q), 1.0 / shape_);
        case FamilyKind::Bates:
            if (q <= 1.0 / factorial(bates_k())) return 0.5 - bates_upper_gap_closed_form(bates_k(), q);
            return tail_by_bisection(q);
        case FamilyKind::Mollifier: return tail_by_bisection(q);
    }
    return 0.0;
}

double LocationFamily::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
    return upper_quantile(1.0 - q);
}

double LocationFamily::tail_extent() const {
    return bounded() ? support_half_width() : upper_quantile(1e-12);
}

std::vector<double> LocationFamily::knots() const {
    switch (kind_) {
        case FamilyKind::Laplace:
        case FamilyKind::GeneralizedGaussian: return {0.0};
        case FamilyKind::Mollifier: return {-1.0, 1.0};
        case FamilyKind::Uniform: return {-0.5, 0.5};
        case FamilyKind::Bates: {
            const int k = bates_k();
            std::vector<double> v;
            for (int j = 0; j <= k; ++j) v.push_back(-0.5 + static_cast<double>(j) / k);
            return v;
        }
        default: return {};
    }
}

SortedSample LocationFamily::sample(double theta, std::size_t n, std::uint64_t seed) const {
    if (n < 1) throw ConfigError("sample size must be positive");
    Rng rng(seed);
    std::vector<double> xs(n);
    for (auto& x : xs) {
        const double u = rng.uniform();
        x = theta + (u < 0.5 ? -upper_quantile(u) : upper_quantile(1.0 - u));
    }
    return SortedSample(std::move(xs));
}

double bates_tail_closed_form(int k, double x) {
    if (k < 1) throw ConfigError("Bates k must be >= 1");
    if (!(x > 0.5 - 1.0 / k && x <= 0.5)) throw DomainError("Bates tail formula holds on (1/2 - 1/k, 1/2]");
    return std::pow(k, k - 1) / factorial(k - 1) * std::pow(0.5 - x, k);
}

double bates_upper_gap_closed_form(int k, double q) {
    if (k < 1) throw ConfigError("Bates k must be >= 1");
    if (!(q > 0 && q <= 1.0 / factorial(k))) throw DomainError("Bates quantile formula needs q <= 1/k!");
    return std::pow(q * factorial(k - 1) / std::pow(k, k - 1), 1.0 / k);
}

QuantileBounds quantile_lemma_bounds(const LocationFamily& family, double q) {
    if (!(q > 0.0 && q <= 1e-3)) throw DomainError("quantile sandwich is only exposed for q <= 1e-3");
    const double L = std::log(1.0 / q);
    const double b = family.shape();
    switch (family.kind()) {
        case FamilyKind::GeneralizedGaussian:
            if (!(b > 1)) throw DomainError("generalized Gaussian sandwich needs beta > 1");
            return {std::pow(L / 2, 1.0 / b), std::pow(L, 1.0 / b)};
        case FamilyKind::Mollifier: return {std::pow(1.0 / L, 1.0 / b), std::pow(2.0 / L, 1.0 / b)};
        default: throw DomainError("no quantile sandwich for family " + family.name());
    }
}

}  // namespace huberband

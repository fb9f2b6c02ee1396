#include "huberband/normal.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "huberband/numeric.hpp"

namespace huberband {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

template <std::size_t N>
double horner(const std::array<double, N>& c, double x) {
    double s = c[N - 1];
    for (std::size_t i = N - 1; i-- > 0;) s = s * x + c[i];
    return s;
}

// Wichura's AS241 (PPND16) for the lower-tail probability p <= 1/2,
// refined by a Halley step against erfc.
double lower_quantile(double p) {
    constexpr std::array<double, 8> a{3.387132872796366608,  133.14166789178437745,
                                      1971.5909503065514427, 13731.693765509461125,
                                      45921.953931549871457, 67265.770927008700853,
                                      33430.575583588128105, 2509.0809287301226727};
    constexpr std::array<double, 8> b{1.0,
                                      42.313330701600911252,
                                      687.1870074920579083,
                                      5394.1960214247511077,
                                      21213.794301586595867,
                                      39307.89580009271061,
                                      28729.085735721942674,
                                      5226.495278852545925};
    constexpr std::array<double, 8> c{1.42343711074968357734,  4.6303378461565452959,
                                      5.7694972214606914055,   3.64784832476320460504,
                                      1.27045825245236838258,  0.24178072517745061177,
                                      0.0227238449892691845833, 7.7454501427834140764e-4};
    constexpr std::array<double, 8> d{1.0,
                                      2.05319162663775882187,
                                      1.6763848301838038494,
                                      0.68976733498510000455,
                                      0.14810397642748007459,
                                      0.0151986665636164571966,
                                      5.475938084995344946e-4,
                                      1.05075007164441684324e-9};
    constexpr std::array<double, 8> e{6.6579046435011037772,   5.4637849111641143699,
                                      1.7848265399172913358,   0.29656057182850489123,
                                      0.026532189526576123093, 0.0012426609473880784386,
                                      2.71155556874348757815e-5, 2.01033439929228813265e-7};
    constexpr std::array<double, 8> f{1.0,
                                      0.59983220655588793769,
                                      0.13692988092273580531,
                                      0.0148753612908506148525,
                                      7.868691311456132591e-4,
                                      1.8463183175100546818e-5,
                                      1.4215117583164458887e-7,
                                      2.04426310338993978564e-15};
    double x;
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        x = q * horner(a, r) / horner(b, r);
    } else {
        double r = std::sqrt(-std::log(p));
        if (r <= 5.0) {
            r -= 1.6;
            x = -horner(c, r) / horner(d, r);
        } else {
            r -= 5.0;
            x = -horner(e, r) / horner(f, r);
        }
    }
    if (std::isfinite(x)) {
        const double err = Phi(x) - p;
        const double u = err * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
        x -= u / (1 + x * u / 2);
    }
    return x;
}

}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_log_pdf(double x) { return std::log(kInvSqrt2Pi) - 0.5 * x * x; }

double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double Phi_upper(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double Phi_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -kInf;
        if (p == 1.0) return kInf;
        throw DomainError("Phi_inv: probability outside [0, 1]");
    }
    if (p <= 0.5) return lower_quantile(p);
    return -lower_quantile(1.0 - p);
}

double Phi_inv_upper(double q) {
    if (!(q > 0.0 && q < 1.0)) {
        if (q == 0.0) return kInf;
        if (q == 1.0) return -kInf;
        throw DomainError("Phi_inv_upper: probability outside [0, 1]");
    }
    if (q <= 0.5) return -lower_quantile(q);
    return lower_quantile(1.0 - q);
}

}  // namespace huberband

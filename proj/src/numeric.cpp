#include "huberband/numeric.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdint>
#include <limits>

namespace huberband {

void NumericConfig::validate() const {
    if (!(quad_tol > 0) || !(root_tol > 0) || max_iter < 1)
        throw ConfigError("numeric config: tolerances must be positive and max_iter >= 1");
}

namespace {

double gk(const RealFn& f, double a, double b, double rel_tol) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0;
    // Abscissae are rounded to ulp(max(|a|, |b|)); on short intervals far from
    // the origin that caps the attainable relative accuracy.
    if (std::isfinite(a) && std::isfinite(b)) {
        const double floor_tol = 64 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)) / (b - a);
        rel_tol = std::max(rel_tol, floor_tol);
        // Boost compares an unscaled error estimate against a scaled tolerance,
        // so narrow intervals never converge; integrate over [0, 1] instead.
        const double w = b - a;
        return w * gauss_kronrod<double, 31>::integrate([&](double u) { return f(a + w * u); }, 0.0, 1.0, 20, rel_tol, &err);
    }
    return gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol, &err);
}

}  // namespace

double integrate(const RealFn& f, double a, double b, double rel_tol,
                 const std::vector<double>& breaks) {
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, rel_tol, breaks);
    std::vector<double> pts{a};
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    std::sort(pts.begin() + 1, pts.end());
    pts.push_back(b);
    double total = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i] < pts[i + 1]) total += gk(f, pts[i], pts[i + 1], rel_tol);
    return total;
}

double bisect_first_true(const std::function<bool(double)>& pred, double lo, double hi,
                         double tol, int max_iter) {
    if (pred(lo)) return lo;
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) break;
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

double bisect_last_true(const std::function<bool(double)>& pred, double lo, double hi,
                        double tol, int max_iter) {
    if (pred(hi)) return hi;
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) break;
        (pred(mid) ? lo : hi) = mid;
    }
    return lo;
}

Extremum maximize_scan(const RealFn& f, double a, double b, int scan_points, int refine_top) {
    if (!(b > a)) return {a, f(a)};
    const int m = std::max(scan_points, 2);
    std::vector<double> xs(m), vs(m);
    for (int i = 0; i < m; ++i) {
        xs[i] = (i == m - 1) ? b : a + (b - a) * i / (m - 1);
        vs[i] = f(xs[i]);
    }
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + std::min(refine_top, m), order.end(),
                      [&](int i, int j) { return vs[i] > vs[j]; });
    Extremum best{xs[order[0]], vs[order[0]]};
    for (int k = 0; k < std::min(refine_top, m); ++k) {
        int i = order[k];
        double lo = xs[std::max(i - 1, 0)], hi = xs[std::min(i + 1, m - 1)];
        std::uintmax_t iters = 100;
        auto r = boost::math::tools::brent_find_minima([&](double x) { return -f(x); }, lo, hi,
                                                       52, iters);
        if (-r.second > best.value) best = {r.first, -r.second};
    }
    return best;
}

}  // namespace huberband

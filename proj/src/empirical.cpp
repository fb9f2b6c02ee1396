#include "huberband/empirical.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <string>

#include "huberband/normal.hpp"
#include "huberband/numeric.hpp"

namespace huberband {

SortedSample::SortedSample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw ConfigError("sample must contain at least one value");
    for (double v : values_)
        if (!std::isfinite(v)) throw ConfigError("sample contains a non-finite value");
    std::sort(values_.begin(), values_.end());
}

namespace {

// n*q split into its rounded product and the exact rounding residual.
std::pair<double, double> exact_product(std::size_t n, double q) {
    const double nd = static_cast<double>(n);
    const double p = nd * q;
    return {p, std::fma(nd, q, -p)};
}

}  // namespace

std::size_t quantile_index(std::size_t n, double q) {
    auto [p, err] = exact_product(n, q);
    double k = std::ceil(p);
    if (k == p && err > 0) k += 1;
    if (k < 1) return 1;
    if (k > static_cast<double>(n)) return n;
    return static_cast<std::size_t>(k);
}

std::size_t floor_index(std::size_t n, double q) {
    auto [p, err] = exact_product(n, q);
    double k = std::floor(p);
    if (k == p && err < 0) k -= 1;
    return k < 0 ? 0 : static_cast<std::size_t>(k);
}

double empirical_quantile(const SortedSample& s, double q) {
    if (!(q > 0.0 && q <= 1.0)) throw DomainError("empirical_quantile: q must lie in (0, 1]");
    return s.order_stat(quantile_index(s.size(), q));
}

double empirical_cdf(const SortedSample& s, double x) {
    auto v = s.values();
    auto it = std::upper_bound(v.begin(), v.end(), x);
    return static_cast<double>(it - v.begin()) / static_cast<double>(v.size());
}

double dkw_radius(std::size_t n, double alpha) {
    if (n < 1) throw DomainError("dkw_radius: n must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("dkw_radius: alpha must lie in (0, 1)");
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

MedianMad median_and_mad(const SortedSample& s) {
    const std::size_t n = s.size();
    const std::size_t mid = (n + 1) / 2;
    const double med = s.order_stat(mid);
    std::vector<double> dev(n);
    std::transform(s.values().begin(), s.values().end(), dev.begin(),
                   [med](double x) { return std::fabs(x - med); });
    std::nth_element(dev.begin(), dev.begin() + static_cast<std::ptrdiff_t>(mid - 1), dev.end());
    return {med, dev[mid - 1] / Phi_inv(0.75)};
}

double ks_distance(const SortedSample& s, const std::function<double(double)>& cdf) {
    const auto v = s.values();
    const double n = static_cast<double>(v.size());
    double d = 0;
    std::size_t first = 0;
    while (first < v.size()) {
        std::size_t last = first;
        while (last + 1 < v.size() && v[last + 1] == v[first]) ++last;
        // F_n jumps at this value from first/n to (last+1)/n.
        const double f = cdf(v[first]);
        d = std::max({d, std::fabs((last + 1) / n - f), std::fabs(first / n - f)});
        first = last + 1;
    }
    return d;
}

SortedSample read_sample(std::istream& in) {
    std::vector<double> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r,");
        std::string tok = line.substr(b, e - b + 1);
        if (first && (tok == "x" || tok == "\"x\"")) {
            first = false;
            continue;
        }
        first = false;
        double v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            throw ConfigError("cannot parse sample value: '" + tok + "'");
        out.push_back(v);
    }
    return SortedSample(std::move(out));
}

}  // namespace huberband

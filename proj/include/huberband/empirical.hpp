#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace huberband {

// Order statistics X_(1) <= ... <= X_(n); immutable after construction.
class SortedSample {
public:
    explicit SortedSample(std::vector<double> values);

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    // 1-based order statistic X_(k).
    double order_stat(std::size_t k) const { return values_[k - 1]; }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

private:
    std::vector<double> values_;
};

// ceil(n q) computed exactly for the double q, clamped to [1, n].
std::size_t quantile_index(std::size_t n, double q);
// floor(n q) computed exactly for the double q (no clamping).
std::size_t floor_index(std::size_t n, double q);

// F_n^{-1}(q) = X_(ceil(n q)) for q in (0, 1].
double empirical_quantile(const SortedSample& s, double q);
double empirical_cdf(const SortedSample& s, double x);

double dkw_radius(std::size_t n, double alpha);

struct MedianMad {
    double median;
    double scale;
};
MedianMad median_and_mad(const SortedSample& s);

// sup_x |F_n(x) - F(x)|, evaluated on both sides of every order statistic.
double ks_distance(const SortedSample& s, const std::function<double(double)>& cdf);

// Newline-delimited floats or a one-column CSV with optional header "x".
SortedSample read_sample(std::istream& in);

}  // namespace huberband

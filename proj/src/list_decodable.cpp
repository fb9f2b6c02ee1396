#include "huberband/list_decodable.hpp"

#include <algorithm>
#include <cmath>

#include "huberband/gaussian_arci.hpp"

namespace huberband {

CandidateSet candidate_set(const SortedSample& s) {
    const auto v = s.values();
    const std::size_t n = s.size();
    std::vector<double> starts(n), ends(n);
    for (std::size_t i = 0; i < n; ++i) {
        starts[i] = v[i] - 2.0;
        ends[i] = v[i] + 2.0;
    }
    std::sort(starts.begin(), starts.end());
    std::sort(ends.begin(), ends.end());
    std::vector<double> coords;
    coords.reserve(2 * n);
    std::merge(starts.begin(), starts.end(), ends.begin(), ends.end(), std::back_inserter(coords));
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

    // count >= 0.005 n  <=>  200 count >= n
    auto member = [n](std::size_t count) { return 200 * count >= n; };
    CandidateSet H;
    std::size_t si = 0, ei = 0;
    bool open = false;
    for (std::size_t k = 0; k < coords.size(); ++k) {
        const double c = coords[k];
        while (si < n && starts[si] <= c) ++si;
        while (ei < n && ends[ei] < c) ++ei;
        // Closed balls: a point ending exactly at c still counts at c.
        const std::size_t at_point = si - ei;
        std::size_t ej = ei;
        while (ej < n && ends[ej] <= c) ++ej;
        const std::size_t after = si - ej;
        if (member(at_point)) {
            if (!open) H.intervals.push_back({c, c});
            H.intervals.back().upper = c;
            open = member(after);
        } else {
            open = false;
        }
    }
    return H;
}

std::vector<double> build_list(const CandidateSet& H) {
    std::vector<double> out;
    if (H.intervals.empty()) return out;
    constexpr double kGap = 4.0 + 0x1.0p-40;
    double cur = H.intervals.front().lower;
    out.push_back(cur);
    std::size_t j = 0;
    while (true) {
        double c = cur + kGap;
        while (!(c - cur > 4.0)) c = std::nextafter(c, kInf);
        while (j < H.intervals.size() && H.intervals[j].upper < c) ++j;
        if (j == H.intervals.size()) break;
        cur = std::max(c, H.intervals[j].lower);
        out.push_back(cur);
    }
    return out;
}

ListConfidenceSet confidence_set(const SortedSample& s, double alpha, bool modified) {
    ListConfidenceSet out;
    out.interval = just_coverage_interval(s, alpha).interval;
    out.list = build_list(candidate_set(s));
    if (modified && !out.interval.empty() && out.interval.length() < 8.0) {
        out.set = ConfidenceSet(out.interval);
        out.reduced = true;
        return out;
    }
    std::vector<Interval> balls;
    balls.reserve(out.list.size());
    for (double c : out.list) balls.push_back({c - 4.0, c + 4.0});
    out.set = ConfidenceSet::union_of(std::move(balls)).intersect(out.interval);
    return out;
}

}  // namespace huberband

#include "huberband/interval.hpp"

#include <algorithm>

namespace huberband {

ConfidenceSet::ConfidenceSet(const Interval& single) {
    if (!single.empty()) parts_.push_back(single);
}

ConfidenceSet ConfidenceSet::union_of(std::vector<Interval> parts) {
    std::erase_if(parts, [](const Interval& i) { return i.empty(); });
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lower < b.lower; });
    ConfidenceSet out;
    for (const auto& p : parts) {
        if (!out.parts_.empty() && p.lower <= out.parts_.back().upper)
            out.parts_.back().upper = std::max(out.parts_.back().upper, p.upper);
        else
            out.parts_.push_back(p);
    }
    return out;
}

double ConfidenceSet::volume() const {
    double v = 0;
    for (const auto& p : parts_) v += p.length();
    return v;
}

bool ConfidenceSet::contains(double x) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                               [](double v, const Interval& i) { return v < i.lower; });
    return it != parts_.begin() && std::prev(it)->contains(x);
}

ConfidenceSet ConfidenceSet::intersect(const ConfidenceSet& other) const {
    ConfidenceSet out;
    std::size_t i = 0, j = 0;
    while (i < parts_.size() && j < other.parts_.size()) {
        Interval x = parts_[i].intersect(other.parts_[j]);
        if (!x.empty()) out.parts_.push_back(x);
        (parts_[i].upper < other.parts_[j].upper) ? ++i : ++j;
    }
    return out;
}

}  // namespace huberband

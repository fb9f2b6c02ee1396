#pragma once

#include <vector>

#include "huberband/numeric.hpp"

namespace huberband {

// Closed interval [lower, upper]; empty when upper < lower.
struct Interval {
    double lower = -kInf;
    double upper = kInf;

    static Interval whole() { return {}; }
    bool empty() const { return upper < lower; }
    double length() const { return empty() ? 0.0 : upper - lower; }
    bool contains(double x) const { return lower <= x && x <= upper; }
    Interval intersect(const Interval& o) const {
        return {lower > o.lower ? lower : o.lower, upper < o.upper ? upper : o.upper};
    }
    Interval shifted(double c) const { return {lower + c, upper + c}; }
};

// Finite union of disjoint closed intervals, sorted.
class ConfidenceSet {
public:
    ConfidenceSet() = default;
    explicit ConfidenceSet(const Interval& single);
    // Union of arbitrary (possibly overlapping) intervals.
    static ConfidenceSet union_of(std::vector<Interval> parts);

    const std::vector<Interval>& components() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    double volume() const;
    bool contains(double x) const;
    ConfidenceSet intersect(const ConfidenceSet& other) const;
    ConfidenceSet intersect(const Interval& other) const { return intersect(ConfidenceSet(other)); }

private:
    std::vector<Interval> parts_;
};

}  // namespace huberband

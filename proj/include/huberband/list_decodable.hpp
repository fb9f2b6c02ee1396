#pragma once

#include <vector>

#include "huberband/empirical.hpp"
#include "huberband/interval.hpp"

namespace huberband {

// H = {x : #{i : |X_i - x| <= 2} >= 0.005 n}, as disjoint closed intervals.
struct CandidateSet {
    std::vector<Interval> intervals;
};

CandidateSet candidate_set(const SortedSample& s);

// Greedy leftmost packing of H with pairwise gaps > 4.
std::vector<double> build_list(const CandidateSet& H);

struct ListConfidenceSet {
    ConfidenceSet set;
    std::vector<double> list;
    Interval interval;  // the one-sided-guarantee interval (t in [4, t_max], margin 8/t)
    bool reduced = false;  // modified rule returned the bare interval
};

ListConfidenceSet confidence_set(const SortedSample& s, double alpha, bool modified);

}  // namespace huberband

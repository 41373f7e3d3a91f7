#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace witsim {

// Half-open interval [lo, hi) on the non-negative reals.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Gaps and lengths below this are snapped away during normalization so sliver
// intervals cannot accumulate.
inline constexpr double kEndpointSnap = 1e-15;

// Tolerance on |measure - 1| for sets fed to the theorem bounds.
inline constexpr double kUnitMeasureTol = 1e-12;

// Finite union of disjoint half-open intervals, kept sorted and merged.
class IntervalSet {
public:
    IntervalSet() = default;
    explicit IntervalSet(std::vector<Interval> parts);

    static IntervalSet unit();  // [0, 1)

    const std::vector<Interval>& parts() const noexcept { return parts_; }
    bool empty() const noexcept { return parts_.empty(); }
    double measure() const noexcept;

private:
    std::vector<Interval> parts_;
};

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);

// Fold of intersect over a non-empty list.
IntervalSet common_intersection(const std::vector<IntervalSet>& sets);

struct TheoremBounds {
    double lower = 0.0;  // 2 - n + I_r, deliberately not clamped
    double upper = 0.0;  // I_r / (n - 1)
    double overlap_sum = 0.0;  // I_r
};

// Bounds on |∩_j A_j| from the pairwise overlaps with reference set r
// (0-based). Every set must have measure 1 within kUnitMeasureTol.
TheoremBounds theorem_bounds(const std::vector<IntervalSet>& sets, std::size_t r);

// min_{j≠r} |A_r ∩ A_j|: the tighter upper bound on the common intersection.
double min_pairwise_upper(const std::vector<IntervalSet>& sets, std::size_t r);

// Unit reference [0,1) plus one unit set per overlap o_j: prefix [0, o_j) and
// a tail of length 1-o_j placed in a region disjoint from everything else, so
// |A_r ∩ A_j| = o_j exactly. Index 0 of the result is the reference.
std::vector<IntervalSet> sets_from_reference_overlaps(const std::vector<double>& overlaps);

// Deterministic unit-measure set with up to `fragments` disjoint pieces placed
// inside [0, universe). Requires universe >= 1.
IntervalSet random_unit_set(double universe, std::size_t fragments, std::uint64_t seed);

// One "lo hi" pair per line, sorted.
void write_interval_set(std::ostream& os, const IntervalSet& s);

}  // namespace witsim

#include "witsim/setmodel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "witsim/numfmt.hpp"

namespace witsim {

IntervalSet::IntervalSet(std::vector<Interval> parts) {
    for (const Interval& iv : parts) {
        if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi)))
            throw std::invalid_argument("IntervalSet: endpoints must be finite");
        if (iv.lo < 0.0) throw std::invalid_argument("IntervalSet: endpoints must be >= 0");
        if (iv.hi < iv.lo) throw std::invalid_argument("IntervalSet: interval with hi < lo");
    }
    std::sort(parts.begin(), parts.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const Interval& iv : parts) {
        if (iv.hi - iv.lo < kEndpointSnap) continue;  // sliver
        if (!parts_.empty() && iv.lo <= parts_.back().hi + kEndpointSnap)
            parts_.back().hi = std::max(parts_.back().hi, iv.hi);
        else
            parts_.push_back(iv);
    }
}

IntervalSet IntervalSet::unit() { return IntervalSet({{0.0, 1.0}}); }

double IntervalSet::measure() const noexcept {
    double total = 0.0;
    for (const Interval& iv : parts_) total += iv.hi - iv.lo;
    return total;
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> out;
    const auto& pa = a.parts();
    const auto& pb = b.parts();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < pa.size() && j < pb.size()) {
        const double lo = std::max(pa[i].lo, pb[j].lo);
        const double hi = std::min(pa[i].hi, pb[j].hi);
        if (hi > lo) out.push_back({lo, hi});
        if (pa[i].hi < pb[j].hi)
            ++i;
        else
            ++j;
    }
    return IntervalSet(std::move(out));
}

IntervalSet common_intersection(const std::vector<IntervalSet>& sets) {
    if (sets.empty())
        throw std::invalid_argument("common_intersection: need at least one set");
    IntervalSet acc = sets.front();
    for (std::size_t i = 1; i < sets.size(); ++i) acc = intersect(acc, sets[i]);
    return acc;
}

namespace {

void require_unit_family(const std::vector<IntervalSet>& sets, std::size_t r, const char* who) {
    if (sets.size() < 2)
        throw std::invalid_argument(std::string(who) + ": need at least two sets");
    if (r >= sets.size())
        throw std::invalid_argument(std::string(who) + ": reference index out of range");
    for (const IntervalSet& s : sets)
        if (std::abs(s.measure() - 1.0) > kUnitMeasureTol)
            throw std::invalid_argument(std::string(who) + ": set of measure " +
                                        fmt_double(s.measure()) + ", expected 1");
}

}  // namespace

TheoremBounds theorem_bounds(const std::vector<IntervalSet>& sets, std::size_t r) {
    require_unit_family(sets, r, "theorem_bounds");
    const double n = static_cast<double>(sets.size());
    double overlap_sum = 0.0;
    for (std::size_t j = 0; j < sets.size(); ++j)
        if (j != r) overlap_sum += intersect(sets[r], sets[j]).measure();
    TheoremBounds b;
    b.overlap_sum = overlap_sum;
    b.lower = 2.0 - n + overlap_sum;
    b.upper = overlap_sum / (n - 1.0);
    return b;
}

double min_pairwise_upper(const std::vector<IntervalSet>& sets, std::size_t r) {
    require_unit_family(sets, r, "min_pairwise_upper");
    double best = 1.0;
    for (std::size_t j = 0; j < sets.size(); ++j)
        if (j != r) best = std::min(best, intersect(sets[r], sets[j]).measure());
    return best;
}

std::vector<IntervalSet> sets_from_reference_overlaps(const std::vector<double>& overlaps) {
    for (double o : overlaps)
        if (!(o >= 0.0 && o <= 1.0))
            throw std::invalid_argument("sets_from_reference_overlaps: overlap outside [0, 1]");
    std::vector<IntervalSet> sets;
    sets.reserve(overlaps.size() + 1);
    sets.push_back(IntervalSet::unit());
    for (std::size_t j = 0; j < overlaps.size(); ++j) {
        const double o = overlaps[j];
        std::vector<Interval> parts;
        if (o > 0.0) parts.push_back({0.0, o});
        // make up the remaining measure in a tail region owned by set j alone
        if (o < 1.0) {
            const double start = 1.0 + static_cast<double>(j);
            parts.push_back({start, start + (1.0 - o)});
        }
        sets.push_back(IntervalSet(std::move(parts)));
    }
    return sets;
}

IntervalSet random_unit_set(double universe, std::size_t fragments, std::uint64_t seed) {
    if (!(universe >= 1.0))
        throw std::invalid_argument(
            "random_unit_set: universe must be >= 1 to hold unit measure");
    if (fragments == 0)
        throw std::invalid_argument("random_unit_set: need at least one fragment");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // fragment lengths: positive shares normalized to total 1
    std::vector<double> len(fragments);
    double lsum = 0.0;
    for (double& v : len) {
        v = 0.05 + unif(rng);
        lsum += v;
    }
    for (double& v : len) v /= lsum;

    // spread the slack W - 1 over the k+1 gaps
    std::vector<double> gap(fragments + 1, 0.0);
    const double slack = universe - 1.0;
    if (slack > 0.0) {
        double gsum = 0.0;
        for (double& g : gap) {
            g = unif(rng);
            gsum += g;
        }
        if (gsum < 1e-9) gsum = 1.0;
        for (double& g : gap) g *= slack / gsum;
    }

    std::vector<Interval> parts;
    parts.reserve(fragments);
    double cursor = 0.0;
    for (std::size_t i = 0; i < fragments; ++i) {
        cursor += gap[i];
        const double hi = cursor + len[i];
        parts.push_back({cursor, hi});
        cursor = hi;
    }
    return IntervalSet(std::move(parts));
}

void write_interval_set(std::ostream& os, const IntervalSet& s) {
    for (const Interval& iv : s.parts())
        os << fmt_double(iv.lo) << ' ' << fmt_double(iv.hi) << '\n';
}

}  // namespace witsim

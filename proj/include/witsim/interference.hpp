#pragma once

#include "witsim/matrix.hpp"
#include "witsim/permanent.hpp"

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace witsim {

// Partition of photons into mutually identical groups, written as a letter
// string ("AAB": photons 0,1 identical, photon 2 distinguishable from them).
// Canonical form: first occurrences of letters run A, B, C, ... in order.
struct ExtremalLabel {
    std::string letters;

    static ExtremalLabel canonical(std::string_view s);

    std::size_t size() const noexcept { return letters.size(); }
    bool all_identical() const noexcept;

    // Number of photons j >= 1 whose letter differs from photon 0's. For the
    // witness input ordering this is m, the count of bottom photons
    // distinguishable from the reference.
    std::size_t unlike_reference() const noexcept;

    auto operator<=>(const ExtremalLabel&) const = default;
};

// All canonical labels of n photons (Bell-number many), lexicographic.
// n is capped at 10 (Bell(10) = 115975).
std::vector<ExtremalLabel> enumerate_extremal_labels(std::size_t n);

// Convex weights over extremal labels. c1 is the weight of the all-identical
// label.
struct PhotonMixture {
    std::map<ExtremalLabel, double> weights;

    // All weights in [0,1], total 1 within 1e-12, all labels the same length.
    void validate() const;
    double c1() const;
};

struct OutputDistribution {
    std::map<ModeOccupation, double> probabilities;
    int photon_count = 0;
    int mode_count = 0;
};

// True iff any mode carries two or more photons.
bool is_bunching_pattern(const ModeOccupation& occ);

// Exact output distribution for one photon per listed input mode, photons
// grouped by `label`: groups evolve independently and their occupation
// distributions are convolved; within a group photons interfere fully.
OutputDistribution extremal_distribution(const ComplexMatrix& u,
                                         const std::vector<std::size_t>& input_modes,
                                         const ExtremalLabel& label);

// Pointwise convex combination of extremal distributions.
OutputDistribution mixture_distribution(const ComplexMatrix& u,
                                        const std::vector<std::size_t>& input_modes,
                                        const PhotonMixture& mix);

double bunching_probability(const OutputDistribution& dist);

// Probability that both photons leave through the same port of beam splitter
// `bs_index` (1-based), conditioned on exactly two photons across its output
// pair. Returns nullopt when the conditioning set has probability < 1e-12.
std::optional<double> conditional_bs_bunching(const OutputDistribution& dist,
                                              std::size_t bs_index);

// Two-photon HOM bunching probability (1 + x) / 2 from the overlap x.
double hom_bunching_from_overlap(double overlap);

// Two-column table: comma-joined occupation counts, then the probability, in
// lexicographic pattern order.
void write_distribution(std::ostream& os, const OutputDistribution& dist);

}  // namespace witsim

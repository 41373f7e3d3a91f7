#pragma once

#include "witsim/circuit.hpp"

#include <cstddef>
#include <vector>

namespace witsim {

// Two-sided bound on the genuine-indistinguishability weight c1. `lower` and
// `upper` are clamped to [0,1]; the raw values are kept for diagnostics and
// for the set-model equivalence, where the lower bound may go negative.
struct C1Interval {
    double lower = 0.0;
    double upper = 0.0;
    double raw_lower = 0.0;
    double raw_upper = 0.0;
    bool lower_clamped = false;
    bool upper_clamped = false;
};

struct Verdict {
    bool genuine = false;
    double violation = 0.0;     // p_b - threshold
    double significance = 0.0;  // violation / std_error; NaN when std_error <= 0
};

// Bunching threshold of a non-ideal interferometer. `value` averages the
// single-distinguishable-photon scenarios (the headline number); `worst_case`
// is the max over scenarios for an adversarial reading.
struct NonidealThreshold {
    double value = 0.0;
    double worst_case = 0.0;
    std::vector<double> per_scenario;
};

// p* = (2n-3)/(2n-2): the largest bunching probability reachable without all
// n photons being identical.
double ideal_threshold(std::size_t n);

// Bunching probability of an extremal state with m bottom photons
// distinguishable from the reference, ideal circuit: 1 - m/(2(n-1)).
double extremal_bunching(std::size_t n, std::size_t m);

// lower = (p_b - p*)/(1 - p*), upper = 2 p_b - 1, clamped to [0,1].
// lower > 0 certifies genuine n-photon indistinguishability.
C1Interval c1_bounds(double p_b, std::size_t n);

// min_k (2 per_bs_hom[k] - 1), clamped to [0,1]. Requires a non-empty list.
double tighter_c1_upper(const std::vector<double>& per_bs_hom);

// Two photons on the two inputs of BS(R): 4R(1-R) when identical,
// 2R(1-R) when distinguishable.
double bs_pair_bunching(double reflectivity, bool identical);

// Threshold with measured layer-A weights and layer-B reflectivities: for each
// scenario j' (the single distinguishable photon sits at beam splitter j'),
// |Q_{j',ref}|^2 P_dis(R_j') + Σ_{j≠j'} |Q_{j,ref}|^2 P_ind(R_j).
NonidealThreshold nonideal_threshold(const CircuitConfig& cfg);

// GENUINE iff p_b - threshold > 0 (strict).
Verdict verdict(double p_b, double threshold, double std_error);

}  // namespace witsim

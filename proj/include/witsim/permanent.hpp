#pragma once

#include "witsim/matrix.hpp"

#include <cstddef>
#include <vector>

namespace witsim {

// Photon count per mode; length equals the mode count of its circuit.
using ModeOccupation = std::vector<int>;

inline constexpr std::size_t kNaivePermanentCap = 9;
inline constexpr std::size_t kRyserPermanentCap = 24;

// Permutation-sum definition, dimensions <= 9. Kept as the independent oracle
// for the Ryser kernel.
cplx permanent_naive(const ComplexMatrix& m);

// Ryser inclusion-exclusion with Gray-code row-sum updates, O(2^k k)
// arithmetic, dimensions <= 24. The subset range is split over a fixed chunk
// grid (OpenMP across chunks); chunk boundaries and the reduction order do not
// depend on the thread count, so results are bit-stable across runs.
cplx permanent_ryser(const ComplexMatrix& m);

// Single-stream serial Gray-code walk. Reference implementation kept for
// testing and for the benchmark comparison.
cplx permanent_ryser_serial(const ComplexMatrix& m);

// |Perm(U_ST)|^2 / (Π s_i! Π t_j!), where U_ST repeats column j s_j times and
// row i t_i times. Throws if the photon numbers of input and output differ.
double output_probability(const ComplexMatrix& u, const ModeOccupation& input,
                          const ModeOccupation& output);

// Every occupation of `photons` photons over `modes` modes, in lexicographic
// order (the file/diff order used throughout).
std::vector<ModeOccupation> enumerate_occupations(std::size_t modes, int photons);

}  // namespace witsim

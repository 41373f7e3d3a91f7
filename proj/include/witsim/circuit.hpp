#pragma once

#include "witsim/matrix.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace witsim {

// Discrete Fourier transform on d modes, entry (j,k) = exp(+2πi jk/d)/√d with
// zero-based indices. d = 1 degenerates to the 1x1 identity.
ComplexMatrix build_qft(std::size_t d);

// Two-mode coupler [[r, √(1-R)], [√(1-R), -r]] with r = √R, R the power
// reflectivity. R = 0.5 is the balanced beam splitter.
ComplexMatrix build_beam_splitter(double reflectivity);

// Parameters of the witness interferometer for n photons: a mixing layer A on
// the top n-1 modes (empty optional = ideal QFT) followed by one beam splitter
// per top mode, coupling it to a dedicated bottom mode.
struct CircuitConfig {
    std::size_t n = 0;
    std::optional<ComplexMatrix> layer_a;
    std::vector<double> layer_b_reflectivities;

    static CircuitConfig ideal(std::size_t n);

    std::size_t mode_count() const noexcept { return 2 * (n - 1); }

    // Throws std::invalid_argument on any violated constraint, including a
    // non-unitary explicit layer A.
    void validate() const;

    // The (n-1)x(n-1) layer-A matrix actually in effect.
    ComplexMatrix layer_a_matrix() const;
};

// Full 2(n-1)-mode unitary: layer A acts on modes 0..n-2 (identity on the
// bottom rail), then BS(R_k) couples modes (k, n-1+k) for k = 0..n-2. The
// returned product is layer B ∘ layer A and always passes check_unitary.
ComplexMatrix build_witness_circuit(const CircuitConfig& cfg);

// Output mode pair of beam splitter `bs_index` (1-based): zero-based modes
// (bs_index-1, n-1+bs_index-1).
std::pair<std::size_t, std::size_t> bs_output_modes(std::size_t n, std::size_t bs_index);

// Canonical input assignment: photon 0 (the reference) enters mode 0, bottom
// photon j enters mode n-1+j-1. Modes 1..n-2 start in vacuum.
std::vector<std::size_t> witness_input_modes(std::size_t n);

// JSON config with keys n, layer_a ("ideal" | rows of [re, im] pairs) and
// layer_b_reflectivities. Malformed text raises parse_error citing the line;
// schema problems cite the offending key.
CircuitConfig parse_circuit_config(const std::string& text, const std::string& origin);
CircuitConfig load_circuit_config(const std::string& path);

}  // namespace witsim

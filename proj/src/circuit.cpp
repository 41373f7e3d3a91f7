#include "witsim/circuit.hpp"

#include "witsim/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace witsim {

ComplexMatrix build_qft(std::size_t d) {
    if (d == 0) throw std::invalid_argument("build_qft: dimension must be >= 1");
    ComplexMatrix m(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) {
            // positive exponent, zero-based indices; reduce j*k mod d before
            // the trig call to keep phases in [0, 2π)
            const double frac = static_cast<double>((j * k) % d) / static_cast<double>(d);
            m(j, k) = std::polar(norm, 2.0 * std::numbers::pi * frac);
        }
    return m;
}

ComplexMatrix build_beam_splitter(double reflectivity) {
    if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
        throw std::invalid_argument("build_beam_splitter: reflectivity outside [0, 1]");
    const double r = std::sqrt(reflectivity);
    const double t = std::sqrt(1.0 - reflectivity);
    ComplexMatrix m(2, 2);
    m(0, 0) = r;
    m(0, 1) = t;
    m(1, 0) = t;
    m(1, 1) = -r;
    return m;
}

CircuitConfig CircuitConfig::ideal(std::size_t n) {
    CircuitConfig cfg;
    cfg.n = n;
    if (n >= 1) cfg.layer_b_reflectivities.assign(n - 1, 0.5);
    cfg.validate();
    return cfg;
}

void CircuitConfig::validate() const {
    if (n < 2) throw std::invalid_argument("CircuitConfig: n must be >= 2");
    if (layer_b_reflectivities.size() != n - 1)
        throw std::invalid_argument("CircuitConfig: layer_b_reflectivities needs n-1 = " +
                                    std::to_string(n - 1) + " entries, got " +
                                    std::to_string(layer_b_reflectivities.size()));
    for (double r : layer_b_reflectivities)
        if (!(r >= 0.0 && r <= 1.0))
            throw std::invalid_argument("CircuitConfig: reflectivity outside [0, 1]");
    if (layer_a) {
        if (layer_a->rows() != n - 1 || layer_a->cols() != n - 1)
            throw std::invalid_argument("CircuitConfig: layer_a must be (n-1)x(n-1)");
        if (!check_unitary(*layer_a, kUnitarityTol))
            throw std::invalid_argument("CircuitConfig: layer_a failed the unitarity check");
    }
}

ComplexMatrix CircuitConfig::layer_a_matrix() const {
    validate();
    return layer_a ? *layer_a : build_qft(n - 1);
}

ComplexMatrix build_witness_circuit(const CircuitConfig& cfg) {
    cfg.validate();
    const std::size_t p = cfg.n - 1;
    const std::size_t m = 2 * p;

    ComplexMatrix a = ComplexMatrix::identity(m);
    const ComplexMatrix q = cfg.layer_a_matrix();
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) a(i, j) = q(i, j);

    ComplexMatrix b = ComplexMatrix::identity(m);
    for (std::size_t k = 0; k < p; ++k) {
        const ComplexMatrix bs = build_beam_splitter(cfg.layer_b_reflectivities[k]);
        b(k, k) = bs(0, 0);
        b(k, p + k) = bs(0, 1);
        b(p + k, k) = bs(1, 0);
        b(p + k, p + k) = bs(1, 1);
    }

    ComplexMatrix u = b * a;  // layer A first, then layer B
    if (!check_unitary(u, kUnitarityTol))
        throw std::invalid_argument("build_witness_circuit: assembled circuit failed the unitarity check");
    return u;
}

std::pair<std::size_t, std::size_t> bs_output_modes(std::size_t n, std::size_t bs_index) {
    if (n < 2) throw std::invalid_argument("bs_output_modes: n must be >= 2");
    if (bs_index < 1 || bs_index > n - 1)
        throw std::invalid_argument("bs_output_modes: index " + std::to_string(bs_index) +
                                    " outside 1.." + std::to_string(n - 1));
    return {bs_index - 1, (n - 1) + bs_index - 1};
}

std::vector<std::size_t> witness_input_modes(std::size_t n) {
    if (n < 2) throw std::invalid_argument("witness_input_modes: n must be >= 2");
    std::vector<std::size_t> modes;
    modes.reserve(n);
    modes.push_back(0);
    for (std::size_t j = 1; j < n; ++j) modes.push_back((n - 1) + j - 1);
    return modes;
}

namespace {

int line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

[[noreturn]] void fail_key(const std::string& origin, const std::string& key,
                           const std::string& detail) {
    throw parse_error(origin, 0, "key \"" + key + "\": " + detail);
}

ComplexMatrix matrix_from_json(const nlohmann::json& rows, const std::string& origin) {
    if (!rows.is_array() || rows.empty())
        fail_key(origin, "layer_a", "expected \"ideal\" or a non-empty array of rows");
    const std::size_t nr = rows.size();
    const std::size_t nc = rows[0].is_array() ? rows[0].size() : 0;
    if (nc == 0) fail_key(origin, "layer_a", "rows must be non-empty arrays");
    ComplexMatrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || row.size() != nc)
            fail_key(origin, "layer_a", "row " + std::to_string(i) + " has " +
                                            std::to_string(row.size()) + " entries, expected " +
                                            std::to_string(nc));
        for (std::size_t j = 0; j < nc; ++j) {
            const auto& entry = row[j];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                !entry[1].is_number())
                fail_key(origin, "layer_a", "entry (" + std::to_string(i) + "," +
                                                std::to_string(j) + ") must be a [re, im] pair");
            m(i, j) = cplx(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return m;
}

}  // namespace

CircuitConfig parse_circuit_config(const std::string& text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(origin, line_of_byte(text, e.byte), e.what());
    }
    if (!doc.is_object()) throw parse_error(origin, 1, "top level must be a JSON object");

    for (const auto& item : doc.items())
        if (item.key() != "n" && item.key() != "layer_a" && item.key() != "layer_b_reflectivities")
            fail_key(origin, item.key(), "unknown key");

    CircuitConfig cfg;
    if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 0)
        fail_key(origin, "n", "required non-negative integer");
    cfg.n = doc["n"].get<std::size_t>();

    if (!doc.contains("layer_a"))
        fail_key(origin, "layer_a", "required (\"ideal\" or a matrix)");
    const auto& la = doc["layer_a"];
    if (la.is_string()) {
        if (la.get<std::string>() != "ideal")
            fail_key(origin, "layer_a", "the only string value allowed is \"ideal\"");
    } else {
        cfg.layer_a = matrix_from_json(la, origin);
    }

    if (!doc.contains("layer_b_reflectivities") || !doc["layer_b_reflectivities"].is_array())
        fail_key(origin, "layer_b_reflectivities", "required array of numbers");
    for (const auto& v : doc["layer_b_reflectivities"]) {
        if (!v.is_number()) fail_key(origin, "layer_b_reflectivities", "entries must be numbers");
        cfg.layer_b_reflectivities.push_back(v.get<double>());
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw parse_error(origin, 0, e.what());
    }
    return cfg;
}

CircuitConfig load_circuit_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_circuit_config(buf.str(), path);
}

}  // namespace witsim

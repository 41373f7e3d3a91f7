#include "witsim/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace witsim {

double ideal_threshold(std::size_t n) {
    if (n < 2) throw std::invalid_argument("ideal_threshold: n must be >= 2");
    const double nn = static_cast<double>(n);
    return (2.0 * nn - 3.0) / (2.0 * nn - 2.0);
}

double extremal_bunching(std::size_t n, std::size_t m) {
    if (n < 2) throw std::invalid_argument("extremal_bunching: n must be >= 2");
    if (m > n - 1)
        throw std::invalid_argument("extremal_bunching: m outside 0..n-1");
    return 1.0 - static_cast<double>(m) / (2.0 * (static_cast<double>(n) - 1.0));
}

C1Interval c1_bounds(double p_b, std::size_t n) {
    const double p_star = ideal_threshold(n);
    C1Interval iv;
    iv.raw_lower = (p_b - p_star) / (1.0 - p_star);
    iv.raw_upper = 2.0 * p_b - 1.0;
    iv.lower = std::clamp(iv.raw_lower, 0.0, 1.0);
    iv.upper = std::clamp(iv.raw_upper, 0.0, 1.0);
    iv.lower_clamped = iv.lower != iv.raw_lower;
    iv.upper_clamped = iv.upper != iv.raw_upper;
    return iv;
}

double tighter_c1_upper(const std::vector<double>& per_bs_hom) {
    if (per_bs_hom.empty())
        throw std::invalid_argument("tighter_c1_upper: need at least one beam splitter");
    double best = std::numeric_limits<double>::infinity();
    for (double p : per_bs_hom) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("tighter_c1_upper: probability outside [0, 1]");
        best = std::min(best, 2.0 * p - 1.0);
    }
    return std::clamp(best, 0.0, 1.0);
}

double bs_pair_bunching(double reflectivity, bool identical) {
    if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
        throw std::invalid_argument("bs_pair_bunching: reflectivity outside [0, 1]");
    const double rt = reflectivity * (1.0 - reflectivity);
    return identical ? 4.0 * rt : 2.0 * rt;
}

NonidealThreshold nonideal_threshold(const CircuitConfig& cfg) {
    cfg.validate();
    const std::size_t p = cfg.n - 1;
    const ComplexMatrix q = cfg.layer_a_matrix();

    // reference-column weights of layer A
    std::vector<double> w(p);
    for (std::size_t j = 0; j < p; ++j) w[j] = std::norm(q(j, 0));

    NonidealThreshold out;
    out.per_scenario.resize(p);
    double sum = 0.0;
    double worst = 0.0;
    for (std::size_t jp = 0; jp < p; ++jp) {
        double v = 0.0;
        for (std::size_t j = 0; j < p; ++j)
            v += w[j] * bs_pair_bunching(cfg.layer_b_reflectivities[j], j != jp);
        out.per_scenario[jp] = v;
        sum += v;
        worst = std::max(worst, v);
    }
    out.value = sum / static_cast<double>(p);
    out.worst_case = worst;
    return out;
}

Verdict verdict(double p_b, double threshold, double std_error) {
    Verdict v;
    v.violation = p_b - threshold;
    v.genuine = v.violation > 0.0;
    v.significance = std_error > 0.0 ? v.violation / std_error
                                     : std::numeric_limits<double>::quiet_NaN();
    return v;
}

}  // namespace witsim

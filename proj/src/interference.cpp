#include "witsim/interference.hpp"

#include "witsim/circuit.hpp"
#include "witsim/numfmt.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

namespace witsim {

namespace {
constexpr double kConditioningFloor = 1e-12;
constexpr double kWeightSumTol = 1e-12;
}  // namespace

ExtremalLabel ExtremalLabel::canonical(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("ExtremalLabel: empty label");
    std::map<char, char> rename;
    std::string out;
    out.reserve(s.size());
    char next = 'A';
    for (char ch : s) {
        if (ch < 'A' || ch > 'Z')
            throw std::invalid_argument("ExtremalLabel: labels use capital letters, got '" +
                                        std::string(1, ch) + "'");
        auto [it, inserted] = rename.try_emplace(ch, next);
        if (inserted) ++next;
        out.push_back(it->second);
    }
    return ExtremalLabel{std::move(out)};
}

bool ExtremalLabel::all_identical() const noexcept {
    return std::all_of(letters.begin(), letters.end(),
                       [&](char c) { return c == letters.front(); });
}

std::size_t ExtremalLabel::unlike_reference() const noexcept {
    std::size_t m = 0;
    for (std::size_t i = 1; i < letters.size(); ++i)
        if (letters[i] != letters[0]) ++m;
    return m;
}

std::vector<ExtremalLabel> enumerate_extremal_labels(std::size_t n) {
    if (n < 1 || n > 10)
        throw std::length_error("enumerate_extremal_labels: n outside 1..10");
    std::vector<ExtremalLabel> out;
    std::string cur(n, 'A');
    // restricted growth strings: letter at pos may exceed the running max by 1
    auto rec = [&](auto&& self, std::size_t pos, char maxv) -> void {
        if (pos == n) {
            out.push_back(ExtremalLabel{cur});
            return;
        }
        for (char c = 'A'; c <= maxv + 1; ++c) {
            cur[pos] = c;
            self(self, pos + 1, std::max(maxv, c));
        }
    };
    rec(rec, 1, 'A');
    return out;
}

void PhotonMixture::validate() const {
    if (weights.empty()) throw std::invalid_argument("PhotonMixture: no weights");
    const std::size_t n = weights.begin()->first.size();
    double sum = 0.0;
    for (const auto& [label, w] : weights) {
        if (label.size() != n)
            throw std::invalid_argument("PhotonMixture: labels of mixed lengths");
        if (!(w >= 0.0 && w <= 1.0))
            throw std::invalid_argument("PhotonMixture: weight outside [0, 1] for label " +
                                        label.letters);
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightSumTol)
        throw std::invalid_argument("PhotonMixture: weights sum to " + fmt_double(sum) +
                                    ", expected 1");
}

double PhotonMixture::c1() const {
    for (const auto& [label, w] : weights)
        if (label.all_identical()) return w;
    return 0.0;
}

bool is_bunching_pattern(const ModeOccupation& occ) {
    return std::any_of(occ.begin(), occ.end(), [](int c) { return c >= 2; });
}

namespace {

// Exact output distribution of one group of mutually identical photons, one
// photon per listed input mode. Patterns are filled in parallel and assembled
// in enumeration order, so the result does not depend on the thread count.
std::vector<std::pair<ModeOccupation, double>> group_distribution(
    const ComplexMatrix& u, const std::vector<std::size_t>& modes) {
    const std::size_t m = u.rows();
    ModeOccupation source(m, 0);
    for (std::size_t mode : modes) source[mode] += 1;

    const auto patterns = enumerate_occupations(m, static_cast<int>(modes.size()));
    std::vector<double> probs(patterns.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(patterns.size()); ++i)
        probs[static_cast<std::size_t>(i)] =
            output_probability(u, source, patterns[static_cast<std::size_t>(i)]);

    std::vector<std::pair<ModeOccupation, double>> out;
    out.reserve(patterns.size());
    for (std::size_t i = 0; i < patterns.size(); ++i) out.emplace_back(patterns[i], probs[i]);
    return out;
}

}  // namespace

OutputDistribution extremal_distribution(const ComplexMatrix& u,
                                         const std::vector<std::size_t>& input_modes,
                                         const ExtremalLabel& label) {
    if (!u.square())
        throw std::invalid_argument("extremal_distribution: circuit matrix is not square");
    const std::size_t m = u.rows();
    if (label.size() != input_modes.size())
        throw std::invalid_argument("extremal_distribution: label has " +
                                    std::to_string(label.size()) + " letters for " +
                                    std::to_string(input_modes.size()) + " photons");
    std::set<std::size_t> seen;
    for (std::size_t mode : input_modes) {
        if (mode >= m)
            throw std::invalid_argument("extremal_distribution: input mode out of range");
        if (!seen.insert(mode).second)
            throw std::invalid_argument("extremal_distribution: one photon per input mode");
    }

    std::map<char, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < input_modes.size(); ++i)
        groups[label.letters[i]].push_back(input_modes[i]);

    // distinguishable groups evolve independently; convolve their occupations
    std::map<ModeOccupation, double> acc;
    acc.emplace(ModeOccupation(m, 0), 1.0);
    for (const auto& [letter, modes] : groups) {
        const auto part = group_distribution(u, modes);
        std::map<ModeOccupation, double> next;
        for (const auto& [occ_a, pa] : acc)
            for (const auto& [occ_b, pb] : part) {
                ModeOccupation joint = occ_a;
                for (std::size_t i = 0; i < m; ++i) joint[i] += occ_b[i];
                next[std::move(joint)] += pa * pb;
            }
        acc = std::move(next);
    }

    OutputDistribution dist;
    dist.photon_count = static_cast<int>(input_modes.size());
    dist.mode_count = static_cast<int>(m);
    dist.probabilities = std::move(acc);
    return dist;
}

OutputDistribution mixture_distribution(const ComplexMatrix& u,
                                        const std::vector<std::size_t>& input_modes,
                                        const PhotonMixture& mix) {
    mix.validate();
    OutputDistribution dist;
    dist.photon_count = static_cast<int>(input_modes.size());
    dist.mode_count = static_cast<int>(u.rows());
    for (const auto& [label, w] : mix.weights) {
        const OutputDistribution part = extremal_distribution(u, input_modes, label);
        for (const auto& [occ, p] : part.probabilities) dist.probabilities[occ] += w * p;
    }
    return dist;
}

double bunching_probability(const OutputDistribution& dist) {
    double b = 0.0;
    for (const auto& [occ, p] : dist.probabilities)
        if (is_bunching_pattern(occ)) b += p;
    return b;
}

std::optional<double> conditional_bs_bunching(const OutputDistribution& dist,
                                              std::size_t bs_index) {
    if (dist.mode_count < 2 || dist.mode_count % 2 != 0)
        throw std::invalid_argument(
            "conditional_bs_bunching: distribution does not cover beam-splitter pairs");
    const std::size_t n = static_cast<std::size_t>(dist.mode_count) / 2 + 1;
    const auto [lo, hi] = bs_output_modes(n, bs_index);

    double p_two = 0.0;
    double p_same = 0.0;
    for (const auto& [occ, p] : dist.probabilities) {
        const int a = occ[lo];
        const int b = occ[hi];
        if (a + b != 2) continue;
        p_two += p;
        if (a == 2 || b == 2) p_same += p;
    }
    if (p_two < kConditioningFloor) return std::nullopt;
    return p_same / p_two;
}

double hom_bunching_from_overlap(double overlap) {
    if (!(overlap >= 0.0 && overlap <= 1.0))
        throw std::invalid_argument("hom_bunching_from_overlap: overlap outside [0, 1]");
    return 0.5 * (1.0 + overlap);
}

void write_distribution(std::ostream& os, const OutputDistribution& dist) {
    for (const auto& [occ, p] : dist.probabilities) {
        for (std::size_t i = 0; i < occ.size(); ++i) {
            if (i) os << ',';
            os << occ[i];
        }
        os << ' ' << fmt_double(p) << '\n';
    }
}

}  // namespace witsim

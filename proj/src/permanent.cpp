#include "witsim/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace witsim {

namespace {

// Kahan-compensated accumulator; the inclusion-exclusion sum cancels heavily,
// so plain summation would eat into the oracle-equivalence budget near the
// dimension cap.
struct CompensatedSum {
    cplx sum{0.0, 0.0};
    cplx comp{0.0, 0.0};

    void add(cplx v) {
        const cplx y = v - comp;
        const cplx t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

void require_square(const ComplexMatrix& m, const char* who) {
    if (!m.square()) throw std::invalid_argument(std::string(who) + ": matrix is not square");
}

// Signed Ryser terms over the Gray-coded subset indices g in [first, last),
// 1 <= first < last <= 2^k. Each range starts from freshly computed row sums,
// so chunked evaluation also resets accumulated update error.
cplx ryser_range(const ComplexMatrix& m, std::uint64_t first, std::uint64_t last) {
    const std::size_t k = m.rows();
    std::vector<cplx> rowsum(k, cplx{0.0, 0.0});
    std::uint64_t gray = first ^ (first >> 1);
    for (std::size_t j = 0; j < k; ++j)
        if ((gray >> j) & 1u)
            for (std::size_t i = 0; i < k; ++i) rowsum[i] += m(i, j);

    CompensatedSum acc;
    for (std::uint64_t g = first; g < last; ++g) {
        if (g != first) {
            const unsigned j = static_cast<unsigned>(std::countr_zero(g));
            gray = g ^ (g >> 1);
            if ((gray >> j) & 1u)
                for (std::size_t i = 0; i < k; ++i) rowsum[i] += m(i, j);
            else
                for (std::size_t i = 0; i < k; ++i) rowsum[i] -= m(i, j);
        }
        cplx prod{1.0, 0.0};
        for (std::size_t i = 0; i < k; ++i) prod *= rowsum[i];
        acc.add((std::popcount(gray) & 1u) ? -prod : prod);
    }
    return acc.sum;
}

}  // namespace

cplx permanent_naive(const ComplexMatrix& m) {
    require_square(m, "permanent_naive");
    const std::size_t k = m.rows();
    if (k > kNaivePermanentCap)
        throw std::length_error("permanent_naive: dimension " + std::to_string(k) +
                                " exceeds the cap of " + std::to_string(kNaivePermanentCap));
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    cplx sum{0.0, 0.0};
    do {
        cplx prod{1.0, 0.0};
        for (std::size_t i = 0; i < k; ++i) prod *= m(i, perm[i]);
        sum += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

cplx permanent_ryser_serial(const ComplexMatrix& m) {
    require_square(m, "permanent_ryser_serial");
    const std::size_t k = m.rows();
    if (k > kRyserPermanentCap)
        throw std::length_error("permanent_ryser_serial: dimension " + std::to_string(k) +
                                " exceeds the cap of " + std::to_string(kRyserPermanentCap));
    const cplx s = ryser_range(m, 1, std::uint64_t{1} << k);
    return (k & 1u) ? -s : s;
}

cplx permanent_ryser(const ComplexMatrix& m) {
    require_square(m, "permanent_ryser");
    const std::size_t k = m.rows();
    if (k > kRyserPermanentCap)
        throw std::length_error("permanent_ryser: dimension " + std::to_string(k) +
                                " exceeds the cap of " + std::to_string(kRyserPermanentCap));
    const std::uint64_t total = std::uint64_t{1} << k;

    // Below the crossover the chunk bookkeeping costs more than it buys.
    if (k < 12) {
        const cplx s = ryser_range(m, 1, total);
        return (k & 1u) ? -s : s;
    }

    // Fixed chunk grid, independent of the thread count: partial sums land in
    // per-chunk slots and are reduced in chunk order, so any OMP_NUM_THREADS
    // produces the same bits.
    constexpr std::int64_t chunks = 256;
    std::vector<cplx> partial(chunks);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
        const std::uint64_t first = 1 + (total - 1) * static_cast<std::uint64_t>(c) / chunks;
        const std::uint64_t last = 1 + (total - 1) * static_cast<std::uint64_t>(c + 1) / chunks;
        partial[static_cast<std::size_t>(c)] = ryser_range(m, first, last);
    }
    CompensatedSum acc;
    for (const cplx& v : partial) acc.add(v);
    return (k & 1u) ? -acc.sum : acc.sum;
}

namespace {

double factorial_d(int v) {
    double f = 1.0;
    for (int i = 2; i <= v; ++i) f *= i;
    return f;
}

void require_occupation(const ModeOccupation& occ, std::size_t modes, const char* who) {
    if (occ.size() != modes)
        throw std::invalid_argument(std::string(who) + ": occupation length " +
                                    std::to_string(occ.size()) + " != mode count " +
                                    std::to_string(modes));
    for (int c : occ)
        if (c < 0) throw std::invalid_argument(std::string(who) + ": negative occupancy");
}

}  // namespace

double output_probability(const ComplexMatrix& u, const ModeOccupation& input,
                          const ModeOccupation& output) {
    require_square(u, "output_probability");
    require_occupation(input, u.rows(), "output_probability");
    require_occupation(output, u.rows(), "output_probability");
    const int k_in = std::accumulate(input.begin(), input.end(), 0);
    const int k_out = std::accumulate(output.begin(), output.end(), 0);
    if (k_in != k_out)
        throw std::invalid_argument("output_probability: input carries " + std::to_string(k_in) +
                                    " photons but output " + std::to_string(k_out));
    if (k_in == 0) return 1.0;  // vacuum maps to vacuum

    std::vector<std::size_t> row_of;  // output mode per repeated row
    std::vector<std::size_t> col_of;  // input mode per repeated column
    row_of.reserve(static_cast<std::size_t>(k_in));
    col_of.reserve(static_cast<std::size_t>(k_in));
    for (std::size_t i = 0; i < output.size(); ++i)
        row_of.insert(row_of.end(), static_cast<std::size_t>(output[i]), i);
    for (std::size_t j = 0; j < input.size(); ++j)
        col_of.insert(col_of.end(), static_cast<std::size_t>(input[j]), j);

    ComplexMatrix sub(row_of.size(), col_of.size());
    for (std::size_t r = 0; r < row_of.size(); ++r)
        for (std::size_t c = 0; c < col_of.size(); ++c) sub(r, c) = u(row_of[r], col_of[c]);

    double denom = 1.0;
    for (int c : input) denom *= factorial_d(c);
    for (int c : output) denom *= factorial_d(c);
    return std::norm(permanent_ryser(sub)) / denom;
}

namespace {

void fill_occupations(ModeOccupation& cur, std::size_t pos, int left,
                      std::vector<ModeOccupation>& out) {
    if (pos + 1 == cur.size()) {
        cur[pos] = left;
        out.push_back(cur);
        return;
    }
    for (int c = 0; c <= left; ++c) {
        cur[pos] = c;
        fill_occupations(cur, pos + 1, left - c, out);
    }
}

}  // namespace

std::vector<ModeOccupation> enumerate_occupations(std::size_t modes, int photons) {
    if (modes == 0) throw std::invalid_argument("enumerate_occupations: need at least one mode");
    if (photons < 0) throw std::invalid_argument("enumerate_occupations: negative photon count");
    std::vector<ModeOccupation> out;
    ModeOccupation cur(modes, 0);
    fill_occupations(cur, 0, photons, out);
    return out;
}

}  // namespace witsim

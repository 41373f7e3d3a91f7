// Permanent kernel benchmark: chunked OpenMP Ryser vs the serial reference
// (and the naive oracle where it still fits). Prints CSV: dimension, best
// wall time per variant, and the relative deviation between the two Ryser
// paths on the same matrix.

#include "witsim/matrix.hpp"
#include "witsim/numfmt.hpp"
#include "witsim/permanent.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace witsim;

namespace {

ComplexMatrix random_complex(std::size_t k, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    ComplexMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) m(i, j) = cplx(unif(rng), unif(rng));
    return m;
}

template <typename F>
double best_of_ms(int trials, F&& f) {
    double best = 1e300;
    for (int t = 0; t < trials; ++t) {
        const auto start = std::chrono::steady_clock::now();
        f();
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        best = std::min(best, ms);
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t min_dim = 2;
    std::size_t max_dim = 18;
    int trials = 3;
    std::uint64_t seed = 1;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        const std::string value = argv[i + 1];
        if (flag == "--min")
            min_dim = std::stoul(value);
        else if (flag == "--max")
            max_dim = std::stoul(value);
        else if (flag == "--trials")
            trials = std::stoi(value);
        else if (flag == "--seed")
            seed = std::stoull(value);
        else {
            std::cerr << "unknown flag " << flag << '\n';
            return 2;
        }
    }
    if (max_dim > kRyserPermanentCap) max_dim = kRyserPermanentCap;

#ifdef _OPENMP
    std::cout << "# threads = " << omp_get_max_threads() << '\n';
#else
    std::cout << "# threads = 1 (no OpenMP)\n";
#endif
    std::cout << "dim,ryser_omp_ms,ryser_serial_ms,naive_ms,rel_diff\n";

    std::mt19937_64 rng(seed);
    for (std::size_t k = min_dim; k <= max_dim; ++k) {
        const ComplexMatrix m = random_complex(k, rng);
        cplx chunked{}, serial{};
        const double omp_ms = best_of_ms(trials, [&] { chunked = permanent_ryser(m); });
        const double serial_ms =
            best_of_ms(trials, [&] { serial = permanent_ryser_serial(m); });
        std::string naive_ms = "";
        if (k <= kNaivePermanentCap) {
            cplx naive{};
            naive_ms = fmt_double(best_of_ms(trials, [&] { naive = permanent_naive(m); }));
        }
        const double rel =
            std::abs(chunked - serial) / std::max(std::abs(serial), 1e-30);
        std::cout << k << ',' << fmt_double(omp_ms) << ',' << fmt_double(serial_ms) << ','
                  << naive_ms << ',' << fmt_double(rel) << '\n';
    }
    return 0;
}

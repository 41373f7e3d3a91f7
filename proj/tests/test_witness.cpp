#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "witsim/circuit.hpp"
#include "witsim/interference.hpp"
#include "witsim/witness.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace witsim;

TEST_CASE("ideal threshold") {
    CHECK(ideal_threshold(2) == doctest::Approx(0.5));
    CHECK(ideal_threshold(3) == 0.75);
    CHECK(ideal_threshold(11) == doctest::Approx(19.0 / 20.0).epsilon(1e-15));
    CHECK_THROWS_AS(ideal_threshold(1), std::invalid_argument);
}

TEST_CASE("extremal bunching closed form") {
    CHECK(extremal_bunching(3, 0) == 1.0);
    CHECK(extremal_bunching(3, 1) == 0.75);
    CHECK(extremal_bunching(3, 2) == 0.5);
    CHECK(extremal_bunching(5, 4) == doctest::Approx(0.5));
    CHECK_THROWS_AS(extremal_bunching(3, 3), std::invalid_argument);
    CHECK_THROWS_AS(extremal_bunching(1, 0), std::invalid_argument);
}

TEST_CASE("c1 bounds") {
    SUBCASE("lab reference point") {
        const C1Interval iv = c1_bounds(0.805, 3);
        CHECK(iv.lower == doctest::Approx(0.22).epsilon(1e-12));
        CHECK(iv.upper == doctest::Approx(0.61).epsilon(1e-12));
        CHECK_FALSE(iv.lower_clamped);
        CHECK_FALSE(iv.upper_clamped);
    }
    SUBCASE("perfect bunching forces all-identical") {
        const C1Interval iv = c1_bounds(1.0, 4);
        CHECK(iv.lower == 1.0);
        CHECK(iv.upper == 1.0);
    }
    SUBCASE("threshold point gives a vacuous lower bound") {
        const C1Interval iv = c1_bounds(0.75, 3);
        CHECK(iv.lower == 0.0);
        CHECK(iv.upper == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("below threshold clamps at zero but keeps the raw value") {
        const C1Interval iv = c1_bounds(0.5, 3);
        CHECK(iv.lower == 0.0);
        CHECK(iv.lower_clamped);
        CHECK(iv.raw_lower == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("lower hits 0 exactly at p* and upper hits 1 exactly at p_b = 1") {
        for (std::size_t n : {2u, 3u, 5u, 8u}) {
            CHECK(c1_bounds(ideal_threshold(n), n).raw_lower == 0.0);
            CHECK(c1_bounds(1.0, n).raw_upper == 1.0);
        }
    }
}

TEST_CASE("tighter c1 upper") {
    CHECK(tighter_c1_upper({0.78, 0.82}) == doctest::Approx(0.56).epsilon(1e-12));
    // 2p - 1 gives 0.56 from the rounded p = 0.78 and 0.57 from the
    // unrounded p = 0.785; the two readings differ by at most 0.01.
    CHECK(std::abs(tighter_c1_upper({0.78, 0.82}) - 0.57) <= 0.01 + 1e-12);
    CHECK(tighter_c1_upper({1.0, 1.0}) == 1.0);
    CHECK(tighter_c1_upper({0.5, 1.0}) == 0.0);
    CHECK(tighter_c1_upper({0.3}) == 0.0);  // clamped from below
    CHECK_THROWS_AS(tighter_c1_upper({}), std::invalid_argument);
    CHECK_THROWS_AS(tighter_c1_upper({0.5, 1.5}), std::invalid_argument);
}

TEST_CASE("pairwise beam-splitter bunching") {
    CHECK(bs_pair_bunching(0.5, true) == 1.0);
    CHECK(bs_pair_bunching(0.45, true) == doctest::Approx(0.99).epsilon(1e-12));
    CHECK(bs_pair_bunching(0.45, false) == doctest::Approx(0.495).epsilon(1e-12));
    CHECK_THROWS_AS(bs_pair_bunching(-0.2, true), std::invalid_argument);
}

namespace {

CircuitConfig lab3_config() {
    CircuitConfig cfg;
    cfg.n = 3;
    cfg.layer_a = build_beam_splitter(0.49);
    cfg.layer_b_reflectivities = {0.45, 0.45};
    return cfg;
}

}  // namespace

TEST_CASE("non-ideal threshold") {
    SUBCASE("lab n = 3 parameters give 0.7425") {
        const NonidealThreshold thr = nonideal_threshold(lab3_config());
        CHECK(thr.value == doctest::Approx(0.7425).epsilon(1e-12));
        REQUIRE(thr.per_scenario.size() == 2);
        CHECK(thr.per_scenario[0] == doctest::Approx(0.74745).epsilon(1e-12));
        CHECK(thr.per_scenario[1] == doctest::Approx(0.73755).epsilon(1e-12));
        CHECK(thr.worst_case == doctest::Approx(0.74745).epsilon(1e-12));
        CHECK(std::abs(thr.value - 0.742) < 5e-4);  // three-digit reading
    }
    SUBCASE("ideal parameters recover the ideal threshold") {
        CHECK(nonideal_threshold(CircuitConfig::ideal(3)).value ==
              doctest::Approx(0.75).epsilon(1e-12));
        CHECK(nonideal_threshold(CircuitConfig::ideal(4)).value ==
              doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    }
    SUBCASE("never exceeds the ideal threshold") {
        std::mt19937_64 rng(1234);
        std::uniform_real_distribution<double> refl(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 2 + static_cast<std::size_t>(trial % 4);
            CircuitConfig cfg = CircuitConfig::ideal(n);
            for (double& r : cfg.layer_b_reflectivities) r = refl(rng);
            const NonidealThreshold thr = nonideal_threshold(cfg);
            CHECK(thr.value <= ideal_threshold(n) + 1e-12);
            CHECK(thr.worst_case <= ideal_threshold(n) + 1e-12);
        }
    }
    SUBCASE("per-scenario values equal simulated single-distinguishable bunching") {
        const CircuitConfig cfg = lab3_config();
        const ComplexMatrix u = build_witness_circuit(cfg);
        const auto inputs = witness_input_modes(3);
        const NonidealThreshold thr = nonideal_threshold(cfg);
        // scenario 1: distinguishable photon at BS1 -> label ABA
        const double aba =
            bunching_probability(extremal_distribution(u, inputs, ExtremalLabel{"ABA"}));
        // scenario 2: distinguishable photon at BS2 -> label AAB
        const double aab =
            bunching_probability(extremal_distribution(u, inputs, ExtremalLabel{"AAB"}));
        CHECK(std::abs(thr.per_scenario[0] - aba) <= 1e-10);
        CHECK(std::abs(thr.per_scenario[1] - aab) <= 1e-10);
    }
    SUBCASE("general-n formula matches simulation on a non-ideal n = 4 circuit") {
        CircuitConfig cfg = CircuitConfig::ideal(4);
        cfg.layer_b_reflectivities = {0.41, 0.5, 0.57};
        const ComplexMatrix u = build_witness_circuit(cfg);
        const auto inputs = witness_input_modes(4);
        const NonidealThreshold thr = nonideal_threshold(cfg);
        const std::vector<const char*> one_distinguishable{"ABAA", "AABA", "AAAB"};
        for (std::size_t jp = 0; jp < 3; ++jp) {
            const double simulated = bunching_probability(
                extremal_distribution(u, inputs, ExtremalLabel{one_distinguishable[jp]}));
            CHECK(std::abs(thr.per_scenario[jp] - simulated) <= 1e-10);
        }
    }
}

TEST_CASE("verdicts") {
    const Verdict genuine = verdict(0.805, 0.75, 0.012);
    CHECK(genuine.genuine);
    CHECK(genuine.significance == doctest::Approx(4.5833).epsilon(1e-3));

    const Verdict below = verdict(0.66, 0.75, 0.01);
    CHECK_FALSE(below.genuine);

    const Verdict boundary = verdict(0.75, 0.75, 0.0);
    CHECK_FALSE(boundary.genuine);  // strict inequality
    CHECK(std::isnan(boundary.significance));
}

TEST_CASE("c1 interval always contains the true weight") {
    SUBCASE("every n = 3 extremal label") {
        const ComplexMatrix u = build_witness_circuit(CircuitConfig::ideal(3));
        const auto inputs = witness_input_modes(3);
        for (const ExtremalLabel& label : enumerate_extremal_labels(3)) {
            const double p_b =
                bunching_probability(extremal_distribution(u, inputs, label));
            const double true_c1 = label.all_identical() ? 1.0 : 0.0;
            const C1Interval iv = c1_bounds(p_b, 3);
            CHECK(iv.lower <= true_c1 + 1e-10);
            CHECK(iv.upper >= true_c1 - 1e-10);
        }
    }
    SUBCASE("500 random mixtures for n = 3 and n = 4") {
        std::mt19937_64 rng(8080);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int trial = 0; trial < 500; ++trial) {
            const std::size_t n = (trial % 2 == 0) ? 3 : 4;
            const auto labels = enumerate_extremal_labels(n);
            std::vector<double> w(labels.size());
            double sum = 0.0;
            for (double& v : w) {
                v = unif(rng);
                sum += v;
            }
            double p_b = 0.0;
            double true_c1 = 0.0;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                const double weight = w[i] / sum;
                p_b += weight * extremal_bunching(n, labels[i].unlike_reference());
                if (labels[i].all_identical()) true_c1 = weight;
            }
            const C1Interval iv = c1_bounds(p_b, n);
            CHECK(iv.lower <= true_c1 + 1e-10);
            CHECK(iv.upper >= true_c1 - 1e-10);
        }
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "witsim/circuit.hpp"
#include "witsim/errors.hpp"
#include "witsim/expdata.hpp"
#include "witsim/interference.hpp"
#include "witsim/witness.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

using namespace witsim;

namespace {

CircuitConfig lab3_config() {
    CircuitConfig cfg;
    cfg.n = 3;
    cfg.layer_a = build_beam_splitter(0.49);
    cfg.layer_b_reflectivities = {0.45, 0.45};
    return cfg;
}

EventTable table_from_text(const std::string& text, const std::string& origin = "test.counts") {
    std::istringstream in(text);
    return parse_counts(in, origin);
}

}  // namespace

TEST_CASE("count table parsing") {
    const std::string good = R"(# demo run
n = 3
modes = 4
label = demo
excluded_multipair = 62
2,1,0,0 137
2,1,0,0, 63
0,1,1,1 41
)";
    const EventTable table = table_from_text(good);
    CHECK(table.n == 3);
    CHECK(table.mode_count == 4);
    CHECK(table.run_label == "demo");
    CHECK(table.excluded_multipair == 62);
    CHECK(table.counts.at({2, 1, 0, 0}) == 200);  // duplicate rows accumulate
    CHECK(table.counts.at({0, 1, 1, 1}) == 41);
    CHECK(table.total() == 241);

    SUBCASE("pattern with the wrong photon number names the pattern") {
        const std::string bad = "n = 3\nmodes = 4\n1,1,1,1 5\n";
        try {
            table_from_text(bad);
            FAIL("expected invalid_argument");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("1,1,1,1") != std::string::npos);
        }
    }

    SUBCASE("malformed rows carry the line number") {
        const std::string bad = "n = 3\nmodes = 4\n2,1,0 137\n";
        try {
            table_from_text(bad);
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            CHECK(e.line() == 3);
        }
        CHECK_THROWS_AS(table_from_text("n = 3\nmodes = 4\n2,1,x,0 137\n"), parse_error);
        CHECK_THROWS_AS(table_from_text("n = 3\nmodes = 4\nbogus = 1\n2,1,0,0 1\n"),
                        parse_error);
        CHECK_THROWS_AS(table_from_text("2,1,0,0 137\nn = 3\nmodes = 4\n"), parse_error);
    }

    SUBCASE("empty input is rejected") {
        CHECK_THROWS_AS(table_from_text(""), std::invalid_argument);
        CHECK_THROWS_AS(table_from_text("n = 3\nmodes = 4\n"), std::invalid_argument);
    }
}

TEST_CASE("count table round-trips through save") {
    EventTable table;
    table.n = 3;
    table.mode_count = 4;
    table.run_label = "roundtrip";
    table.excluded_multipair = 17;
    table.counts[{2, 1, 0, 0}] = 5;
    table.counts[{0, 0, 3, 0}] = 2;

    std::ostringstream os;
    save_counts(os, table);
    const EventTable back = table_from_text(os.str());
    CHECK(back.n == table.n);
    CHECK(back.mode_count == table.mode_count);
    CHECK(back.run_label == table.run_label);
    CHECK(back.excluded_multipair == table.excluded_multipair);
    CHECK(back.counts == table.counts);
}

TEST_CASE("multi-pair corrected bunching probability") {
    const EstimatedProbability p = multipair_corrected_pb(1610, 390);
    CHECK(p.value == doctest::Approx(0.805).epsilon(1e-15));
    CHECK(p.std_error == doctest::Approx(std::sqrt(0.805 * 0.195 / 2000.0)).epsilon(1e-12));

    CHECK(multipair_corrected_pb(0, 100).value == 0.0);
    CHECK(multipair_corrected_pb(100, 0).value == 1.0);
    CHECK_THROWS_AS(multipair_corrected_pb(0, 0), std::domain_error);
    CHECK_THROWS_AS(multipair_corrected_pb(-1, 5), std::invalid_argument);
}

TEST_CASE("analyze reproduces exact simulation numbers") {
    const CircuitConfig cfg = CircuitConfig::ideal(3);
    const ComplexMatrix u = build_witness_circuit(cfg);
    const auto inputs = witness_input_modes(3);

    for (const char* letters : {"AAA", "AAB", "ABA", "ABB", "ABC"}) {
        const OutputDistribution dist =
            extremal_distribution(u, inputs, ExtremalLabel{letters});
        const EventTable table =
            table_from_distribution(dist, std::int64_t{1} << 40, letters);
        const WitnessReport rep = analyze(table, cfg);
        CHECK(std::abs(rep.p_b.value - bunching_probability(dist)) <= 1e-9);
        for (const BsConditional& cond : rep.per_bs) {
            const auto want = conditional_bs_bunching(dist, cond.bs_index);
            REQUIRE(cond.value.has_value() == want.has_value());
            if (want) CHECK(std::abs(cond.value->value - *want) <= 1e-9);
        }
        // report internal consistency
        const C1Interval iv = c1_bounds(rep.p_b.value, 3);
        CHECK(rep.c1.lower == iv.lower);
        CHECK(rep.c1.upper == iv.upper);
    }
}

TEST_CASE("analyze on the reference lab aggregates") {
    EventTable table;
    table.n = 3;
    table.mode_count = 4;
    table.run_label = "lab-reference";
    table.excluded_multipair = 62;  // ~3% of the raw stream
    table.counts[{2, 0, 1, 0}] = 1610;  // bunching
    table.counts[{1, 0, 1, 1}] = 390;   // no bunching

    const WitnessReport rep = analyze(table, lab3_config());
    CHECK(rep.p_b.value == doctest::Approx(0.805).epsilon(1e-15));
    CHECK(rep.p_b.std_error == doctest::Approx(0.0089).epsilon(0.05));
    CHECK(rep.c1.lower == doctest::Approx(0.22).epsilon(1e-12));
    CHECK(rep.c1.upper == doctest::Approx(0.61).epsilon(1e-12));
    CHECK(rep.ideal_thr == 0.75);
    CHECK(rep.nonideal_thr.value == doctest::Approx(0.7425).epsilon(1e-12));
    CHECK(rep.verdict_ideal.genuine);
    CHECK(rep.verdict_nonideal.genuine);
    CHECK(rep.excluded_fraction == doctest::Approx(62.0 / 2062.0).epsilon(1e-12));
    CHECK(std::abs(rep.excluded_fraction - 0.03) < 0.005);

    SUBCASE("spectrally broadened run stays below threshold") {
        EventTable below;
        below.n = 3;
        below.mode_count = 4;
        below.counts[{2, 0, 1, 0}] = 660;
        below.counts[{1, 0, 1, 1}] = 340;
        const WitnessReport r2 = analyze(below, lab3_config());
        CHECK(r2.p_b.value == doctest::Approx(0.66).epsilon(1e-15));
        CHECK_FALSE(r2.verdict_ideal.genuine);
        CHECK_FALSE(r2.verdict_nonideal.genuine);
    }
}

TEST_CASE("analyze marks empty conditioning sets undefined and continues") {
    EventTable table;
    table.n = 3;
    table.mode_count = 4;
    table.counts[{3, 0, 0, 0}] = 10;  // three photons at mode 0: neither pair holds exactly 2
    const WitnessReport rep = analyze(table, CircuitConfig::ideal(3));
    REQUIRE(rep.per_bs.size() == 2);
    CHECK_FALSE(rep.per_bs[0].value.has_value());
    CHECK_FALSE(rep.per_bs[1].value.has_value());
    CHECK_FALSE(rep.tighter_upper.has_value());
    CHECK(rep.p_b.value == 1.0);
}

TEST_CASE("analyze rejects mismatched table and config") {
    EventTable table;
    table.n = 3;
    table.mode_count = 4;
    table.counts[{2, 0, 1, 0}] = 1;
    CHECK_THROWS_AS(analyze(table, CircuitConfig::ideal(4)), std::invalid_argument);
}

TEST_CASE("tighter upper bound feeds off the per-BS conditionals") {
    // BS1 conditional 0.78 and BS2 conditional 0.82, in counts:
    // pair sums of exactly two photons with the third photon elsewhere
    EventTable table;
    table.n = 3;
    table.mode_count = 4;
    table.counts[{2, 1, 0, 0}] = 780;  // BS1 bunched
    table.counts[{1, 1, 1, 0}] = 220;  // BS1 split
    table.counts[{0, 2, 1, 0}] = 820;  // BS2 bunched (pair modes 1 and 3)

    // BS2 split needs one photon in mode 1 and one in mode 3
    table.counts[{1, 1, 0, 1}] = 180;

    const WitnessReport rep = analyze(table, CircuitConfig::ideal(3));
    REQUIRE(rep.per_bs.size() == 2);
    REQUIRE(rep.per_bs[0].value.has_value());
    REQUIRE(rep.per_bs[1].value.has_value());
    CHECK(rep.per_bs[0].value->value == doctest::Approx(0.78).epsilon(1e-12));
    CHECK(rep.per_bs[1].value->value == doctest::Approx(0.82).epsilon(1e-12));
    REQUIRE(rep.tighter_upper.has_value());
    CHECK(*rep.tighter_upper == doctest::Approx(0.56).epsilon(1e-12));
}

TEST_CASE("sampling is deterministic per seed and conserves events") {
    const ComplexMatrix u = build_witness_circuit(CircuitConfig::ideal(3));
    const OutputDistribution dist =
        extremal_distribution(u, witness_input_modes(3), ExtremalLabel{"ABC"});
    const EventTable a = sample_event_table(dist, 2000, 99);
    const EventTable b = sample_event_table(dist, 2000, 99);
    CHECK(a.counts == b.counts);
    CHECK(a.total() == 2000);
    const EventTable c = sample_event_table(dist, 2000, 100);
    CHECK(c.total() == 2000);

    CHECK_THROWS_AS(sample_event_table(dist, 0, 1), std::invalid_argument);
}

TEST_CASE("report serialization carries the schema tag") {
    EventTable table;
    table.n = 3;
    table.mode_count = 4;
    table.counts[{2, 0, 1, 0}] = 1610;
    table.counts[{1, 0, 1, 1}] = 390;
    const WitnessReport rep = analyze(table, CircuitConfig::ideal(3));

    const std::string json = report_to_json(rep);
    CHECK(json.find("witness-report/1") != std::string::npos);
    CHECK(json.find("\"p_b\"") != std::string::npos);

    std::ostringstream os;
    print_report(os, rep);
    CHECK(os.str().find("witness-report/1") != std::string::npos);
    CHECK(os.str().find("GENUINE") != std::string::npos);
}

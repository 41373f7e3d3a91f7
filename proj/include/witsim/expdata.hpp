#pragma once

#include "witsim/circuit.hpp"
#include "witsim/interference.hpp"
#include "witsim/witness.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace witsim {

inline constexpr const char* kReportSchema = "witness-report/1";
inline constexpr const char* kCountsSchema = "witness-counts/1";

// Raw event counts per output pattern, plus the tally of discarded
// multi-pair events.
struct EventTable {
    std::map<ModeOccupation, std::int64_t> counts;
    std::int64_t excluded_multipair = 0;
    std::string run_label;
    std::size_t n = 0;
    std::size_t mode_count = 0;

    std::int64_t total() const;
};

struct EstimatedProbability {
    double value = 0.0;
    double std_error = 0.0;
};

// Count-table text format: header lines "key = value" (n, modes, optional
// label and excluded_multipair), then one row per pattern as comma-separated
// occupations followed by the event count. '#' starts a comment.
EventTable parse_counts(std::istream& in, const std::string& origin);
EventTable load_counts(const std::string& path);
void save_counts(std::ostream& os, const EventTable& table);

// Multi-pair corrected bunching probability 1 - N_nb/(N_b + N_nb) with its
// binomial standard error. Throws std::domain_error when both counts are 0.
EstimatedProbability multipair_corrected_pb(std::int64_t n_b, std::int64_t n_nb);

struct BsConditional {
    std::size_t bs_index = 0;  // 1-based
    std::optional<EstimatedProbability> value;  // nullopt: conditioning set empty
};

struct WitnessReport {
    std::string run_label;
    std::size_t n = 0;
    std::size_t mode_count = 0;
    std::int64_t total_events = 0;
    std::int64_t bunching_events = 0;
    std::int64_t excluded_multipair = 0;
    double excluded_fraction = 0.0;
    EstimatedProbability p_b;
    std::vector<BsConditional> per_bs;
    double ideal_thr = 0.0;
    NonidealThreshold nonideal_thr;
    C1Interval c1;
    std::optional<double> tighter_upper;  // min over defined per-BS conditionals
    Verdict verdict_ideal;
    Verdict verdict_nonideal;
};

// Full analysis of a count table against a circuit description. A beam
// splitter with an empty conditioning set gets an undefined conditional and
// the analysis continues.
WitnessReport analyze(const EventTable& table, const CircuitConfig& cfg);

// Counts proportional to an exact distribution (rounded per pattern).
EventTable table_from_distribution(const OutputDistribution& dist, std::int64_t events,
                                   const std::string& run_label = "synthetic");

// Multinomial draw from a distribution, deterministic per seed.
EventTable sample_event_table(const OutputDistribution& dist, std::int64_t events,
                              std::uint64_t seed, const std::string& run_label = "sampled");

// Human-readable summary table.
void print_report(std::ostream& os, const WitnessReport& report);

// Machine-readable document, schema kReportSchema, serialized as JSON text.
std::string report_to_json(const WitnessReport& report, int indent = 2);

}  // namespace witsim

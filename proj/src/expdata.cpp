#include "witsim/expdata.hpp"

#include "witsim/errors.hpp"
#include "witsim/numfmt.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace witsim {

std::int64_t EventTable::total() const {
    std::int64_t t = 0;
    for (const auto& [occ, c] : counts) t += c;
    return t;
}

namespace {

std::string strip(const std::string& raw) {
    std::string s = raw;
    if (const auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string join_occupation(const ModeOccupation& occ) {
    std::string s;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(occ[i]);
    }
    return s;
}

std::int64_t parse_int(const std::string& token, const std::string& origin, int line) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(token, &used);
    } catch (const std::exception&) {
        throw parse_error(origin, line, "expected an integer, got \"" + token + "\"");
    }
    if (used != token.size())
        throw parse_error(origin, line, "expected an integer, got \"" + token + "\"");
    return v;
}

}  // namespace

EventTable parse_counts(std::istream& in, const std::string& origin) {
    EventTable table;
    bool have_n = false;
    bool have_modes = false;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip(raw);
        if (line.empty()) continue;

        if (const auto eq = line.find('='); eq != std::string::npos &&
                                            line.find_first_of("0123456789") != 0) {
            const std::string key = strip(line.substr(0, eq));
            const std::string value = strip(line.substr(eq + 1));
            if (key == "n") {
                table.n = static_cast<std::size_t>(parse_int(value, origin, lineno));
                have_n = true;
            } else if (key == "modes") {
                table.mode_count = static_cast<std::size_t>(parse_int(value, origin, lineno));
                have_modes = true;
            } else if (key == "label") {
                table.run_label = value;
            } else if (key == "excluded_multipair") {
                table.excluded_multipair = parse_int(value, origin, lineno);
                if (table.excluded_multipair < 0)
                    throw std::invalid_argument(origin + ": excluded_multipair must be >= 0");
            } else if (key == "schema") {
                // accepted and ignored; written by save_counts
            } else {
                throw parse_error(origin, lineno, "unknown header key \"" + key + "\"");
            }
            continue;
        }

        if (!have_n || !have_modes)
            throw parse_error(origin, lineno,
                              "count row before the n and modes header lines");

        std::string spaced = line;
        std::replace(spaced.begin(), spaced.end(), ',', ' ');
        std::istringstream row(spaced);
        std::vector<std::string> tokens;
        for (std::string tok; row >> tok;) tokens.push_back(tok);
        if (tokens.size() != table.mode_count + 1)
            throw parse_error(origin, lineno,
                              "expected " + std::to_string(table.mode_count) +
                                  " occupations and a count, got " +
                                  std::to_string(tokens.size()) + " fields");

        ModeOccupation occ(table.mode_count, 0);
        int photons = 0;
        for (std::size_t i = 0; i < table.mode_count; ++i) {
            const std::int64_t v = parse_int(tokens[i], origin, lineno);
            if (v < 0)
                throw std::invalid_argument(origin + ": negative occupancy in pattern " + line);
            occ[i] = static_cast<int>(v);
            photons += occ[i];
        }
        const std::int64_t count = parse_int(tokens.back(), origin, lineno);
        if (count < 0)
            throw std::invalid_argument(origin + ": negative count for pattern " +
                                        join_occupation(occ));
        if (photons != static_cast<int>(table.n))
            throw std::invalid_argument(origin + ": pattern " + join_occupation(occ) +
                                        " carries " + std::to_string(photons) +
                                        " photons, expected " + std::to_string(table.n));
        table.counts[occ] += count;
    }
    if (!have_n || !have_modes || table.counts.empty())
        throw std::invalid_argument(origin + ": no count rows found");
    return table;
}

EventTable load_counts(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open counts file: " + path);
    return parse_counts(in, path);
}

void save_counts(std::ostream& os, const EventTable& table) {
    os << "schema = " << kCountsSchema << '\n';
    os << "n = " << table.n << '\n';
    os << "modes = " << table.mode_count << '\n';
    if (!table.run_label.empty()) os << "label = " << table.run_label << '\n';
    os << "excluded_multipair = " << table.excluded_multipair << '\n';
    for (const auto& [occ, count] : table.counts)
        os << join_occupation(occ) << ' ' << count << '\n';
}

EstimatedProbability multipair_corrected_pb(std::int64_t n_b, std::int64_t n_nb) {
    if (n_b < 0 || n_nb < 0)
        throw std::invalid_argument("multipair_corrected_pb: negative counts");
    const std::int64_t total = n_b + n_nb;
    if (total == 0)
        throw std::domain_error("multipair_corrected_pb: no events to divide by");
    EstimatedProbability p;
    p.value = 1.0 - static_cast<double>(n_nb) / static_cast<double>(total);
    p.std_error = std::sqrt(p.value * (1.0 - p.value) / static_cast<double>(total));
    return p;
}

WitnessReport analyze(const EventTable& table, const CircuitConfig& cfg) {
    cfg.validate();
    if (table.n != cfg.n || table.mode_count != cfg.mode_count())
        throw std::invalid_argument("analyze: table (n=" + std::to_string(table.n) + ", modes=" +
                                    std::to_string(table.mode_count) +
                                    ") does not match the config (n=" + std::to_string(cfg.n) +
                                    ", modes=" + std::to_string(cfg.mode_count()) + ")");

    WitnessReport rep;
    rep.run_label = table.run_label;
    rep.n = table.n;
    rep.mode_count = table.mode_count;
    rep.excluded_multipair = table.excluded_multipair;

    std::int64_t n_b = 0;
    std::int64_t n_nb = 0;
    for (const auto& [occ, count] : table.counts)
        (is_bunching_pattern(occ) ? n_b : n_nb) += count;
    rep.total_events = n_b + n_nb;
    rep.bunching_events = n_b;
    const double raw = static_cast<double>(rep.total_events + table.excluded_multipair);
    rep.excluded_fraction = raw > 0.0 ? static_cast<double>(table.excluded_multipair) / raw : 0.0;

    rep.p_b = multipair_corrected_pb(n_b, n_nb);

    std::vector<double> defined_conditionals;
    for (std::size_t k = 1; k < cfg.n; ++k) {
        const auto [lo, hi] = bs_output_modes(cfg.n, k);
        std::int64_t same = 0;
        std::int64_t split = 0;
        for (const auto& [occ, count] : table.counts) {
            const int a = occ[lo];
            const int b = occ[hi];
            if (a + b != 2) continue;
            if (a == 2 || b == 2)
                same += count;
            else
                split += count;
        }
        BsConditional cond;
        cond.bs_index = k;
        if (same + split > 0) {
            cond.value = multipair_corrected_pb(same, split);
            defined_conditionals.push_back(cond.value->value);
        }
        rep.per_bs.push_back(cond);
    }

    rep.ideal_thr = ideal_threshold(cfg.n);
    rep.nonideal_thr = nonideal_threshold(cfg);
    rep.c1 = c1_bounds(rep.p_b.value, cfg.n);
    if (!defined_conditionals.empty())
        rep.tighter_upper = tighter_c1_upper(defined_conditionals);
    rep.verdict_ideal = verdict(rep.p_b.value, rep.ideal_thr, rep.p_b.std_error);
    rep.verdict_nonideal = verdict(rep.p_b.value, rep.nonideal_thr.value, rep.p_b.std_error);
    return rep;
}

EventTable table_from_distribution(const OutputDistribution& dist, std::int64_t events,
                                   const std::string& run_label) {
    if (events <= 0)
        throw std::invalid_argument("table_from_distribution: events must be > 0");
    EventTable table;
    table.n = static_cast<std::size_t>(dist.photon_count);
    table.mode_count = static_cast<std::size_t>(dist.mode_count);
    table.run_label = run_label;
    for (const auto& [occ, p] : dist.probabilities) {
        const std::int64_t c = std::llround(p * static_cast<double>(events));
        if (c > 0) table.counts[occ] = c;
    }
    if (table.counts.empty())
        throw std::invalid_argument("table_from_distribution: all rounded counts are zero");
    return table;
}

EventTable sample_event_table(const OutputDistribution& dist, std::int64_t events,
                              std::uint64_t seed, const std::string& run_label) {
    if (events <= 0)
        throw std::invalid_argument("sample_event_table: events must be > 0");
    std::vector<std::pair<const ModeOccupation*, double>> cdf;
    cdf.reserve(dist.probabilities.size());
    double cum = 0.0;
    for (const auto& [occ, p] : dist.probabilities) {
        cum += p;
        cdf.emplace_back(&occ, cum);
    }
    if (cdf.empty() || cum <= 0.0)
        throw std::invalid_argument("sample_event_table: empty distribution");

    EventTable table;
    table.n = static_cast<std::size_t>(dist.photon_count);
    table.mode_count = static_cast<std::size_t>(dist.mode_count);
    table.run_label = run_label;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, cum);
    for (std::int64_t e = 0; e < events; ++e) {
        const double r = unif(rng);
        auto it = std::lower_bound(cdf.begin(), cdf.end(), r,
                                   [](const auto& entry, double v) { return entry.second < v; });
        if (it == cdf.end()) --it;
        table.counts[*it->first] += 1;
    }
    return table;
}

namespace {

std::string fmt_sigma(const Verdict& v) {
    if (!std::isfinite(v.significance)) return "";
    std::ostringstream os;
    os.precision(1);
    os << std::fixed << " (" << v.significance << " sigma)";
    return os.str();
}

const char* verdict_name(const Verdict& v) { return v.genuine ? "GENUINE" : "NOT-WITNESSED"; }

}  // namespace

void print_report(std::ostream& os, const WitnessReport& rep) {
    os << "witness report [" << kReportSchema << "]\n";
    if (!rep.run_label.empty()) os << "run:    " << rep.run_label << '\n';
    os << "state:  n = " << rep.n << ", modes = " << rep.mode_count << '\n';
    os << "events: total = " << rep.total_events << ", bunching = " << rep.bunching_events
       << ", excluded multi-pair = " << rep.excluded_multipair << " ("
       << fmt_double(rep.excluded_fraction * 100.0) << "% of raw)\n";
    os << "p_b = " << fmt_double(rep.p_b.value) << " +/- " << fmt_double(rep.p_b.std_error)
       << '\n';
    os << "threshold ideal     p* = " << fmt_double(rep.ideal_thr) << '\n';
    os << "threshold non-ideal p~ = " << fmt_double(rep.nonideal_thr.value) << " (per scenario:";
    for (double v : rep.nonideal_thr.per_scenario) os << ' ' << fmt_double(v);
    os << "; max " << fmt_double(rep.nonideal_thr.worst_case) << ")\n";
    for (const BsConditional& cond : rep.per_bs) {
        os << "p_b^HOM(BS" << cond.bs_index << ") = ";
        if (cond.value)
            os << fmt_double(cond.value->value) << " +/- " << fmt_double(cond.value->std_error);
        else
            os << "undefined (no two-photon events at this pair)";
        os << '\n';
    }
    os << "c1 interval: [" << fmt_double(rep.c1.lower) << ", " << fmt_double(rep.c1.upper)
       << "]  (raw [" << fmt_double(rep.c1.raw_lower) << ", " << fmt_double(rep.c1.raw_upper)
       << "])\n";
    os << "tighter c1 upper (min over BS): "
       << (rep.tighter_upper ? fmt_double(*rep.tighter_upper) : std::string("undefined")) << '\n';
    os << "verdict vs ideal:     " << verdict_name(rep.verdict_ideal)
       << fmt_sigma(rep.verdict_ideal) << '\n';
    os << "verdict vs non-ideal: " << verdict_name(rep.verdict_nonideal)
       << fmt_sigma(rep.verdict_nonideal) << '\n';
}

std::string report_to_json(const WitnessReport& rep, int indent) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["run_label"] = rep.run_label;
    j["n"] = rep.n;
    j["modes"] = rep.mode_count;
    j["events"] = {{"total", rep.total_events},
                   {"bunching", rep.bunching_events},
                   {"excluded_multipair", rep.excluded_multipair},
                   {"excluded_fraction", rep.excluded_fraction}};
    j["p_b"] = {{"value", rep.p_b.value}, {"std_error", rep.p_b.std_error}};
    j["thresholds"] = {{"ideal", rep.ideal_thr},
                       {"nonideal", rep.nonideal_thr.value},
                       {"nonideal_per_scenario", rep.nonideal_thr.per_scenario},
                       {"nonideal_max", rep.nonideal_thr.worst_case}};
    nlohmann::json per_bs = nlohmann::json::array();
    for (const BsConditional& cond : rep.per_bs) {
        nlohmann::json c;
        c["bs"] = cond.bs_index;
        c["defined"] = cond.value.has_value();
        if (cond.value) {
            c["value"] = cond.value->value;
            c["std_error"] = cond.value->std_error;
        }
        per_bs.push_back(c);
    }
    j["per_bs"] = per_bs;
    j["c1"] = {{"lower", rep.c1.lower},
               {"upper", rep.c1.upper},
               {"raw_lower", rep.c1.raw_lower},
               {"raw_upper", rep.c1.raw_upper}};
    if (rep.tighter_upper) j["c1"]["tighter_upper"] = *rep.tighter_upper;
    auto verdict_json = [](const Verdict& v) {
        nlohmann::json out;
        out["genuine"] = v.genuine;
        out["verdict"] = v.genuine ? "GENUINE" : "NOT-WITNESSED";
        out["violation"] = v.violation;
        if (std::isfinite(v.significance)) out["significance"] = v.significance;
        return out;
    };
    j["verdict_ideal"] = verdict_json(rep.verdict_ideal);
    j["verdict_nonideal"] = verdict_json(rep.verdict_nonideal);
    return j.dump(indent);
}

}  // namespace witsim

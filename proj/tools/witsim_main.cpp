// witsim: construct indistinguishability-witness interferometers, simulate
// bunching statistics exactly, and turn bunching probabilities (simulated or
// measured) into certified bounds on the genuine n-photon component.

#include "witsim/circuit.hpp"
#include "witsim/errors.hpp"
#include "witsim/expdata.hpp"
#include "witsim/interference.hpp"
#include "witsim/numfmt.hpp"
#include "witsim/setmodel.hpp"
#include "witsim/witness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace witsim;

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

std::string verdict_line(const Verdict& v) {
    std::string s = v.genuine ? "GENUINE" : "NOT-WITNESSED";
    if (std::isfinite(v.significance)) {
        std::ostringstream os;
        os.precision(1);
        os << std::fixed << v.significance;
        s += " (" + os.str() + " sigma)";
    }
    return s;
}

PhotonMixture load_mixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mixture file: " + path);
    PhotonMixture mix;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream row(raw);
        std::string letters;
        if (!(row >> letters)) continue;
        double weight = 0.0;
        if (!(row >> weight))
            throw parse_error(path, lineno, "expected \"LABEL WEIGHT\"");
        mix.weights[ExtremalLabel::canonical(letters)] += weight;
    }
    mix.validate();
    return mix;
}

// ---- threshold ----------------------------------------------------------

struct ThresholdArgs {
    std::size_t n = 0;
    std::string config_path;
    std::string json_path;
};

int run_threshold(const ThresholdArgs& args) {
    const double p_star = ideal_threshold(args.n);
    std::cout << "p* (ideal, n=" << args.n << ") = " << fmt_double(p_star) << '\n';

    nlohmann::json doc;
    doc["n"] = args.n;
    doc["ideal"] = p_star;

    if (!args.config_path.empty()) {
        const CircuitConfig cfg = load_circuit_config(args.config_path);
        if (cfg.n != args.n)
            throw std::invalid_argument("--n " + std::to_string(args.n) +
                                        " disagrees with config n=" + std::to_string(cfg.n));
        const NonidealThreshold thr = nonideal_threshold(cfg);
        std::cout << "p~ (non-ideal, scenario average) = " << fmt_double(thr.value) << '\n';
        std::cout << "p~ per scenario:";
        for (double v : thr.per_scenario) std::cout << ' ' << fmt_double(v);
        std::cout << '\n';
        std::cout << "p~ (worst case) = " << fmt_double(thr.worst_case) << '\n';
        doc["nonideal"] = thr.value;
        doc["nonideal_per_scenario"] = thr.per_scenario;
        doc["nonideal_max"] = thr.worst_case;
    }
    if (!args.json_path.empty()) write_json_file(args.json_path, doc);
    return 0;
}

// ---- simulate -----------------------------------------------------------

struct SimulateArgs {
    std::string config_path;
    std::string label;
    std::string mixture_path;
    std::string out_path;
    std::string counts_out_path;
    std::string json_path;
    std::int64_t events = 1000000000000;  // 1e12: counts stay proportional to 1e-12
    std::int64_t sample = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool bs_order = false;
};

int run_simulate(const SimulateArgs& args) {
    const CircuitConfig cfg = load_circuit_config(args.config_path);
    const ComplexMatrix u = build_witness_circuit(cfg);
    const auto inputs = witness_input_modes(cfg.n);

    OutputDistribution dist;
    std::string state_desc;
    if (!args.label.empty()) {
        const ExtremalLabel label = ExtremalLabel::canonical(args.label);
        dist = extremal_distribution(u, inputs, label);
        state_desc = label.letters;
    } else {
        const PhotonMixture mix = load_mixture(args.mixture_path);
        dist = mixture_distribution(u, inputs, mix);
        state_desc = "mixture(" + args.mixture_path + ")";
    }

    const double p_b = bunching_probability(dist);
    std::cout << "circuit: n = " << cfg.n << ", modes = " << cfg.mode_count() << ", layer A "
              << (cfg.layer_a ? "explicit" : "ideal QFT") << '\n';
    std::cout << "state:   " << state_desc << '\n';
    std::cout << "p_b = " << fmt_double(p_b) << '\n';

    nlohmann::json doc;
    doc["n"] = cfg.n;
    doc["modes"] = cfg.mode_count();
    doc["state"] = state_desc;
    doc["p_b"] = p_b;
    nlohmann::json per_bs = nlohmann::json::array();
    for (std::size_t k = 1; k < cfg.n; ++k) {
        const auto cond = conditional_bs_bunching(dist, k);
        const auto [lo, hi] = bs_output_modes(cfg.n, k);
        std::cout << "p_b^HOM(BS" << k << ", modes " << lo + 1 << "&" << hi + 1 << ") = "
                  << (cond ? fmt_double(*cond) : std::string("undefined")) << '\n';
        nlohmann::json c;
        c["bs"] = k;
        c["defined"] = cond.has_value();
        if (cond) c["value"] = *cond;
        per_bs.push_back(c);
    }
    doc["per_bs"] = per_bs;

    // distribution table to stdout; optionally grouped by beam splitter
    // (BS_k shown as adjacent columns 2k-1, 2k) for histogram-style reading
    std::vector<std::size_t> order(cfg.mode_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (args.bs_order) {
        const std::size_t p = cfg.n - 1;
        for (std::size_t k = 0; k < p; ++k) {
            order[2 * k] = k;
            order[2 * k + 1] = p + k;
        }
    }
    std::cout << "distribution (" << (args.bs_order ? "BS-grouped mode order" : "mode order")
              << "):\n";
    for (const auto& [occ, prob] : dist.probabilities) {
        for (std::size_t i = 0; i < order.size(); ++i)
            std::cout << (i ? "," : "") << occ[order[i]];
        std::cout << ' ' << fmt_double(prob) << '\n';
    }

    if (!args.out_path.empty()) {
        std::ostringstream os;
        write_distribution(os, dist);
        write_text_file(args.out_path, os.str());
    }
    if (!args.counts_out_path.empty()) {
        EventTable table;
        if (args.sample > 0) {
            if (!args.seed_given)
                throw std::invalid_argument("--sample needs an explicit --seed");
            table = sample_event_table(dist, args.sample, args.seed,
                                       "sampled:" + state_desc);
        } else {
            table = table_from_distribution(dist, args.events, "exact:" + state_desc);
        }
        std::ostringstream os;
        save_counts(os, table);
        write_text_file(args.counts_out_path, os.str());
    }
    if (!args.json_path.empty()) write_json_file(args.json_path, doc);
    return 0;
}

// ---- bounds -------------------------------------------------------------

struct BoundsArgs {
    double p_b = 0.0;
    std::size_t n = 0;
    double std_error = 0.0;
    std::vector<double> per_bs;
    std::string json_path;
};

int run_bounds(const BoundsArgs& args) {
    if (!(args.p_b >= 0.0 && args.p_b <= 1.0))
        throw std::invalid_argument("--pb outside [0, 1]");
    const double p_star = ideal_threshold(args.n);
    const C1Interval iv = c1_bounds(args.p_b, args.n);
    const Verdict v = verdict(args.p_b, p_star, args.std_error);

    std::cout << "p_b = " << fmt_double(args.p_b);
    if (args.std_error > 0.0) std::cout << " +/- " << fmt_double(args.std_error);
    std::cout << '\n';
    std::cout << "p* (ideal, n=" << args.n << ") = " << fmt_double(p_star) << '\n';
    std::cout << "violation = " << fmt_double(v.violation) << '\n';
    std::cout << "c1 interval: [" << fmt_double(iv.lower) << ", " << fmt_double(iv.upper)
              << "]  (raw [" << fmt_double(iv.raw_lower) << ", " << fmt_double(iv.raw_upper)
              << "])\n";

    nlohmann::json doc;
    doc["n"] = args.n;
    doc["p_b"] = args.p_b;
    doc["std_error"] = args.std_error;
    doc["ideal"] = p_star;
    doc["c1"] = {{"lower", iv.lower},
                 {"upper", iv.upper},
                 {"raw_lower", iv.raw_lower},
                 {"raw_upper", iv.raw_upper}};
    if (!args.per_bs.empty()) {
        const double tighter = tighter_c1_upper(args.per_bs);
        std::cout << "tighter c1 upper (min over BS) = " << fmt_double(tighter) << '\n';
        doc["c1"]["tighter_upper"] = tighter;
    }
    std::cout << "verdict: " << verdict_line(v) << '\n';
    doc["verdict"] = v.genuine ? "GENUINE" : "NOT-WITNESSED";
    if (std::isfinite(v.significance)) doc["significance"] = v.significance;
    if (!args.json_path.empty()) write_json_file(args.json_path, doc);
    return 0;
}

// ---- sets-check ---------------------------------------------------------

struct SetsCheckArgs {
    std::size_t n = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string json_path;
};

int run_sets_check(const SetsCheckArgs& args) {
    if (args.n < 2) throw std::invalid_argument("--n must be >= 2");
    if (args.trials == 0) throw std::invalid_argument("--trials must be >= 1");

    std::mt19937_64 rng(args.seed);
    std::uniform_real_distribution<double> universe_dist(1.0, 4.0);
    std::uniform_int_distribution<std::size_t> fragments_dist(1, 8);

    std::size_t violations = 0;
    double worst_lower_slack = std::numeric_limits<double>::infinity();
    double worst_upper_slack = std::numeric_limits<double>::infinity();
    double worst_minpair_slack = std::numeric_limits<double>::infinity();

    for (std::size_t t = 0; t < args.trials; ++t) {
        std::vector<IntervalSet> sets;
        sets.reserve(args.n);
        for (std::size_t i = 0; i < args.n; ++i)
            sets.push_back(random_unit_set(universe_dist(rng), fragments_dist(rng), rng()));
        const double common = common_intersection(sets).measure();
        for (std::size_t r = 0; r < args.n; ++r) {
            const TheoremBounds b = theorem_bounds(sets, r);
            const double minpair = min_pairwise_upper(sets, r);
            worst_lower_slack = std::min(worst_lower_slack, common - b.lower);
            worst_upper_slack = std::min(worst_upper_slack, b.upper - common);
            worst_minpair_slack = std::min(worst_minpair_slack, minpair - common);
            if (common - b.lower < -1e-12 || b.upper - common < -1e-12 ||
                minpair - common < -1e-12)
                ++violations;
        }
    }

    std::cout << "trials = " << args.trials << ", n = " << args.n << ", seed = " << args.seed
              << '\n';
    std::cout << "violations = " << violations << '\n';
    std::cout << "worst slack: lower = " << fmt_double(worst_lower_slack)
              << ", upper = " << fmt_double(worst_upper_slack)
              << ", min-pairwise = " << fmt_double(worst_minpair_slack) << '\n';

    if (!args.json_path.empty()) {
        nlohmann::json doc;
        doc["n"] = args.n;
        doc["trials"] = args.trials;
        doc["seed"] = args.seed;
        doc["violations"] = violations;
        doc["worst_lower_slack"] = worst_lower_slack;
        doc["worst_upper_slack"] = worst_upper_slack;
        doc["worst_minpair_slack"] = worst_minpair_slack;
        write_json_file(args.json_path, doc);
    }
    if (violations > 0) {
        std::cerr << "error: theorem bounds violated\n";
        return 1;
    }
    return 0;
}

// ---- analyze ------------------------------------------------------------

struct AnalyzeArgs {
    std::string counts_path;
    std::string config_path;
    std::string json_path;
};

int run_analyze(const AnalyzeArgs& args) {
    const EventTable table = load_counts(args.counts_path);
    const CircuitConfig cfg = load_circuit_config(args.config_path);
    const WitnessReport rep = analyze(table, cfg);
    print_report(std::cout, rep);
    if (!args.json_path.empty()) write_text_file(args.json_path, report_to_json(rep) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-photon indistinguishability witness toolkit"};
    app.require_subcommand(1);

    ThresholdArgs thr_args;
    auto* thr = app.add_subcommand("threshold", "witness thresholds (ideal and non-ideal)");
    thr->add_option("--n", thr_args.n, "photon count")->required();
    thr->add_option("--config", thr_args.config_path, "circuit config for the non-ideal threshold");
    thr->add_option("--json", thr_args.json_path, "write a structured report to this path");

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "exact output distribution and bunching");
    sim->add_option("--config", sim_args.config_path, "circuit config file")->required();
    auto* label_opt = sim->add_option("--label", sim_args.label, "extremal label, e.g. AAB");
    auto* mix_opt = sim->add_option("--mixture", sim_args.mixture_path,
                                    "mixture file (LABEL WEIGHT per line)");
    label_opt->excludes(mix_opt);
    sim->add_option("--out", sim_args.out_path, "write the distribution table to this path");
    sim->add_option("--counts-out", sim_args.counts_out_path,
                    "write a count table (exact rounding unless --sample)");
    sim->add_option("--events", sim_args.events, "event total for --counts-out");
    sim->add_option("--sample", sim_args.sample, "draw this many events instead of rounding");
    sim->add_option("--seed", sim_args.seed, "sampling seed")
        ->each([&sim_args](const std::string&) { sim_args.seed_given = true; });
    sim->add_flag("--bs-order", sim_args.bs_order,
                  "display modes grouped per beam splitter (BS_k -> columns 2k-1, 2k)");
    sim->add_option("--json", sim_args.json_path, "write a structured report to this path");

    BoundsArgs bounds_args;
    auto* bnd = app.add_subcommand("bounds", "c1 interval and verdict from a bunching probability");
    bnd->add_option("--pb", bounds_args.p_b, "measured bunching probability")->required();
    bnd->add_option("--n", bounds_args.n, "photon count")->required();
    bnd->add_option("--stderr", bounds_args.std_error, "standard error of --pb");
    bnd->add_option("--per-bs", bounds_args.per_bs,
                    "per-beam-splitter HOM bunching probabilities, comma separated")
        ->delimiter(',');
    bnd->add_option("--json", bounds_args.json_path, "write a structured report to this path");

    SetsCheckArgs sets_args;
    auto* sets = app.add_subcommand("sets-check", "property run of the interval-set bounds");
    sets->add_option("--n", sets_args.n, "sets per family")->required();
    sets->add_option("--trials", sets_args.trials, "number of random families")->required();
    sets->add_option("--seed", sets_args.seed, "generator seed")->required();
    sets->add_option("--json", sets_args.json_path, "write a structured report to this path");

    AnalyzeArgs ana_args;
    auto* ana = app.add_subcommand("analyze", "full witness report from a count table");
    ana->add_option("--counts", ana_args.counts_path, "count table file")->required();
    ana->add_option("--config", ana_args.config_path, "circuit config file")->required();
    ana->add_option("--json", ana_args.json_path, "write the report as JSON to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (thr->parsed()) return run_threshold(thr_args);
        if (sim->parsed()) {
            if (sim_args.label.empty() == sim_args.mixture_path.empty())
                throw std::invalid_argument("simulate needs exactly one of --label / --mixture");
            return run_simulate(sim_args);
        }
        if (bnd->parsed()) return run_bounds(bounds_args);
        if (sets->parsed()) return run_sets_check(sets_args);
        if (ana->parsed()) return run_analyze(ana_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

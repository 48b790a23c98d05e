// command-line front end: exact solver curves, the rational lower bound,
// seeded simulation batches, regression analysis, and a repro-all recipe that
// regenerates every model table and figure input in one go

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "netlearn/bound.h"
#include "netlearn/exact.h"
#include "netlearn/io.h"
#include "netlearn/reference.h"
#include "netlearn/rng.h"
#include "netlearn/sim.h"
#include "netlearn/stats.h"

namespace fs = std::filesystem;
using namespace netlearn;

namespace {

int default_parallelism() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// relative output paths land under $NETLEARN_OUT when it is set
fs::path resolve_out_path(const std::string& given) {
    fs::path p(given);
    if (p.is_absolute()) return p;
    if (const char* base = std::getenv("NETLEARN_OUT"); base && *base) return fs::path(base) / p;
    return p;
}

class Output {
  public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;  // stdout
        fs::path p = resolve_out_path(path);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        file_.open(p, std::ios::binary);
        if (!file_) throw std::runtime_error("cannot open output file " + p.string());
    }
    bool to_stdout() const { return !file_.is_open(); }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

  private:
    std::ofstream file_;
};

void write_text_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + p.string());
    f << text;
}

EllVariant parse_ell(const std::string& s) {
    if (s == "printed-formula") return EllVariant::printed_formula;
    if (s == "truncated-mean") return EllVariant::truncated_mean;
    if (s == "exact-binary") return EllVariant::exact_binary;
    throw std::runtime_error("unknown ell variant '" + s + "'");
}

ChoiceVariant parse_choice(const std::string& s) {
    if (s == "printed-argument") return ChoiceVariant::printed_argument;
    if (s == "derived-argument") return ChoiceVariant::derived_argument;
    throw std::runtime_error("unknown choice variant '" + s + "'");
}

BehaviorKind parse_behavior(const std::string& s) {
    if (s == "naive") return BehaviorKind::naive;
    if (s == "autarkic") return BehaviorKind::autarkic;
    if (s == "mixed") return BehaviorKind::mixed;
    throw std::runtime_error("unknown behavior '" + s + "'");
}

SeFlavor parse_flavor(const std::string& s) {
    if (s == "hc1") return SeFlavor::hc1;
    if (s == "hc0") return SeFlavor::hc0;
    throw std::runtime_error("unknown se flavor '" + s + "'");
}

const std::vector<std::string> kEllChoices{"printed-formula", "truncated-mean", "exact-binary"};
const std::vector<std::string> kChoiceChoices{"printed-argument", "derived-argument"};

// ---- exact-naive ----

struct ExactNaiveOpts {
    std::vector<double> q{0.25, 0.75};
    int agents = 40;
    double mu = 1.0;
    double sigma = 2.0;
    std::string ell;     // empty: take the calibrated pair
    std::string choice;  // empty: take the calibrated pair
    std::string format = "csv";
    std::string out = "-";
    std::string calibration;  // optional JSON report path
};

void run_exact_naive(const ExactNaiveOpts& o) {
    const SignalParams sig{o.mu, o.sigma};
    sig.validate();

    // the calibrated defaults; the selection is only checkable against the
    // reference table in the environment the table was computed for
    EllVariant ell = EllVariant::truncated_mean;
    ChoiceVariant choice = ChoiceVariant::derived_argument;
    const bool reference_env = o.mu == reference::kMu && o.sigma == reference::kSigma;
    if (reference_env) {
        const CalibrationReport report = calibrate_variants(sig);
        if (o.ell.empty()) ell = report.ell_variant;
        if (o.choice.empty()) choice = report.choice_variant;
        std::cerr << "calibration: " << to_string(report.ell_variant) << " + "
                  << to_string(report.choice_variant) << " (max table deviation "
                  << report.fits.front().max_abs_dev << ")\n";
        if (!o.calibration.empty())
            write_text_file(resolve_out_path(o.calibration), calibration_report_json(report, sig));
    } else if (!o.calibration.empty()) {
        throw std::runtime_error(
            "the calibration report needs the reference environment (mu=1, sigma=2)");
    }
    if (!o.ell.empty()) ell = parse_ell(o.ell);
    if (!o.choice.empty()) choice = parse_choice(o.choice);

    std::vector<LabeledCurve> curves;
    for (double q : o.q)
        curves.push_back({q, "naive-exact",
                          naive_accuracy_curve(NetworkParams{q, o.agents}, sig, ell, choice)});

    Output out(o.out);
    if (o.format == "csv")
        write_curves_csv(out.stream(), curves);
    else
        out.stream() << curves_json(curves);
}

// ---- rational-bound ----

struct RationalBoundOpts {
    std::vector<double> q{0.75};
    int agents = 40;
    double mu = 1.0;
    double sigma = 2.0;
    std::string format = "csv";
    std::string out = "-";
};

void run_rational_bound(const RationalBoundOpts& o) {
    const SignalParams sig{o.mu, o.sigma};
    sig.validate();
    std::vector<LabeledCurve> curves;
    for (double q : o.q)
        curves.push_back(
            {q, "rational-bound", constrained_accuracy_curve(NetworkParams{q, o.agents}, sig)});
    Output out(o.out);
    if (o.format == "csv")
        write_curves_csv(out.stream(), curves);
    else
        out.stream() << curves_json(curves);
}

// ---- simulate ----

struct SimulateOpts {
    double q = 0.25;
    int agents = 40;
    double mu = 1.0;
    double sigma = 2.0;
    std::uint64_t trials = 130;
    std::uint64_t seed = 1;
    std::string behavior = "naive";
    double naive_share = 1.0;
    double epsilon = 0.0;
    std::string topology = "sequential";
    std::string ell = "truncated-mean";
    int parallelism = default_parallelism();
    std::string out = "-";
    std::string summary;  // default: derived from --out, or stderr when streaming to stdout
};

void run_simulate(const SimulateOpts& o) {
    TrialConfig cfg;
    cfg.signal = SignalParams{o.mu, o.sigma};
    if (o.topology == "independent")
        cfg.topology = IndependentObservedTopology{};
    else
        cfg.topology = SequentialTopology{NetworkParams{o.q, o.agents}};
    cfg.behavior = BehaviorModel{parse_behavior(o.behavior), o.naive_share};
    cfg.epsilon = o.epsilon;
    cfg.ell_variant = parse_ell(o.ell);

    Output out(o.out);
    write_record_csv_header(out.stream());
    const BatchSummary sum =
        run_batch(cfg, o.trials, o.seed, o.parallelism,
                  [&](const TrialRecord& tr) { write_record_csv_rows(out.stream(), tr); });

    BatchMeta meta;
    meta.topology = o.topology;
    meta.behavior = o.behavior;
    meta.q = o.topology == "independent" ? 0.0 : o.q;
    meta.epsilon = o.epsilon;
    meta.master_seed = o.seed;
    meta.signal = cfg.signal;
    const std::string sj = batch_summary_json(sum, meta);

    if (!o.summary.empty()) {
        write_text_file(resolve_out_path(o.summary), sj);
    } else if (!out.to_stdout()) {
        fs::path p = resolve_out_path(o.out);
        p.replace_extension(".summary.json");
        write_text_file(p, sj);
        std::cerr << "summary written to " << p.string() << "\n";
    } else {
        std::cerr << sj;
    }
}

// ---- analyze ----

struct AnalyzeOpts {
    std::string in;
    std::string out = "-";
    std::string tables;
    std::string flavor = "hc1";
    int bins = 20;
    std::string report;  // "figure1"
    std::string svg;
};

std::string sweep_text(const std::vector<SweepEntry>& sweep) {
    std::ostringstream os;
    os << "Robustness: density slope with the outcome over the last m positions\n";
    for (const SweepEntry& e : sweep) {
        char line[128];
        const double p = e.fit.pval[1];
        const char* stars = p < 0.01 ? "***" : p < 0.05 ? "**" : p < 0.1 ? "*" : "";
        std::snprintf(line, sizeof line, "  m=%-2d  %9.4f  (%.4f) %s\n", e.m, e.fit.coef[1],
                      e.fit.se[1], stars);
        os << line;
    }
    return os.str();
}

void run_analyze(const AnalyzeOpts& o) {
    if (o.report == "figure1") {
        const SignalParams sig;
        const CalibrationReport report = calibrate_variants(sig);
        std::vector<LabeledCurve> curves;
        for (double q : {reference::kQSparse, reference::kQDense})
            curves.push_back({q, "naive-exact",
                              naive_accuracy_curve(NetworkParams{q, reference::kAgentsPerTrial},
                                                   sig, report.ell_variant, report.choice_variant)});
        Output out(o.out);
        write_curves_csv(out.stream(), curves);
        if (!o.svg.empty())
            write_text_file(resolve_out_path(o.svg),
                            figure_svg(curves, "Accuracy of naive agents on random networks"));
        return;
    }
    if (!o.report.empty()) throw std::runtime_error("unknown report '" + o.report + "'");
    if (o.in.empty())
        throw std::runtime_error("analyze needs --in <records.csv> (or --report figure1)");

    std::ifstream f(o.in, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open input file " + o.in);
    const std::vector<TrialRecord> records = read_records_csv(f);
    const std::vector<TrialOutcome> outcomes = trial_outcomes(records);
    const SeFlavor flavor = parse_flavor(o.flavor);

    bool independent = false;
    for (const TrialOutcome& t : outcomes)
        if (t.independent_topology) independent = true;

    std::string json, tables;
    if (independent) {
        const OlsResult fit = independent_experiment_regression(outcomes, flavor);
        double ms = 0.0, md = 0.0;
        for (const TrialOutcome& t : outcomes) {
            ms += t.y_sparse;
            md += t.y_dense;
        }
        ms /= static_cast<double>(outcomes.size());
        md /= static_cast<double>(outcomes.size());
        json = independent_analysis_json(fit, ms, md, outcomes.size());
        tables = table_text(fit, "Evaluator accuracy with uncorrelated observations");
    } else {
        const OlsResult density = density_regression(outcomes, flavor);
        const InteractionRegression inter = misleading_interaction_regression(outcomes, flavor);
        const GainFromSocialLearning gain = gain_from_social_learning(outcomes);
        const AgainstSignalStats against = against_signal_stats(records);
        WindowUncertainty windows;  // stays empty when trials are shorter than 40 agents
        try {
            windows = window_uncertainty(records);
        } catch (const std::invalid_argument&) {
            std::cerr << "note: window uncertainty skipped (needs 40-agent sequential trials)\n";
        }
        const FractionCorrectHistogram hist = fraction_correct_histogram(records, o.bins);
        const std::vector<SweepEntry> sweep = robustness_sweep(records, 4, 12, flavor);
        json = sequential_analysis_json(density, inter, gain, against, windows, hist, sweep);
        tables = table_text(density, "Last-8 accuracy on network density") + "\n" +
                 table_text(inter.fit, "Misleading early signals and network density") + "\n" +
                 sweep_text(sweep);
    }

    Output out(o.out);
    out.stream() << json;
    if (!o.tables.empty())
        write_text_file(resolve_out_path(o.tables), tables);
    else if (!out.to_stdout())
        std::cout << tables;
    else
        std::cerr << tables;
}

// ---- repro-all ----

struct ReproOpts {
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    int parallelism = default_parallelism();
    std::string out;  // directory; default: timestamped under $NETLEARN_OUT or .
    std::string flavor = "hc1";
    int bins = 20;
};

void run_repro_all(const ReproOpts& o) {
    fs::path dir;
    if (o.out.empty()) {
        char stamp[32];
        const std::time_t now = std::time(nullptr);
        std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", std::gmtime(&now));
        dir = resolve_out_path(std::string("netlearn-repro-") + stamp);
    } else {
        dir = resolve_out_path(o.out);
    }
    fs::create_directories(dir);
    const SeFlavor flavor = parse_flavor(o.flavor);

    std::vector<std::string> files;
    auto emit = [&](const std::string& name, const std::string& text) {
        write_text_file(dir / name, text);
        files.push_back(name);
        std::cerr << "wrote " << (dir / name).string() << "\n";
    };

    const SignalParams sig;  // the reference environment
    const CalibrationReport report = calibrate_variants(sig);
    emit("calibration.json", calibration_report_json(report, sig));

    std::vector<LabeledCurve> fig;
    for (double q : {reference::kQSparse, reference::kQDense})
        fig.push_back({q, "naive-exact",
                       naive_accuracy_curve(NetworkParams{q, reference::kAgentsPerTrial}, sig,
                                            report.ell_variant, report.choice_variant)});
    {
        std::ostringstream cs;
        write_curves_csv(cs, fig);
        emit("figure1.csv", cs.str());
    }
    emit("figure1.svg", figure_svg(fig, "Accuracy of naive agents on random networks"));

    {
        std::vector<LabeledCurve> bound{
            {reference::kQDense, "rational-bound",
             constrained_accuracy_curve(
                 NetworkParams{reference::kQDense, reference::kAgentsPerTrial}, sig)}};
        std::ostringstream cs;
        write_curves_csv(cs, bound);
        emit("rational_bound.csv", cs.str());
    }

    // simulated counterparts of the behavioral analyses, naive behavior
    auto run_arm = [&](const Topology& topology, double q_label, std::uint64_t key,
                       const std::string& rec_name, const std::string& sum_name) {
        TrialConfig cfg;
        cfg.topology = topology;
        cfg.signal = sig;
        cfg.ell_variant = report.ell_variant;
        std::vector<TrialRecord> records;
        records.reserve(o.trials);
        std::ostringstream cs;
        write_record_csv_header(cs);
        const std::uint64_t arm_seed = derive_seed(o.seed, key);
        const BatchSummary sum = run_batch(cfg, o.trials, arm_seed, o.parallelism,
                                           [&](const TrialRecord& tr) {
                                               write_record_csv_rows(cs, tr);
                                               records.push_back(tr);
                                           });
        emit(rec_name, cs.str());
        BatchMeta meta;
        meta.topology =
            std::holds_alternative<SequentialTopology>(topology) ? "sequential" : "independent";
        meta.behavior = "naive";
        meta.q = q_label;
        meta.master_seed = arm_seed;
        meta.signal = sig;
        emit(sum_name, batch_summary_json(sum, meta));
        return records;
    };

    std::vector<TrialRecord> both =
        run_arm(SequentialTopology{NetworkParams{reference::kQSparse, reference::kAgentsPerTrial}},
                reference::kQSparse, 101, "records_sparse.csv", "summary_sparse.json");
    {
        std::vector<TrialRecord> dense = run_arm(
            SequentialTopology{NetworkParams{reference::kQDense, reference::kAgentsPerTrial}},
            reference::kQDense, 102, "records_dense.csv", "summary_dense.json");
        both.insert(both.end(), dense.begin(), dense.end());
    }

    const std::vector<TrialOutcome> outcomes = trial_outcomes(both);
    const OlsResult density = density_regression(outcomes, flavor);
    const InteractionRegression inter = misleading_interaction_regression(outcomes, flavor);
    const GainFromSocialLearning gain = gain_from_social_learning(outcomes);
    const AgainstSignalStats against = against_signal_stats(both);
    const WindowUncertainty windows = window_uncertainty(both);
    const FractionCorrectHistogram hist = fraction_correct_histogram(both, o.bins);
    const std::vector<SweepEntry> sweep = robustness_sweep(both, 4, 12, flavor);
    emit("sequential_analysis.json",
         sequential_analysis_json(density, inter, gain, against, windows, hist, sweep));

    const std::vector<TrialRecord> irecords =
        run_arm(IndependentObservedTopology{}, 0.0, 103, "records_independent.csv",
                "summary_independent.json");
    const std::vector<TrialOutcome> ioutcomes = trial_outcomes(irecords);
    const OlsResult ifit = independent_experiment_regression(ioutcomes, flavor);
    double ms = 0.0, md = 0.0;
    for (const TrialOutcome& t : ioutcomes) {
        ms += t.y_sparse;
        md += t.y_dense;
    }
    ms /= static_cast<double>(ioutcomes.size());
    md /= static_cast<double>(ioutcomes.size());
    emit("independent_analysis.json", independent_analysis_json(ifit, ms, md, ioutcomes.size()));

    emit("tables.txt", table_text(density, "Last-8 accuracy on network density") + "\n" +
                           table_text(inter.fit, "Misleading early signals and network density") +
                           "\n" + sweep_text(sweep) + "\n" +
                           table_text(ifit, "Evaluator accuracy with uncorrelated observations"));

    emit("manifest.json", manifest_json(o.seed, files));
    std::cout << dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sequential social learning on random networks: solvers, simulator, analysis"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read option defaults from a file (flags win)");

    ExactNaiveOpts en;
    CLI::App* cen = app.add_subcommand(
        "exact-naive", "per-position accuracy of naive agents from the count recursion");
    cen->add_option("--q", en.q, "network density (repeatable)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cen->add_option("--agents", en.agents, "agents per trial")->capture_default_str();
    cen->add_option("--mu", en.mu, "signal mean magnitude")->capture_default_str();
    cen->add_option("--sigma", en.sigma, "signal standard deviation")->capture_default_str();
    cen->add_option("--ell-variant", en.ell, "social log-likelihood weight formula")
        ->check(CLI::IsMember(kEllChoices));
    cen->add_option("--choice-variant", en.choice, "action-probability argument formula")
        ->check(CLI::IsMember(kChoiceChoices));
    cen->add_option("--format", en.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cen->add_option("--out", en.out, "output path ('-' for stdout)")->capture_default_str();
    cen->add_option("--calibration", en.calibration, "also write the calibration report (JSON)");

    RationalBoundOpts rb;
    CLI::App* crb = app.add_subcommand(
        "rational-bound", "lower bound on rational-agent accuracy (one-neighbor rule)");
    crb->add_option("--q", rb.q, "network density (repeatable)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    crb->add_option("--agents", rb.agents, "agents per trial")->capture_default_str();
    crb->add_option("--mu", rb.mu, "signal mean magnitude")->capture_default_str();
    crb->add_option("--sigma", rb.sigma, "signal standard deviation")->capture_default_str();
    crb->add_option("--format", rb.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    crb->add_option("--out", rb.out, "output path ('-' for stdout)")->capture_default_str();

    SimulateOpts sm;
    CLI::App* csm = app.add_subcommand("simulate", "seeded Monte Carlo trials, records to CSV");
    csm->add_option("--q", sm.q, "network density (sequential topology)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    csm->add_option("--agents", sm.agents, "agents per trial (sequential topology)")
        ->capture_default_str();
    csm->add_option("--mu", sm.mu, "signal mean magnitude")->capture_default_str();
    csm->add_option("--sigma", sm.sigma, "signal standard deviation")->capture_default_str();
    csm->add_option("--trials", sm.trials, "number of trials")->capture_default_str();
    csm->add_option("--seed", sm.seed, "master seed")->capture_default_str();
    csm->add_option("--behavior", sm.behavior, "naive, autarkic, or mixed")
        ->check(CLI::IsMember({"naive", "autarkic", "mixed"}))
        ->capture_default_str();
    csm->add_option("--naive-share", sm.naive_share, "P(naive agent) under mixed behavior")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    csm->add_option("--epsilon", sm.epsilon, "uniform action-flip probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    csm->add_option("--topology", sm.topology,
                    "sequential, or independent (32 unlinked agents + 8 sparse + 8 dense evaluators)")
        ->check(CLI::IsMember({"sequential", "independent"}))
        ->capture_default_str();
    csm->add_option("--ell-variant", sm.ell, "social weight formula for naive deciders")
        ->check(CLI::IsMember(kEllChoices))
        ->capture_default_str();
    csm->add_option("--parallelism", sm.parallelism, "worker threads (records do not depend on it)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    csm->add_option("--out", sm.out, "records CSV path ('-' for stdout)")->capture_default_str();
    csm->add_option("--summary", sm.summary,
                    "batch summary JSON path (default: next to --out, or stderr)");

    AnalyzeOpts an;
    CLI::App* can = app.add_subcommand("analyze", "regressions and diagnostics over a records CSV");
    can->add_option("--in", an.in, "records CSV (simulated or external)");
    can->add_option("--out", an.out, "analysis JSON path ('-' for stdout)")->capture_default_str();
    can->add_option("--tables", an.tables, "text tables path (printed to the console when omitted)");
    can->add_option("--se-flavor", an.flavor, "robust-SE flavor")
        ->check(CLI::IsMember({"hc1", "hc0"}))
        ->capture_default_str();
    can->add_option("--bins", an.bins, "histogram bins")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    can->add_option("--report", an.report, "named report instead of analysis: figure1");
    can->add_option("--svg", an.svg, "also render the report as SVG (with --report figure1)");

    ReproOpts ra;
    CLI::App* cra = app.add_subcommand(
        "repro-all", "regenerate every model table and figure input into one directory");
    cra->add_option("--trials", ra.trials, "trials per simulated arm")->capture_default_str();
    cra->add_option("--seed", ra.seed, "master seed (arm seeds derive from it)")
        ->capture_default_str();
    cra->add_option("--parallelism", ra.parallelism, "worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cra->add_option("--out", ra.out,
                    "output directory (default: timestamped under $NETLEARN_OUT or .)");
    cra->add_option("--se-flavor", ra.flavor, "robust-SE flavor")
        ->check(CLI::IsMember({"hc1", "hc0"}))
        ->capture_default_str();
    cra->add_option("--bins", ra.bins, "histogram bins")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
        if (cen->parsed()) run_exact_naive(en);
        if (crb->parsed()) run_rational_bound(rb);
        if (csm->parsed()) run_simulate(sm);
        if (can->parsed()) run_analyze(an);
        if (cra->parsed()) run_repro_all(ra);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

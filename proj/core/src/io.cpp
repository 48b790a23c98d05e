#include "netlearn/io.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "netlearn/reference.h"

namespace netlearn {

using nlohmann::json;

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_record_csv_header(std::ostream& os) { os << kRecordCsvHeader << '\n'; }

void write_record_csv_rows(std::ostream& os, const TrialRecord& trial) {
    for (const AgentRow& a : trial.agents) {
        os << trial.trial_id << ',' << a.position << ',' << format_double(a.q) << ','
           << state_char(trial.state) << ',' << format_double(a.signal) << ',' << a.obs_left << ','
           << a.obs_right << ',' << state_char(a.action) << ',' << (a.correct ? 1 : 0) << '\n';
    }
}

void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
    write_record_csv_header(os);
    for (const TrialRecord& tr : records) write_record_csv_rows(os, tr);
}

namespace {

[[noreturn]] void bad_line(std::size_t lineno, const std::string& what) {
    std::ostringstream msg;
    msg << "records csv line " << lineno << ": " << what;
    throw std::runtime_error(msg.str());
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double(const std::string& f, std::size_t lineno, const char* what) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(f.c_str(), &end);
    if (f.empty() || end != f.c_str() + f.size() || errno == ERANGE)
        bad_line(lineno, std::string("bad ") + what + " '" + f + "'");
    return v;
}

long long parse_int(const std::string& f, std::size_t lineno, const char* what) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(f.c_str(), &end, 10);
    if (f.empty() || end != f.c_str() + f.size() || errno == ERANGE)
        bad_line(lineno, std::string("bad ") + what + " '" + f + "'");
    return v;
}

State parse_state(const std::string& f, std::size_t lineno, const char* what) {
    if (f == "L") return State::L;
    if (f == "R") return State::R;
    bad_line(lineno, std::string("bad ") + what + " '" + f + "' (want L or R)");
}

}  // namespace

std::vector<TrialRecord> read_records_csv(std::istream& is) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(is, line)) throw std::runtime_error("records csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kRecordCsvHeader)
        bad_line(1, std::string("header must be exactly '") + kRecordCsvHeader + "'");

    std::vector<TrialRecord> records;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const std::vector<std::string> f = split_fields(line);
        if (f.size() != 9) bad_line(lineno, "expected 9 fields, got " + std::to_string(f.size()));

        const long long trial_id = parse_int(f[0], lineno, "trial_id");
        if (trial_id < 0) bad_line(lineno, "negative trial_id");
        const long long position = parse_int(f[1], lineno, "position");
        if (position < 1) bad_line(lineno, "position must be >= 1");
        const double q = parse_double(f[2], lineno, "q");
        const State state = parse_state(f[3], lineno, "state");
        const double signal = parse_double(f[4], lineno, "signal");
        const long long obs_l = parse_int(f[5], lineno, "obs_L");
        const long long obs_r = parse_int(f[6], lineno, "obs_R");
        if (obs_l < 0 || obs_r < 0) bad_line(lineno, "negative observation count");
        const State action = parse_state(f[7], lineno, "action");
        bool correct;
        if (f[8] == "0")
            correct = false;
        else if (f[8] == "1")
            correct = true;
        else
            bad_line(lineno, "bad correct '" + f[8] + "' (want 0 or 1)");

        if (records.empty() || records.back().trial_id != static_cast<std::uint64_t>(trial_id)) {
            TrialRecord tr;
            tr.trial_id = static_cast<std::uint64_t>(trial_id);
            tr.state = state;
            records.push_back(std::move(tr));
        } else if (records.back().state != state) {
            bad_line(lineno, "state changes within a trial");
        }
        records.back().agents.push_back({static_cast<int>(position), q, signal,
                                         static_cast<int>(obs_l), static_cast<int>(obs_r), action,
                                         correct});
    }
    return records;
}

void write_curves_csv(std::ostream& os, const std::vector<LabeledCurve>& curves) {
    bool tagged = false;
    for (const auto& c : curves)
        if (!c.model.empty()) tagged = true;
    os << (tagged ? "position,q,accuracy,model" : "position,q,accuracy") << '\n';
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < c.value.size(); ++i) {
            os << (i + 1) << ',' << format_double(c.q) << ',' << format_double(c.value[i]);
            if (tagged) os << ',' << c.model;
            os << '\n';
        }
    }
}

namespace {

json curve_obj(const LabeledCurve& c) {
    json j;
    j["q"] = c.q;
    if (!c.model.empty()) j["model"] = c.model;
    j["accuracy"] = c.value;
    return j;
}

json regression_obj(const OlsResult& fit) {
    json j;
    j["names"] = fit.names;
    j["coef"] = fit.coef;
    j["se"] = fit.se;
    j["tstat"] = fit.tstat;
    j["pval"] = fit.pval;
    j["r2"] = fit.r2;
    j["adj_r2"] = fit.adj_r2;
    j["n_obs"] = fit.n_obs;
    j["n_params"] = fit.n_params;
    j["se_flavor"] = to_string(fit.flavor);
    return j;
}

json against_cells_obj(const std::map<double, AgainstSignalCell>& cells) {
    json arr = json::array();
    for (const auto& [q, cell] : cells) {
        json j;
        j["q"] = q;
        j["n_actions"] = cell.n_actions;
        j["n_against"] = cell.n_against;
        j["n_against_correct"] = cell.n_against_correct;
        j["conditional_accuracy"] = cell.conditional_accuracy();
        arr.push_back(j);
    }
    return arr;
}

json reference_obj() {
    using namespace reference;
    json j;
    j["source"] =
        "point estimates from the original experiment's subject data "
        "(not distributed with this tool; documentation only)";
    j["environment"] = {{"mu", kMu},
                        {"sigma", kSigma},
                        {"q_sparse", kQSparse},
                        {"q_dense", kQDense},
                        {"agents_per_trial", kAgentsPerTrial},
                        {"trials_per_arm", kTrialsPerArm}};
    j["autarky_benchmark"] = kAutarkyBenchmark;
    j["naive_table"] = {{"first_position", kTableFirstPosition},
                        {"sparse", kNaiveSparse},
                        {"dense", kNaiveDense}};
    j["rational_bound_dense"] = kRationalBoundDense;
    j["density_regression"] = {{"slope", kSubjectDensitySlope},
                               {"slope_se", kSubjectDensitySlopeSe},
                               {"slope_p", kSubjectDensitySlopeP},
                               {"intercept", kSubjectDensityIntercept},
                               {"intercept_se", kSubjectDensityInterceptSe},
                               {"n_obs", kSubjectDensityN},
                               {"adj_r2", kSubjectDensityAdjR2}};
    j["interaction_regression"] = {{"gamma", kSubjectInteractionGamma},
                                   {"gamma_se", kSubjectInteractionGammaSe},
                                   {"gamma_p", kSubjectInteractionGammaP},
                                   {"misleading", kSubjectInteractionMisleading},
                                   {"misleading_se", kSubjectInteractionMisleadingSe},
                                   {"density", kSubjectInteractionDensity},
                                   {"density_se", kSubjectInteractionDensitySe},
                                   {"intercept", kSubjectInteractionIntercept},
                                   {"intercept_se", kSubjectInteractionInterceptSe}};
    j["independent_design"] = {{"slope", kSubjectIndependentSlope},
                               {"slope_se", kSubjectIndependentSlopeSe},
                               {"slope_p", kSubjectIndependentSlopeP},
                               {"intercept", kSubjectIndependentIntercept},
                               {"intercept_se", kSubjectIndependentInterceptSe},
                               {"mean_sparse", kSubjectIndependentMeanSparse},
                               {"mean_dense", kSubjectIndependentMeanDense}};
    j["gain_from_social_learning_pts"] = {{"sparse", kSubjectGainSparsePts},
                                          {"dense", kSubjectGainDensePts}};
    j["against_signal_last8"] = {{"count_sparse", kSubjectAgainstSignalCountSparse},
                                 {"count_dense", kSubjectAgainstSignalCountDense},
                                 {"conditional_accuracy_sparse", kSubjectAgainstSignalAccSparse},
                                 {"conditional_accuracy_dense", kSubjectAgainstSignalAccDense}};
    j["sd_fraction_correct_pts"] = {{"sparse", kSubjectSdFractionCorrectSparsePts},
                                    {"dense", kSubjectSdFractionCorrectDensePts}};
    j["first_position_signal_use"] = kSubjectFirstPositionSignalUse;
    return j;
}

}  // namespace

std::string curves_json(const std::vector<LabeledCurve>& curves) {
    json j;
    j["curves"] = json::array();
    for (const auto& c : curves) j["curves"].push_back(curve_obj(c));
    return j.dump(2) + "\n";
}

std::string calibration_report_json(const CalibrationReport& report, const SignalParams& params) {
    json j;
    j["mu"] = params.mu;
    j["sigma"] = params.sigma;
    j["selected"] = {{"ell_variant", to_string(report.ell_variant)},
                     {"choice_variant", to_string(report.choice_variant)}};
    j["fits"] = json::array();
    for (const VariantFit& f : report.fits) {
        j["fits"].push_back({{"ell_variant", to_string(f.ell_variant)},
                             {"choice_variant", to_string(f.choice_variant)},
                             {"ell", f.ell_value},
                             {"max_abs_dev", f.max_abs_dev}});
    }
    return j.dump(2) + "\n";
}

std::string batch_summary_json(const BatchSummary& summary, const BatchMeta& meta) {
    json j;
    j["topology"] = meta.topology;
    j["behavior"] = meta.behavior;
    j["q"] = meta.q;
    j["epsilon"] = meta.epsilon;
    j["master_seed"] = meta.master_seed;
    j["signal"] = {{"mu", meta.signal.mu}, {"sigma", meta.signal.sigma}};
    j["n_trials"] = summary.n_trials;
    j["n_positions"] = summary.n_positions;
    json acc = json::array(), se = json::array();
    for (const PositionStat& p : summary.positions) {
        acc.push_back(p.accuracy);
        se.push_back(p.binom_se);
    }
    j["accuracy_by_position"] = acc;
    j["binomial_se_by_position"] = se;
    j["mean_fraction_correct"] = summary.mean(summary.y_bar);
    j["sd_fraction_correct"] = summary.sample_sd(summary.y_bar);
    if (!summary.y_tilde.empty()) {
        j["mean_last8"] = summary.mean(summary.y_tilde);
        j["sd_last8"] = summary.sample_sd(summary.y_tilde);
    }
    if (!summary.y_sparse.empty()) {
        j["mean_sparse_evaluators"] = summary.mean(summary.y_sparse);
        j["sd_sparse_evaluators"] = summary.sample_sd(summary.y_sparse);
        j["mean_dense_evaluators"] = summary.mean(summary.y_dense);
        j["sd_dense_evaluators"] = summary.sample_sd(summary.y_dense);
    }
    return j.dump(2) + "\n";
}

std::string regression_json(const OlsResult& fit, const std::string& title) {
    json j = regression_obj(fit);
    j["title"] = title;
    return j.dump(2) + "\n";
}

std::string sequential_analysis_json(const OlsResult& density,
                                     const InteractionRegression& interaction,
                                     const GainFromSocialLearning& gain,
                                     const AgainstSignalStats& against,
                                     const WindowUncertainty& windows,
                                     const FractionCorrectHistogram& histogram,
                                     const std::vector<SweepEntry>& sweep) {
    json j;
    j["density_regression"] = regression_obj(density);
    j["interaction_regression"] = regression_obj(interaction.fit);
    j["interaction_regression"]["marginal_effect_difference"] =
        interaction.marginal_effect_difference;
    j["gain_from_social_learning"] = json::array();
    for (const auto& [q, g] : gain.mean_gain_by_q)
        j["gain_from_social_learning"].push_back({{"q", q}, {"mean_gain", g}});
    j["against_signal"] = {{"all_positions", against_cells_obj(against.all_positions)},
                           {"last_positions", against_cells_obj(against.last_positions)}};
    j["window_uncertainty"] = {{"n_windows", windows.n_windows},
                               {"n_trials", windows.u.size()},
                               {"mean_u", windows.mean_u}};
    j["fraction_correct_histogram"] = {{"n_bins", histogram.n_bins},
                                       {"bin_width", histogram.bin_width},
                                       {"count", histogram.count},
                                       {"mean", histogram.mean},
                                       {"sd", histogram.sd}};
    j["robustness_sweep"] = json::array();
    for (const SweepEntry& e : sweep) {
        json entry = regression_obj(e.fit);
        entry["m"] = e.m;
        j["robustness_sweep"].push_back(entry);
    }
    return j.dump(2) + "\n";
}

std::string independent_analysis_json(const OlsResult& fit, double mean_sparse, double mean_dense,
                                      std::uint64_t n_trials) {
    json j;
    j["regression"] = regression_obj(fit);
    j["mean_accuracy_sparse"] = mean_sparse;
    j["mean_accuracy_dense"] = mean_dense;
    j["n_trials"] = n_trials;
    return j.dump(2) + "\n";
}

std::string reference_estimates_json() { return reference_obj().dump(2) + "\n"; }

std::string manifest_json(std::uint64_t master_seed, const std::vector<std::string>& files) {
    json j;
    j["master_seed"] = master_seed;
    std::vector<std::string> sorted = files;
    std::sort(sorted.begin(), sorted.end());
    j["files"] = sorted;
    j["reference_estimates"] = reference_obj();
    return j.dump(2) + "\n";
}

namespace {

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string figure_svg(const std::vector<LabeledCurve>& curves, const std::string& title) {
    constexpr double kW = 640, kH = 420;
    constexpr double kLeft = 62, kRight = 18, kTop = 42, kBottom = 48;
    const double plot_w = kW - kLeft - kRight;
    const double plot_h = kH - kTop - kBottom;

    std::size_t n_max = 1;
    double lo = 1.0, hi = 0.0;
    for (const auto& c : curves) {
        n_max = std::max(n_max, c.value.size());
        for (double v : c.value) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(lo < hi)) {
        lo = 0.0;
        hi = 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    auto to_x = [&](double pos) {
        return n_max > 1 ? kLeft + (pos - 1.0) / (static_cast<double>(n_max) - 1.0) * plot_w
                         : kLeft + plot_w / 2.0;
    };
    auto to_y = [&](double v) { return kTop + (hi - v) / (hi - lo) * plot_h; };

    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b"};
    constexpr std::size_t kPaletteSize = sizeof kPalette / sizeof kPalette[0];

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
       << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
    os << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
       << " font-size=\"15\">" << title << "</text>\n";

    // axes
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
       << kTop + plot_h << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
       << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";

    // y ticks
    for (int t = 0; t <= 5; ++t) {
        const double v = lo + (hi - lo) * t / 5.0;
        const double y = to_y(v);
        os << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << coord(y) << "\" x2=\"" << kLeft
           << "\" y2=\"" << coord(y) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << coord(y + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << coord(v) << "</text>\n";
    }
    // x ticks at 1 and every 5 positions
    for (std::size_t pos = 1; pos <= n_max; pos = pos == 1 ? 5 : pos + 5) {
        const double x = to_x(static_cast<double>(pos));
        os << "<line x1=\"" << coord(x) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << coord(x)
           << "\" y2=\"" << kTop + plot_h + 4 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << coord(x) << "\" y=\"" << kTop + plot_h + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << pos
           << "</text>\n";
    }
    os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kH - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">position</text>\n";
    os << "<text x=\"16\" y=\"" << kTop + plot_h / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\""
       << " transform=\"rotate(-90 16 " << kTop + plot_h / 2 << ")\">accuracy</text>\n";

    // curves and legend
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const auto& c = curves[ci];
        const char* color = kPalette[ci % kPaletteSize];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < c.value.size(); ++i) {
            if (i) os << ' ';
            os << coord(to_x(static_cast<double>(i + 1))) << ',' << coord(to_y(c.value[i]));
        }
        os << "\"/>\n";

        char qbuf[32];
        std::snprintf(qbuf, sizeof qbuf, "%g", c.q);
        std::string label = c.model.empty() ? std::string("q=") + qbuf
                                            : c.model + ", q=" + qbuf;
        const double ly = kTop + 14 + 16 * static_cast<double>(ci);
        os << "<line x1=\"" << kLeft + plot_w - 150 << "\" y1=\"" << coord(ly - 4) << "\" x2=\""
           << kLeft + plot_w - 128 << "\" y2=\"" << coord(ly - 4) << "\" stroke=\"" << color
           << "\" stroke-width=\"1.8\"/>\n";
        os << "<text x=\"" << kLeft + plot_w - 122 << "\" y=\"" << coord(ly)
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace netlearn

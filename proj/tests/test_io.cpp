#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "netlearn/io.h"
#include "netlearn/reference.h"
#include "netlearn/rng.h"

using namespace netlearn;

namespace {

const SignalParams kSig{1.0, 2.0};

std::vector<TrialRecord> small_batch(const Topology& topology, std::uint64_t n_trials,
                                     std::uint64_t seed) {
    TrialConfig cfg;
    cfg.topology = topology;
    cfg.signal = kSig;
    std::vector<TrialRecord> records;
    run_batch(cfg, n_trials, seed, 2, [&](const TrialRecord& r) { records.push_back(r); });
    return records;
}

void check_same_records(const std::vector<TrialRecord>& a, const std::vector<TrialRecord>& b) {
    REQUIRE(a.size() == b.size());
    for (std::size_t t = 0; t < a.size(); ++t) {
        CHECK(a[t].trial_id == b[t].trial_id);
        CHECK(a[t].state == b[t].state);
        REQUIRE(a[t].agents.size() == b[t].agents.size());
        for (std::size_t i = 0; i < a[t].agents.size(); ++i) {
            const AgentRow &x = a[t].agents[i], &y = b[t].agents[i];
            CHECK(x.position == y.position);
            CHECK(x.q == y.q);
            CHECK(x.signal == y.signal);  // bitwise: %.17g must round-trip
            CHECK(x.obs_left == y.obs_left);
            CHECK(x.obs_right == y.obs_right);
            CHECK(x.action == y.action);
            CHECK(x.correct == y.correct);
        }
    }
}

}  // namespace

TEST_CASE("printed doubles parse back to the identical bits") {
    std::vector<double> values{0.0,  -0.0, 1.0,  -1.5,  0.1,   1.0 / 3.0,
                               0.25, 1e-7, 1e17, -2e-9, 3.125, 0.691462461274013};
    SplitMix64 rng(5150);
    for (int i = 0; i < 200; ++i) values.push_back((rng.uniform01() - 0.5) * 20.0);
    for (int i = 0; i < 50; ++i) values.push_back(rng.gaussian() * 1e8);
    for (double v : values) {
        const std::string text = format_double(v);
        const double back = std::strtod(text.c_str(), nullptr);
        CHECK(back == v);
        // and the sign of zero survives
        if (v == 0.0) CHECK(std::signbit(back) == std::signbit(v));
    }
}

TEST_CASE("records survive a CSV round trip unchanged") {
    auto sequential = small_batch(SequentialTopology{NetworkParams{0.6, 40}}, 25, 61);
    auto independent = small_batch(IndependentObservedTopology{}, 25, 62);
    for (const auto* records : {&sequential, &independent}) {
        std::ostringstream out;
        write_records_csv(out, *records);
        std::istringstream in(out.str());
        auto back = read_records_csv(in);
        check_same_records(*records, back);
    }
}

TEST_CASE("the record header is the fixed schema line") {
    CHECK(std::string(kRecordCsvHeader) ==
          "trial_id,position,q,state,signal,obs_L,obs_R,action,correct");
    std::ostringstream out;
    write_record_csv_header(out);
    CHECK(out.str().substr(0, out.str().find('\n')) == kRecordCsvHeader);
}

TEST_CASE("the reader refuses malformed input and names the line") {
    auto read = [](const std::string& text) {
        std::istringstream in(text);
        return read_records_csv(in);
    };
    const std::string header = std::string(kRecordCsvHeader) + "\n";

    CHECK_THROWS_WITH_AS(read(""), doctest::Contains("empty"), std::runtime_error);
    CHECK_THROWS_WITH_AS(read("trial,position\n1,2\n"), doctest::Contains("line 1"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(read(header + "0,1,0.25,R,0.5,0,0,R\n"), doctest::Contains("line 2"),
                         std::runtime_error);  // eight fields, not nine
    CHECK_THROWS_WITH_AS(read(header + "0,1,0.25,R,zzz,0,0,R,1\n"), doctest::Contains("line 2"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(read(header + "0,1,0.25,X,0.5,0,0,R,1\n"), doctest::Contains("line 2"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(read(header + "0,1,0.25,R,0.5,0,0,R,7\n"), doctest::Contains("line 2"),
                         std::runtime_error);
    const std::string good = "0,1,0.25,R,0.5,0,0,R,1\n";
    CHECK_THROWS_WITH_AS(read(header + good + "0,2,0.25,L,0.5,0,0,R,0\n"),
                         doctest::Contains("line 3"), std::runtime_error);  // state flips mid-trial

    auto ok = read(header + good);
    REQUIRE(ok.size() == 1);
    CHECK(ok[0].agents.size() == 1);
    CHECK(ok[0].state == State::R);
}

TEST_CASE("curve CSV only grows a model column when a curve is tagged") {
    LabeledCurve plain{0.25, "", {0.5, 0.6}};
    LabeledCurve tagged{0.75, "naive-exact", {0.7, 0.8}};

    std::ostringstream a;
    write_curves_csv(a, {plain});
    CHECK(a.str().substr(0, a.str().find('\n')) == "position,q,accuracy");

    std::ostringstream b;
    write_curves_csv(b, {plain, tagged});
    CHECK(b.str().substr(0, b.str().find('\n')) == "position,q,accuracy,model");
    CHECK(b.str().find("naive-exact") != std::string::npos);
}

TEST_CASE("CSV and JSON carry bitwise-identical curve values") {
    auto curve = naive_accuracy_curve(NetworkParams{0.25, 10}, kSig, EllVariant::truncated_mean,
                                      ChoiceVariant::derived_argument);
    LabeledCurve labeled{0.25, "naive-exact", curve};

    std::ostringstream csv;
    write_curves_csv(csv, {labeled});
    std::vector<double> from_csv;
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        const auto second_comma = line.find(',', line.find(',') + 1);
        from_csv.push_back(std::strtod(line.c_str() + second_comma + 1, nullptr));
    }

    auto parsed = nlohmann::json::parse(curves_json({labeled}));
    const auto& values = parsed["curves"][0]["accuracy"];
    REQUIRE(from_csv.size() == curve.size());
    REQUIRE(values.size() == curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(from_csv[i] == curve[i]);
        CHECK(values[i].get<double>() == curve[i]);
    }
}

TEST_CASE("JSON documents are byte-deterministic") {
    auto records = small_batch(SequentialTopology{NetworkParams{0.25, 40}}, 10, 63);
    std::ostringstream csv1, csv2;
    write_records_csv(csv1, records);
    write_records_csv(csv2, records);
    CHECK(csv1.str() == csv2.str());

    auto report = calibrate_variants(kSig);
    CHECK(calibration_report_json(report, kSig) == calibration_report_json(report, kSig));
    CHECK(reference_estimates_json() == reference_estimates_json());
    CHECK(manifest_json(7, {"a.csv", "b.json"}) == manifest_json(7, {"a.csv", "b.json"}));
}

TEST_CASE("the batch summary document carries the aggregate blocks") {
    TrialConfig cfg;
    cfg.topology = SequentialTopology{NetworkParams{0.25, 40}};
    cfg.signal = kSig;
    auto summary = run_batch(cfg, 50, 64, 2);
    BatchMeta meta;
    meta.topology = "sequential";
    meta.behavior = "naive";
    meta.q = 0.25;
    meta.master_seed = 64;
    meta.signal = kSig;

    auto doc = nlohmann::json::parse(batch_summary_json(summary, meta));
    CHECK(doc["n_trials"].get<std::uint64_t>() == 50);
    CHECK(doc["accuracy_by_position"].size() == 40);
    CHECK(doc["binomial_se_by_position"].size() == 40);
    CHECK(doc.contains("mean_last8"));
    CHECK(doc["master_seed"].get<std::uint64_t>() == 64);
    CHECK_FALSE(doc.contains("mean_sparse_evaluators"));

    TrialConfig ind;
    ind.topology = IndependentObservedTopology{};
    ind.signal = kSig;
    auto isummary = run_batch(ind, 50, 65, 2);
    BatchMeta imeta = meta;
    imeta.topology = "independent";
    auto idoc = nlohmann::json::parse(batch_summary_json(isummary, imeta));
    CHECK(idoc.contains("mean_sparse_evaluators"));
    CHECK(idoc.contains("mean_dense_evaluators"));
    CHECK_FALSE(idoc.contains("mean_last8"));
}

TEST_CASE("the reference-estimates block restates the published table") {
    auto doc = nlohmann::json::parse(reference_estimates_json());
    CHECK(doc["density_regression"]["slope"].get<double>() ==
          reference::kSubjectDensitySlope);
    CHECK(doc["interaction_regression"]["gamma"].get<double>() ==
          reference::kSubjectInteractionGamma);
    CHECK(doc["independent_design"]["slope"].get<double>() ==
          reference::kSubjectIndependentSlope);
    CHECK(doc["autarky_benchmark"].get<double>() == reference::kAutarkyBenchmark);
    CHECK(doc["naive_table"]["sparse"].size() == 8);
    CHECK(doc["naive_table"]["dense"].size() == 8);
    CHECK(doc["rational_bound_dense"].size() == 8);
    // documentation block, not an assertion target: it must say where it is from
    CHECK(doc.contains("source"));
}

TEST_CASE("the manifest lists files in sorted order with the seed") {
    auto doc = nlohmann::json::parse(manifest_json(99, {"z.csv", "a.json", "m.svg"}));
    CHECK(doc["master_seed"].get<std::uint64_t>() == 99);
    REQUIRE(doc["files"].size() == 3);
    CHECK(doc["files"][0].get<std::string>() == "a.json");
    CHECK(doc["files"][1].get<std::string>() == "m.svg");
    CHECK(doc["files"][2].get<std::string>() == "z.csv");
    CHECK(doc.contains("reference_estimates"));
}

TEST_CASE("the figure is a self-contained deterministic SVG") {
    auto sparse = naive_accuracy_curve(NetworkParams{0.25, 40}, kSig, EllVariant::truncated_mean,
                                       ChoiceVariant::derived_argument);
    auto dense = naive_accuracy_curve(NetworkParams{0.75, 40}, kSig, EllVariant::truncated_mean,
                                      ChoiceVariant::derived_argument);
    std::vector<LabeledCurve> curves{{0.25, "naive-exact", sparse}, {0.75, "naive-exact", dense}};

    const std::string svg = figure_svg(curves, "Accuracy by position");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("Accuracy by position") != std::string::npos);
    std::size_t polylines = 0, at = 0;
    while ((at = svg.find("<polyline", at)) != std::string::npos) {
        ++polylines;
        at += 9;
    }
    CHECK(polylines == 2);
    CHECK(svg == figure_svg(curves, "Accuracy by position"));
}

TEST_CASE("analysis documents parse and expose their sections") {
    TrialConfig cfg;
    cfg.topology = SequentialTopology{NetworkParams{0.25, 40}};
    cfg.signal = kSig;
    std::vector<TrialRecord> records;
    run_batch(cfg, 300, 66, 2, [&](const TrialRecord& r) { records.push_back(r); });
    cfg.topology = SequentialTopology{NetworkParams{0.75, 40}};
    run_batch(cfg, 300, 67, 2, [&](const TrialRecord& r) { records.push_back(r); });

    auto outcomes = trial_outcomes(records);
    auto density = density_regression(outcomes);
    auto inter = misleading_interaction_regression(outcomes);
    auto gain = gain_from_social_learning(outcomes);
    auto against = against_signal_stats(records);
    auto windows = window_uncertainty(records);
    auto hist = fraction_correct_histogram(records, 20);
    auto sweep = robustness_sweep(records);

    auto doc = nlohmann::json::parse(
        sequential_analysis_json(density, inter, gain, against, windows, hist, sweep));
    CHECK(doc.contains("density_regression"));
    CHECK(doc.contains("interaction_regression"));
    CHECK(doc["interaction_regression"].contains("marginal_effect_difference"));
    CHECK(doc["gain_from_social_learning"].size() == 2);
    CHECK(doc["against_signal"].contains("all_positions"));
    CHECK(doc["against_signal"].contains("last_positions"));
    CHECK(doc["window_uncertainty"]["n_windows"].get<int>() == 30);
    CHECK(doc["window_uncertainty"]["mean_u"].size() == 30);
    CHECK(doc["fraction_correct_histogram"]["count"].size() == 20);
    CHECK(doc["robustness_sweep"].size() == 9);
    CHECK(doc["robustness_sweep"][0]["m"].get<int>() == 4);

    auto rdoc = nlohmann::json::parse(regression_json(density, "density"));
    CHECK(rdoc["title"].get<std::string>() == "density");
    CHECK(rdoc["coef"].size() == 2);

    auto idoc = nlohmann::json::parse(independent_analysis_json(density, 0.7, 0.8, 600));
    CHECK(idoc["mean_accuracy_sparse"].get<double>() == 0.7);
    CHECK(idoc["mean_accuracy_dense"].get<double>() == 0.8);
    CHECK(idoc["n_trials"].get<std::uint64_t>() == 600);
}

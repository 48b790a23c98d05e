#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "netlearn/bound.h"
#include "netlearn/exact.h"
#include "netlearn/sim.h"
#include "netlearn/stats.h"

namespace netlearn {

inline constexpr const char* kRecordCsvHeader =
    "trial_id,position,q,state,signal,obs_L,obs_R,action,correct";

// %.17g — enough digits that reading the text back recovers the exact double,
// which the record-consistency checks and the byte-reproducibility contract
// both rely on
std::string format_double(double x);

void write_record_csv_header(std::ostream& os);
void write_record_csv_rows(std::ostream& os, const TrialRecord& trial);
void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records);

// strict reader for the schema above; throws std::runtime_error with the
// offending line number on malformed input
std::vector<TrialRecord> read_records_csv(std::istream& is);

struct LabeledCurve {
    double q = 0.0;
    std::string model;  // tag such as "naive-exact" or "rational-bound"; may be empty
    std::vector<double> value;
};

// columns position,q,accuracy — plus a model column when any curve is tagged
void write_curves_csv(std::ostream& os, const std::vector<LabeledCurve>& curves);
std::string curves_json(const std::vector<LabeledCurve>& curves);

std::string calibration_report_json(const CalibrationReport& report, const SignalParams& params);

// descriptive fields carried alongside the numbers in the summary document
struct BatchMeta {
    std::string topology;  // "sequential" or "independent"
    std::string behavior;
    double q = 0.0;  // sequential arm
    double epsilon = 0.0;
    std::uint64_t master_seed = 0;
    SignalParams signal;
};

std::string batch_summary_json(const BatchSummary& summary, const BatchMeta& meta);

std::string regression_json(const OlsResult& fit, const std::string& title);

std::string sequential_analysis_json(const OlsResult& density,
                                     const InteractionRegression& interaction,
                                     const GainFromSocialLearning& gain,
                                     const AgainstSignalStats& against,
                                     const WindowUncertainty& windows,
                                     const FractionCorrectHistogram& histogram,
                                     const std::vector<SweepEntry>& sweep);

std::string independent_analysis_json(const OlsResult& fit, double mean_sparse,
                                      double mean_dense, std::uint64_t n_trials);

// the original experiment's point estimates as a documentation block for
// reports (the raw subject data is not distributed, so nothing asserts these)
std::string reference_estimates_json();

std::string manifest_json(std::uint64_t master_seed, const std::vector<std::string>& files);

// small static line chart: accuracy on the y axis, position on the x axis
std::string figure_svg(const std::vector<LabeledCurve>& curves, const std::string& title);

}  // namespace netlearn

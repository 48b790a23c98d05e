#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <variant>
#include <vector>

#include "netlearn/exact.h"
#include "netlearn/model.h"
#include "netlearn/rng.h"

namespace netlearn {

// 40 agents in a line, each observing each predecessor independently with
// probability q.
struct SequentialTopology {
    NetworkParams net;
};

// The uncorrelated-observations design: the first block of agents has no
// neighbors at all (so they act on their signals), then one block of sparse
// evaluators and one block of dense evaluators, each observing only the
// initial block and never each other.
struct IndependentObservedTopology {
    int n_initial = 32;
    int n_sparse_evaluators = 8;  // positions 33..40
    int n_dense_evaluators = 8;   // positions 41..48
    double q_sparse = 0.25;
    double q_dense = 0.75;
};

using Topology = std::variant<SequentialTopology, IndependentObservedTopology>;

int topology_agent_count(const Topology& t);

struct TrialConfig {
    Topology topology = SequentialTopology{};
    SignalParams signal;
    BehaviorModel behavior;
    // social weight used by naive deciders; the default is the variant the
    // calibration procedure selects
    EllVariant ell_variant = EllVariant::truncated_mean;
    double epsilon = 0.0;  // uniform action-flip probability, off by default
};

struct AgentRow {
    int position = 0;  // 1-based
    double q = 0.0;    // link probability this agent faced
    double signal = 0.0;
    int obs_left = 0;
    int obs_right = 0;
    State action = State::L;
    bool correct = false;
};

struct TrialRecord {
    std::uint64_t trial_id = 0;
    State state = State::L;
    std::vector<AgentRow> agents;
};

// One full trial, bit-deterministic given the trial seed. Every agent's draws
// come from per-(agent, purpose) streams, so the record does not depend on
// evaluation order.
TrialRecord run_trial(const TrialConfig& config, std::uint64_t tseed, std::uint64_t trial_id = 0);

struct PositionStat {
    std::int64_t n_correct = 0;
    double accuracy = 0.0;
    double binom_se = 0.0;
};

struct BatchSummary {
    std::uint64_t n_trials = 0;
    int n_positions = 0;
    std::vector<PositionStat> positions;
    // per-trial aggregates, indexed by trial
    std::vector<double> y_tilde;  // last-8 fraction correct (sequential topology)
    std::vector<double> y_bar;    // overall fraction correct
    std::vector<double> y_sparse; // evaluator-arm fractions (independent topology)
    std::vector<double> y_dense;

    double mean(const std::vector<double>& v) const;
    double sample_sd(const std::vector<double>& v) const;
};

using RecordSink = std::function<void(const TrialRecord&)>;

// Runs n_trials trials with per-trial seeds derived from the master seed.
// Results are independent of the parallelism level: trials are pure functions
// of their seed, and the summary is accumulated in trial order. The sink (if
// any) is also invoked in trial order, so records can stream to disk without
// ever holding the whole batch in memory.
BatchSummary run_batch(const TrialConfig& config, std::uint64_t n_trials,
                       std::uint64_t master_seed, int parallelism,
                       const RecordSink& sink = {});

// ---- record-set statistics ----

struct AgainstSignalCell {
    std::int64_t n_actions = 0;
    std::int64_t n_against = 0;  // guessed opposite to the own signal's sign
    std::int64_t n_against_correct = 0;

    double conditional_accuracy() const {
        return n_against > 0 ? static_cast<double>(n_against_correct) / n_against : 0.0;
    }
};

// counts of going-against-signal guesses and their conditional accuracy,
// keyed by the q arm each agent faced; once over all positions and once over
// the last 8 positions of each trial
struct AgainstSignalStats {
    std::map<double, AgainstSignalCell> all_positions;
    std::map<double, AgainstSignalCell> last_positions;
};

AgainstSignalStats against_signal_stats(const std::vector<TrialRecord>& records);

// Consensus measure u = r(1-r) over the 30 sliding windows centered at
// positions 6..35, each spanning 11 consecutive positions; r is the fraction
// of the window choosing R. Requires fixed-q sequential trials with at least
// 40 agents.
struct WindowUncertainty {
    int n_windows = 0;
    std::vector<std::vector<double>> u;  // [trial][window]
    std::vector<double> mean_u;          // per window, averaged over trials
};

WindowUncertainty window_uncertainty(const std::vector<TrialRecord>& records);

struct FractionCorrectHistogram {
    int n_bins = 0;
    double bin_width = 0.0;
    std::vector<std::int64_t> count;
    double mean = 0.0;
    double sd = 0.0;  // sample SD of per-trial overall fraction correct
};

FractionCorrectHistogram fraction_correct_histogram(const std::vector<TrialRecord>& records,
                                                    int n_bins = 20);

}  // namespace netlearn

#include "netlearn/sim.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace netlearn {

namespace {

void validate_topology(const Topology& t) {
    if (const auto* seq = std::get_if<SequentialTopology>(&t)) {
        seq->net.validate();
        return;
    }
    const auto& ind = std::get<IndependentObservedTopology>(t);
    if (ind.n_initial < 1 || ind.n_sparse_evaluators < 1 || ind.n_dense_evaluators < 1)
        throw std::invalid_argument("independent topology: all block sizes must be positive");
    if (!(ind.q_sparse >= 0.0 && ind.q_sparse <= 1.0 && ind.q_dense >= 0.0 && ind.q_dense <= 1.0))
        throw std::invalid_argument("independent topology: link probabilities must lie in [0,1]");
}

// per-position observation setup: which q and which predecessor range applies
struct ObservationPlan {
    double q = 0.0;
    int first_pred = 1;
    int last_pred = 0;  // inclusive; empty when last < first
};

ObservationPlan plan_for(const Topology& t, int pos) {
    ObservationPlan plan;
    if (const auto* seq = std::get_if<SequentialTopology>(&t)) {
        // position 1 gets an empty predecessor range but keeps the batch q so
        // every row of a sequential trial is labeled with the same density
        plan.q = seq->net.q;
        plan.first_pred = 1;
        plan.last_pred = pos - 1;
        return plan;
    }
    const auto& ind = std::get<IndependentObservedTopology>(t);
    if (pos <= ind.n_initial) {
        // the initial block observes nobody
        return plan;
    }
    // evaluators observe the initial block only, never each other
    plan.first_pred = 1;
    plan.last_pred = ind.n_initial;
    plan.q = pos <= ind.n_initial + ind.n_sparse_evaluators ? ind.q_sparse : ind.q_dense;
    return plan;
}

double fraction_correct(const TrialRecord& tr, std::size_t first, std::size_t last) {
    std::int64_t c = 0;
    for (std::size_t i = first; i <= last; ++i) c += tr.agents[i].correct ? 1 : 0;
    return static_cast<double>(c) / static_cast<double>(last - first + 1);
}

void check_not_empty(const std::vector<TrialRecord>& records, const char* who) {
    if (records.empty()) throw std::invalid_argument(std::string(who) + ": no records");
}

// sequential trials carry one q for every agent; mixed per-agent q means the
// records came from the independent-observation topology
bool uniform_q(const TrialRecord& tr) {
    for (const auto& a : tr.agents)
        if (a.q != tr.agents.front().q) return false;
    return true;
}

}  // namespace

int topology_agent_count(const Topology& t) {
    if (const auto* seq = std::get_if<SequentialTopology>(&t)) return seq->net.n_agents;
    const auto& ind = std::get<IndependentObservedTopology>(t);
    return ind.n_initial + ind.n_sparse_evaluators + ind.n_dense_evaluators;
}

TrialRecord run_trial(const TrialConfig& config, std::uint64_t tseed, std::uint64_t trial_id) {
    config.signal.validate();
    config.behavior.validate();
    validate_topology(config.topology);
    if (!(config.epsilon >= 0.0 && config.epsilon <= 1.0))
        throw std::invalid_argument("run_trial: epsilon must lie in [0,1]");

    const int n = topology_agent_count(config.topology);
    const double ell = compute_ell(config.signal, config.ell_variant);

    TrialRecord rec;
    rec.trial_id = trial_id;
    {
        auto s = agent_stream(tseed, 0, Draw::state);
        rec.state = s.uniform01() < 0.5 ? State::L : State::R;
    }
    rec.agents.reserve(static_cast<std::size_t>(n));

    std::vector<State> actions(static_cast<std::size_t>(n));
    for (int pos = 1; pos <= n; ++pos) {
        const ObservationPlan plan = plan_for(config.topology, pos);

        ObservedCounts counts;
        {
            auto links = agent_stream(tseed, pos, Draw::links);
            for (int j = plan.first_pred; j <= plan.last_pred; ++j) {
                if (links.uniform01() < plan.q) {
                    if (actions[static_cast<std::size_t>(j) - 1] == State::L)
                        ++counts.n_left;
                    else
                        ++counts.n_right;
                }
            }
        }

        double s;
        {
            auto sig = agent_stream(tseed, pos, Draw::signal);
            s = sample_signal(rec.state, config.signal, sig);
        }

        bool is_naive = true;
        switch (config.behavior.kind) {
            case BehaviorKind::naive: is_naive = true; break;
            case BehaviorKind::autarkic: is_naive = false; break;
            case BehaviorKind::mixed: {
                auto b = agent_stream(tseed, pos, Draw::behavior);
                is_naive = b.uniform01() < config.behavior.naive_share;
                break;
            }
        }

        State action = is_naive ? naive_decide(s, counts, ell, config.signal)
                                : naive_decide(s, ObservedCounts{}, ell, config.signal);
        {
            auto noise = agent_stream(tseed, pos, Draw::noise);
            if (noise.uniform01() < config.epsilon) action = opposite(action);
        }

        actions[static_cast<std::size_t>(pos) - 1] = action;
        rec.agents.push_back({pos, plan.q, s, counts.n_left, counts.n_right, action,
                              action == rec.state});
    }
    return rec;
}

double BatchSummary::mean(const std::vector<double>& v) const {
    if (v.empty()) return 0.0;
    double tot = 0.0;
    for (double x : v) tot += x;
    return tot / static_cast<double>(v.size());
}

double BatchSummary::sample_sd(const std::vector<double>& v) const {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

BatchSummary run_batch(const TrialConfig& config, std::uint64_t n_trials,
                       std::uint64_t master_seed, int parallelism, const RecordSink& sink) {
    if (n_trials < 1) throw std::invalid_argument("run_batch: need at least one trial");
    parallelism = std::max(1, parallelism);
    validate_topology(config.topology);

    const int n = topology_agent_count(config.topology);
    const bool independent = std::holds_alternative<IndependentObservedTopology>(config.topology);

    BatchSummary sum;
    sum.n_trials = n_trials;
    sum.n_positions = n;
    sum.positions.assign(static_cast<std::size_t>(n), {});
    sum.y_bar.reserve(n_trials);
    if (independent) {
        sum.y_sparse.reserve(n_trials);
        sum.y_dense.reserve(n_trials);
    } else {
        sum.y_tilde.reserve(n_trials);
    }

    // trials are computed in parallel blocks but consumed strictly in trial
    // order, so sums (and any sink output) never depend on the thread count
    constexpr std::uint64_t kBlock = 4096;
    std::vector<TrialRecord> buf;
    for (std::uint64_t start = 0; start < n_trials; start += kBlock) {
        const std::uint64_t count = std::min(kBlock, n_trials - start);
        buf.assign(count, TrialRecord{});

        const int workers = static_cast<int>(std::min<std::uint64_t>(count, parallelism));
        if (workers <= 1) {
            for (std::uint64_t r = 0; r < count; ++r)
                buf[r] = run_trial(config, trial_seed(master_seed, start + r), start + r);
        } else {
            std::atomic<std::uint64_t> cursor{0};
            auto work = [&] {
                constexpr std::uint64_t kChunk = 16;
                for (std::uint64_t at; (at = cursor.fetch_add(kChunk)) < count;) {
                    const std::uint64_t stop = std::min(at + kChunk, count);
                    for (std::uint64_t r = at; r < stop; ++r)
                        buf[r] = run_trial(config, trial_seed(master_seed, start + r), start + r);
                }
            };
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w) pool.emplace_back(work);
            for (auto& th : pool) th.join();
        }

        for (const TrialRecord& tr : buf) {
            for (std::size_t i = 0; i < tr.agents.size(); ++i)
                sum.positions[i].n_correct += tr.agents[i].correct ? 1 : 0;
            const std::size_t last = tr.agents.size() - 1;
            sum.y_bar.push_back(fraction_correct(tr, 0, last));
            if (independent) {
                const auto& ind = std::get<IndependentObservedTopology>(config.topology);
                const std::size_t s0 = static_cast<std::size_t>(ind.n_initial);
                const std::size_t d0 = s0 + static_cast<std::size_t>(ind.n_sparse_evaluators);
                sum.y_sparse.push_back(fraction_correct(tr, s0, d0 - 1));
                sum.y_dense.push_back(fraction_correct(tr, d0, last));
            } else {
                const std::size_t tail = std::min<std::size_t>(8, tr.agents.size());
                sum.y_tilde.push_back(fraction_correct(tr, tr.agents.size() - tail, last));
            }
            if (sink) sink(tr);
        }
    }

    for (auto& ps : sum.positions) {
        ps.accuracy = static_cast<double>(ps.n_correct) / static_cast<double>(n_trials);
        ps.binom_se = std::sqrt(ps.accuracy * (1.0 - ps.accuracy) / static_cast<double>(n_trials));
    }
    return sum;
}

AgainstSignalStats against_signal_stats(const std::vector<TrialRecord>& records) {
    check_not_empty(records, "against_signal_stats");
    AgainstSignalStats stats;
    for (const TrialRecord& tr : records) {
        const int n = static_cast<int>(tr.agents.size());
        for (const AgentRow& a : tr.agents) {
            // the sign rule matches the decision tie-break: s == 0 counts as positive
            const State signal_side = a.signal >= 0.0 ? State::R : State::L;
            const bool against = a.action != signal_side;
            auto bump = [&](AgainstSignalCell& cell) {
                ++cell.n_actions;
                if (against) {
                    ++cell.n_against;
                    if (a.correct) ++cell.n_against_correct;
                }
            };
            bump(stats.all_positions[a.q]);
            if (a.position > n - 8) bump(stats.last_positions[a.q]);
        }
    }
    return stats;
}

WindowUncertainty window_uncertainty(const std::vector<TrialRecord>& records) {
    check_not_empty(records, "window_uncertainty");
    WindowUncertainty out;
    out.n_windows = 30;
    out.mean_u.assign(30, 0.0);
    out.u.reserve(records.size());
    for (const TrialRecord& tr : records) {
        if (tr.agents.size() < 40 || !uniform_q(tr))
            throw std::invalid_argument(
                "window_uncertainty: needs fixed-q sequential trials with at least 40 agents");
        std::vector<double> row(30);
        for (int w = 0; w < 30; ++w) {
            const int center = 6 + w;  // window spans center-5 .. center+5
            int r_count = 0;
            for (int pos = center - 5; pos <= center + 5; ++pos)
                r_count += tr.agents[static_cast<std::size_t>(pos) - 1].action == State::R ? 1 : 0;
            const double r = static_cast<double>(r_count) / 11.0;
            row[static_cast<std::size_t>(w)] = r * (1.0 - r);
            out.mean_u[static_cast<std::size_t>(w)] += row[static_cast<std::size_t>(w)];
        }
        out.u.push_back(std::move(row));
    }
    for (double& m : out.mean_u) m /= static_cast<double>(records.size());
    return out;
}

FractionCorrectHistogram fraction_correct_histogram(const std::vector<TrialRecord>& records,
                                                    int n_bins) {
    check_not_empty(records, "fraction_correct_histogram");
    if (n_bins < 1) throw std::invalid_argument("fraction_correct_histogram: need at least one bin");
    FractionCorrectHistogram h;
    h.n_bins = n_bins;
    h.bin_width = 1.0 / n_bins;
    h.count.assign(static_cast<std::size_t>(n_bins), 0);

    double tot = 0.0;
    std::vector<double> ys;
    ys.reserve(records.size());
    for (const TrialRecord& tr : records) {
        const double y = fraction_correct(tr, 0, tr.agents.size() - 1);
        ys.push_back(y);
        tot += y;
        const int bin = std::min(static_cast<int>(y * n_bins), n_bins - 1);
        ++h.count[static_cast<std::size_t>(bin)];
    }
    h.mean = tot / static_cast<double>(ys.size());
    if (ys.size() > 1) {
        double ss = 0.0;
        for (double y : ys) ss += (y - h.mean) * (y - h.mean);
        h.sd = std::sqrt(ss / static_cast<double>(ys.size() - 1));
    }
    return h;
}

}  // namespace netlearn

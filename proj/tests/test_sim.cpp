#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "netlearn/exact.h"
#include "netlearn/model.h"
#include "netlearn/sim.h"

using namespace netlearn;

namespace {

const SignalParams kSig{1.0, 2.0};

TrialConfig sequential_config(double q, BehaviorKind kind, double naive_share = 1.0) {
    TrialConfig cfg;
    cfg.topology = SequentialTopology{NetworkParams{q, 40}};
    cfg.signal = kSig;
    cfg.behavior = BehaviorModel{kind, naive_share};
    return cfg;
}

std::vector<TrialRecord> collect(const TrialConfig& cfg, std::uint64_t n_trials,
                                 std::uint64_t seed, int parallelism,
                                 BatchSummary* summary_out = nullptr) {
    std::vector<TrialRecord> records;
    records.reserve(n_trials);
    auto summary = run_batch(cfg, n_trials, seed, parallelism,
                             [&](const TrialRecord& r) { records.push_back(r); });
    if (summary_out) *summary_out = summary;
    return records;
}

void require_same_records(const std::vector<TrialRecord>& a, const std::vector<TrialRecord>& b) {
    REQUIRE(a.size() == b.size());
    for (std::size_t t = 0; t < a.size(); ++t) {
        REQUIRE(a[t].trial_id == b[t].trial_id);
        REQUIRE(a[t].state == b[t].state);
        REQUIRE(a[t].agents.size() == b[t].agents.size());
        for (std::size_t i = 0; i < a[t].agents.size(); ++i) {
            const AgentRow &x = a[t].agents[i], &y = b[t].agents[i];
            REQUIRE(x.position == y.position);
            REQUIRE(x.q == y.q);
            REQUIRE(x.signal == y.signal);  // bitwise: same stream, same draws
            REQUIRE(x.obs_left == y.obs_left);
            REQUIRE(x.obs_right == y.obs_right);
            REQUIRE(x.action == y.action);
            REQUIRE(x.correct == y.correct);
        }
    }
}

// synthetic 40-agent fixed-q trial with a chosen action sequence
TrialRecord synthetic_trial(const std::vector<State>& actions, double q) {
    TrialRecord tr;
    tr.state = State::L;
    tr.agents.resize(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) {
        AgentRow& row = tr.agents[i];
        row.position = static_cast<int>(i) + 1;
        row.q = q;
        row.action = actions[i];
        row.correct = actions[i] == tr.state;
    }
    return tr;
}

}  // namespace

TEST_CASE("agents ignoring their neighbors hit the single-signal rate everywhere") {
    auto cfg = sequential_config(0.25, BehaviorKind::autarkic);
    auto summary = run_batch(cfg, 20000, 333, 4);
    const double aut = autarky_accuracy(kSig);
    const double se = std::sqrt(aut * (1.0 - aut) / 20000.0);
    REQUIRE(summary.n_positions == 40);
    for (const auto& ps : summary.positions) {
        INFO("accuracy ", ps.accuracy, " vs ", aut);
        CHECK(std::abs(ps.accuracy - aut) <= 3.0 * se);
    }
}

TEST_CASE("naive agents with no links behave exactly like autarkic ones") {
    auto naive = collect(sequential_config(0.0, BehaviorKind::naive), 50, 11, 2);
    auto autar = collect(sequential_config(0.0, BehaviorKind::autarkic), 50, 11, 2);
    require_same_records(naive, autar);
}

TEST_CASE("the mixed population degenerates to its pure cases") {
    auto mixed1 = collect(sequential_config(0.25, BehaviorKind::mixed, 1.0), 50, 12, 2);
    auto naive = collect(sequential_config(0.25, BehaviorKind::naive), 50, 12, 2);
    require_same_records(mixed1, naive);

    auto mixed0 = collect(sequential_config(0.25, BehaviorKind::mixed, 0.0), 50, 12, 2);
    auto autar = collect(sequential_config(0.25, BehaviorKind::autarkic), 50, 12, 2);
    require_same_records(mixed0, autar);
}

TEST_CASE("recorded actions are reproducible from the recorded inputs") {
    const double ell = compute_ell(kSig, EllVariant::truncated_mean);

    auto naive = collect(sequential_config(0.6, BehaviorKind::naive), 100, 13, 4);
    for (const auto& tr : naive) {
        for (const auto& row : tr.agents) {
            CHECK(row.q == 0.6);
            const State expect =
                naive_decide(row.signal, ObservedCounts{row.obs_left, row.obs_right}, ell, kSig);
            CHECK(row.action == expect);
            CHECK(row.correct == (row.action == tr.state));
        }
    }

    auto autar = collect(sequential_config(0.6, BehaviorKind::autarkic), 50, 13, 4);
    for (const auto& tr : autar)
        for (const auto& row : tr.agents) {
            const State expect = row.signal >= 0.0 ? State::R : State::L;
            CHECK(row.action == expect);
        }
}

TEST_CASE("results do not depend on the parallelism level") {
    auto cfg = sequential_config(0.25, BehaviorKind::naive);
    BatchSummary s1, s8;
    auto r1 = collect(cfg, 3000, 21, 1, &s1);
    auto r8 = collect(cfg, 3000, 21, 8, &s8);
    require_same_records(r1, r8);

    REQUIRE(s1.n_trials == s8.n_trials);
    REQUIRE(s1.n_positions == s8.n_positions);
    for (int i = 0; i < s1.n_positions; ++i) {
        CHECK(s1.positions[static_cast<std::size_t>(i)].n_correct ==
              s8.positions[static_cast<std::size_t>(i)].n_correct);
        CHECK(s1.positions[static_cast<std::size_t>(i)].accuracy ==
              s8.positions[static_cast<std::size_t>(i)].accuracy);
    }
    REQUIRE(s1.y_bar.size() == s8.y_bar.size());
    for (std::size_t i = 0; i < s1.y_bar.size(); ++i) {
        CHECK(s1.y_bar[i] == s8.y_bar[i]);
        CHECK(s1.y_tilde[i] == s8.y_tilde[i]);
    }
}

TEST_CASE("epsilon = 1 flips every action of observation-free agents") {
    auto cfg0 = sequential_config(0.25, BehaviorKind::autarkic);
    auto cfg1 = cfg0;
    cfg1.epsilon = 1.0;
    const auto plain = run_trial(cfg0, 4242, 0);
    const auto noisy = run_trial(cfg1, 4242, 0);
    REQUIRE(plain.state == noisy.state);
    for (std::size_t i = 0; i < 40; ++i) {
        CHECK(noisy.agents[i].action == opposite(plain.agents[i].action));
        CHECK(noisy.agents[i].correct == (noisy.agents[i].action == noisy.state));
    }
}

TEST_CASE("run_trial rejects an epsilon outside [0,1]") {
    auto cfg = sequential_config(0.25, BehaviorKind::naive);
    cfg.epsilon = -0.1;
    CHECK_THROWS_AS(run_trial(cfg, 1, 0), std::invalid_argument);
    cfg.epsilon = 1.5;
    CHECK_THROWS_AS(run_trial(cfg, 1, 0), std::invalid_argument);
}

TEST_CASE("the uncorrelated-observations design wires its three blocks correctly") {
    TrialConfig cfg;
    cfg.topology = IndependentObservedTopology{};
    cfg.signal = kSig;
    CHECK(topology_agent_count(cfg.topology) == 48);

    const auto tr = run_trial(cfg, 909, 0);
    REQUIRE(tr.agents.size() == 48);
    int first_left = 0, first_right = 0;
    for (int i = 0; i < 32; ++i) {
        const auto& row = tr.agents[static_cast<std::size_t>(i)];
        CHECK(row.q == 0.0);
        CHECK(row.obs_left == 0);
        CHECK(row.obs_right == 0);
        (row.action == State::L ? first_left : first_right) += 1;
    }
    for (int i = 32; i < 48; ++i) {
        const auto& row = tr.agents[static_cast<std::size_t>(i)];
        CHECK(row.q == (i < 40 ? 0.25 : 0.75));
        CHECK(row.obs_left + row.obs_right <= 32);
        CHECK(row.obs_left <= first_left);
        CHECK(row.obs_right <= first_right);
    }
}

TEST_CASE("evaluator-arm aggregates are filled only for the independent design") {
    TrialConfig cfg;
    cfg.topology = IndependentObservedTopology{};
    cfg.signal = kSig;
    auto summary = run_batch(cfg, 5000, 555, 4);
    REQUIRE(summary.y_sparse.size() == 5000);
    REQUIRE(summary.y_dense.size() == 5000);
    CHECK(summary.y_tilde.empty());
    // denser sampling of independent actions is simply more information here
    CHECK(summary.mean(summary.y_dense) > summary.mean(summary.y_sparse));

    auto seq = run_batch(sequential_config(0.25, BehaviorKind::naive), 10, 1, 1);
    CHECK(seq.y_sparse.empty());
    CHECK(seq.y_dense.empty());
    CHECK(seq.y_tilde.size() == 10);
}

TEST_CASE("per-trial aggregates are consistent with the streamed records") {
    auto cfg = sequential_config(0.6, BehaviorKind::naive);
    BatchSummary summary;
    auto records = collect(cfg, 200, 31, 4, &summary);

    std::vector<std::int64_t> n_correct(40, 0);
    for (std::size_t t = 0; t < records.size(); ++t) {
        int total = 0, last8 = 0;
        for (const auto& row : records[t].agents) {
            if (row.correct) {
                ++total;
                n_correct[static_cast<std::size_t>(row.position - 1)] += 1;
                if (row.position > 32) ++last8;
            }
        }
        CHECK(summary.y_bar[t] == doctest::Approx(total / 40.0).epsilon(1e-12));
        CHECK(summary.y_tilde[t] == doctest::Approx(last8 / 8.0).epsilon(1e-12));
    }
    for (int i = 0; i < 40; ++i) {
        const auto& ps = summary.positions[static_cast<std::size_t>(i)];
        CHECK(ps.n_correct == n_correct[static_cast<std::size_t>(i)]);
        CHECK(ps.accuracy == doctest::Approx(n_correct[static_cast<std::size_t>(i)] / 200.0)
                                 .epsilon(1e-12));
        CHECK(ps.binom_se ==
              doctest::Approx(std::sqrt(ps.accuracy * (1.0 - ps.accuracy) / 200.0))
                  .epsilon(1e-12));
    }

    // the per-trial fractions live on the grids their denominators imply
    for (std::size_t t = 0; t < records.size(); ++t) {
        CHECK(summary.y_bar[t] * 40.0 ==
              doctest::Approx(std::round(summary.y_bar[t] * 40.0)).epsilon(1e-9));
        CHECK(summary.y_tilde[t] * 8.0 ==
              doctest::Approx(std::round(summary.y_tilde[t] * 8.0)).epsilon(1e-9));
    }
}

TEST_CASE("dense networks make whole trials swing harder") {
    BatchSummary sparse, dense;
    collect(sequential_config(0.25, BehaviorKind::naive), 2000, 444, 4, &sparse);
    collect(sequential_config(0.75, BehaviorKind::naive), 2000, 444, 4, &dense);
    CHECK(dense.sample_sd(dense.y_bar) > sparse.sample_sd(sparse.y_bar));
    CHECK(dense.sample_sd(dense.y_tilde) > sparse.sample_sd(sparse.y_tilde));
}

TEST_CASE("summary mean and sample SD behave") {
    BatchSummary s;
    CHECK(s.mean({1.0, 2.0}) == doctest::Approx(1.5));
    CHECK(s.sample_sd({1.0, 2.0, 3.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.sample_sd({5.0}) == 0.0);
    CHECK(s.sample_sd({}) == 0.0);
}

TEST_CASE("against-signal counts come out empty for signal-followers") {
    auto records = collect(sequential_config(0.25, BehaviorKind::autarkic), 50, 71, 2);
    auto stats = against_signal_stats(records);
    REQUIRE(stats.all_positions.count(0.25) == 1);
    CHECK(stats.all_positions.at(0.25).n_actions == 50 * 40);
    CHECK(stats.all_positions.at(0.25).n_against == 0);
    CHECK(stats.last_positions.at(0.25).n_against == 0);

    CHECK_THROWS_AS(against_signal_stats({}), std::invalid_argument);
}

TEST_CASE("late contrarian guesses are less reliable in the dense network") {
    auto records = collect(sequential_config(0.25, BehaviorKind::naive), 5000, 72, 4);
    auto dense = collect(sequential_config(0.75, BehaviorKind::naive), 5000, 73, 4);
    records.insert(records.end(), dense.begin(), dense.end());

    auto stats = against_signal_stats(records);
    const auto& sparse_cell = stats.last_positions.at(0.25);
    const auto& dense_cell = stats.last_positions.at(0.75);
    REQUIRE(sparse_cell.n_against > 100);
    REQUIRE(dense_cell.n_against > 100);
    CHECK(dense_cell.conditional_accuracy() < sparse_cell.conditional_accuracy());
    // and late contrarians are more common when everyone sees more neighbors
    CHECK(dense_cell.n_against > sparse_cell.n_against);
}

TEST_CASE("window consensus measure on hand-built trials") {
    std::vector<State> all_r(40, State::R);
    auto wu = window_uncertainty({synthetic_trial(all_r, 0.25)});
    REQUIRE(wu.n_windows == 30);
    REQUIRE(wu.u.size() == 1);
    for (double u : wu.u[0]) CHECK(u == 0.0);

    // five leading R's, the rest L: the window centered at 6 spans 1..11
    std::vector<State> split(40, State::L);
    for (int i = 0; i < 5; ++i) split[static_cast<std::size_t>(i)] = State::R;
    auto wu2 = window_uncertainty({synthetic_trial(split, 0.25)});
    CHECK(wu2.u[0][0] == doctest::Approx(30.0 / 121.0).epsilon(1e-12));
    // windows past the disagreement see unanimous L
    for (int w = 10; w < 30; ++w) CHECK(wu2.u[0][static_cast<std::size_t>(w)] == 0.0);
    CHECK(wu2.mean_u[0] == doctest::Approx(30.0 / 121.0).epsilon(1e-12));
}

TEST_CASE("window consensus is invariant to relabeling via correctness") {
    auto records = collect(sequential_config(0.25, BehaviorKind::naive), 50, 74, 2);
    auto wu = window_uncertainty(records);
    REQUIRE(wu.u.size() == records.size());
    for (std::size_t t = 0; t < records.size(); ++t) {
        for (int w = 0; w < 30; ++w) {
            const int center = 6 + w;
            int n_correct_in_window = 0;
            for (int pos = center - 5; pos <= center + 5; ++pos)
                if (records[t].agents[static_cast<std::size_t>(pos - 1)].correct)
                    ++n_correct_in_window;
            // r(1-r) is the same whether r counts R-actions or correct actions
            const double r = n_correct_in_window / 11.0;
            CHECK(wu.u[t][static_cast<std::size_t>(w)] ==
                  doctest::Approx(r * (1.0 - r)).epsilon(1e-12));
        }
    }
}

TEST_CASE("window consensus rejects records it is not defined for") {
    CHECK_THROWS_AS(window_uncertainty({}), std::invalid_argument);

    std::vector<State> short_trial(39, State::R);
    CHECK_THROWS_AS(window_uncertainty({synthetic_trial(short_trial, 0.25)}),
                    std::invalid_argument);

    TrialConfig cfg;
    cfg.topology = IndependentObservedTopology{};
    cfg.signal = kSig;
    std::vector<TrialRecord> mixed_q;
    run_batch(cfg, 3, 1, 1, [&](const TrialRecord& r) { mixed_q.push_back(r); });
    CHECK_THROWS_AS(window_uncertainty(mixed_q), std::invalid_argument);
}

TEST_CASE("fraction-correct histogram") {
    std::vector<State> all_r(40, State::R);
    auto tr = synthetic_trial(all_r, 0.25);
    tr.state = State::R;
    for (auto& row : tr.agents) row.correct = true;
    auto h = fraction_correct_histogram({tr}, 20);
    REQUIRE(h.n_bins == 20);
    CHECK(h.count[19] == 1);  // a fully-correct trial lands in the top bin
    CHECK(h.mean == doctest::Approx(1.0));
    CHECK(h.sd == 0.0);

    auto records = collect(sequential_config(0.75, BehaviorKind::naive), 300, 75, 2);
    auto h2 = fraction_correct_histogram(records, 20);
    std::int64_t total = 0;
    for (auto c : h2.count) total += c;
    CHECK(total == 300);
    CHECK(h2.sd > 0.0);
    CHECK(h2.bin_width == doctest::Approx(0.05));

    CHECK_THROWS_AS(fraction_correct_histogram({tr}, 0), std::invalid_argument);
    CHECK_THROWS_AS(fraction_correct_histogram({}, 20), std::invalid_argument);
}

#include "netlearn/stats.h"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "netlearn/reference.h"

namespace netlearn {

const char* to_string(SeFlavor f) { return f == SeFlavor::hc1 ? "hc1" : "hc0"; }

OlsResult ols_robust(const std::vector<double>& y,
                     const std::vector<std::vector<double>>& columns,
                     const std::vector<std::string>& names, SeFlavor flavor) {
    const int n = static_cast<int>(y.size());
    const int k = static_cast<int>(columns.size());
    if (k < 1) throw std::invalid_argument("ols_robust: no regressors");
    if (names.size() != columns.size())
        throw std::invalid_argument("ols_robust: one name per column required");
    for (const auto& col : columns)
        if (static_cast<int>(col.size()) != n)
            throw std::invalid_argument("ols_robust: column length does not match y");
    if (n <= k) throw std::invalid_argument("ols_robust: need more observations than parameters");

    Eigen::MatrixXd X(n, k);
    Eigen::VectorXd Y(n);
    for (int i = 0; i < n; ++i) Y(i) = y[static_cast<std::size_t>(i)];
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < n; ++i)
            X(i, j) = columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < k) {
        std::ostringstream msg;
        msg << "ols_robust: rank-deficient design (rank " << qr.rank() << " of " << k
            << " columns)";
        throw std::runtime_error(msg.str());
    }
    const Eigen::VectorXd beta = qr.solve(Y);
    const Eigen::VectorXd resid = Y - X * beta;

    // sandwich covariance: (X'X)^{-1} X' diag(e^2) X (X'X)^{-1}
    const Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::VectorXd e2 = resid.array().square();
    const Eigen::MatrixXd meat = X.transpose() * e2.asDiagonal() * X;
    Eigen::MatrixXd cov = xtx_inv * meat * xtx_inv;
    if (flavor == SeFlavor::hc1)
        cov *= static_cast<double>(n) / static_cast<double>(n - k);

    OlsResult out;
    out.names = names;
    out.n_obs = n;
    out.n_params = k;
    out.flavor = flavor;
    out.coef.resize(static_cast<std::size_t>(k));
    out.se.resize(static_cast<std::size_t>(k));
    out.tstat.resize(static_cast<std::size_t>(k));
    out.pval.resize(static_cast<std::size_t>(k));

    const boost::math::students_t tdist(static_cast<double>(n - k));
    for (int j = 0; j < k; ++j) {
        const auto u = static_cast<std::size_t>(j);
        out.coef[u] = beta(j);
        out.se[u] = cov(j, j) > 0.0 ? std::sqrt(cov(j, j)) : 0.0;
        if (out.se[u] > 0.0) {
            out.tstat[u] = out.coef[u] / out.se[u];
            out.pval[u] = 2.0 * boost::math::cdf(tdist, -std::fabs(out.tstat[u]));
        } else if (out.coef[u] == 0.0) {
            out.tstat[u] = 0.0;
            out.pval[u] = 1.0;
        } else {
            out.tstat[u] = std::copysign(std::numeric_limits<double>::infinity(), out.coef[u]);
            out.pval[u] = 0.0;
        }
    }

    const double ybar = Y.mean();
    const double sst = (Y.array() - ybar).square().sum();
    const double sse = resid.squaredNorm();
    out.r2 = sst > 0.0 ? 1.0 - sse / sst : 0.0;
    out.adj_r2 = 1.0 - (1.0 - out.r2) * static_cast<double>(n - 1) / static_cast<double>(n - k);
    return out;
}

namespace {

double mean_correct(const TrialRecord& tr, std::size_t first, std::size_t last) {
    std::int64_t c = 0;
    for (std::size_t i = first; i <= last; ++i) c += tr.agents[i].correct ? 1 : 0;
    return static_cast<double>(c) / static_cast<double>(last - first + 1);
}

bool misleading(double signal, State state) {
    return (signal > 0.0 && state == State::L) || (signal < 0.0 && state == State::R);
}

void require_sequential(const std::vector<TrialOutcome>& outcomes, const char* who) {
    if (outcomes.empty()) throw std::invalid_argument(std::string(who) + ": no outcomes");
    for (const auto& o : outcomes)
        if (o.independent_topology)
            throw std::invalid_argument(std::string(who) +
                                        ": expects sequential-topology outcomes only");
}

}  // namespace

std::vector<TrialOutcome> trial_outcomes(const std::vector<TrialRecord>& records) {
    if (records.empty()) throw std::invalid_argument("trial_outcomes: no records");
    std::vector<TrialOutcome> out;
    out.reserve(records.size());
    for (const TrialRecord& tr : records) {
        if (tr.agents.empty()) throw std::invalid_argument("trial_outcomes: empty trial");
        const std::size_t n = tr.agents.size();

        TrialOutcome o;
        o.trial_id = tr.trial_id;
        o.y_bar = mean_correct(tr, 0, n - 1);

        bool uniform = true;
        for (const auto& a : tr.agents)
            if (a.q != tr.agents.front().q) uniform = false;

        if (uniform) {
            o.q = tr.agents.front().q;
            const std::size_t tail = std::min<std::size_t>(8, n);
            o.y_tilde = mean_correct(tr, n - tail, n - 1);
            const std::size_t first_fifth = (n + 4) / 5;
            for (std::size_t i = 0; i < first_fifth; ++i)
                if (misleading(tr.agents[i].signal, tr.state)) ++o.misleading_early;
        } else {
            o.independent_topology = true;
            std::set<double> arms;
            for (const auto& a : tr.agents)
                if (a.q > 0.0) arms.insert(a.q);
            if (arms.size() != 2)
                throw std::invalid_argument(
                    "trial_outcomes: mixed-q trial must carry exactly two evaluator densities");
            o.q_sparse = *arms.begin();
            o.q_dense = *arms.rbegin();
            std::int64_t cs = 0, ns = 0, cd = 0, nd = 0;
            for (const auto& a : tr.agents) {
                if (a.q == o.q_sparse) {
                    ++ns;
                    cs += a.correct ? 1 : 0;
                } else if (a.q == o.q_dense) {
                    ++nd;
                    cd += a.correct ? 1 : 0;
                }
            }
            o.y_sparse = static_cast<double>(cs) / static_cast<double>(ns);
            o.y_dense = static_cast<double>(cd) / static_cast<double>(nd);
        }
        out.push_back(o);
    }
    return out;
}

OlsResult density_regression(const std::vector<TrialOutcome>& outcomes, SeFlavor flavor) {
    require_sequential(outcomes, "density_regression");
    std::vector<double> y, ones, q;
    y.reserve(outcomes.size());
    ones.assign(outcomes.size(), 1.0);
    q.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        y.push_back(o.y_tilde);
        q.push_back(o.q);
    }
    return ols_robust(y, {ones, q}, {"const", "network_density"}, flavor);
}

InteractionRegression misleading_interaction_regression(const std::vector<TrialOutcome>& outcomes,
                                                        SeFlavor flavor) {
    require_sequential(outcomes, "misleading_interaction_regression");
    const std::size_t n = outcomes.size();
    std::vector<double> y, ones(n, 1.0), q, m, qm;
    y.reserve(n);
    q.reserve(n);
    m.reserve(n);
    qm.reserve(n);
    for (const auto& o : outcomes) {
        y.push_back(o.y_tilde);
        q.push_back(o.q);
        m.push_back(static_cast<double>(o.misleading_early));
        qm.push_back(o.q * static_cast<double>(o.misleading_early));
    }
    InteractionRegression out;
    out.fit = ols_robust(
        y, {ones, q, m, qm},
        {"const", "network_density", "misleading_early_signals", "network_density_x_misleading"},
        flavor);
    // the two arms sit half a unit of density apart, so the between-arm
    // difference in the per-signal marginal effect is half the interaction term
    out.marginal_effect_difference = out.fit.coef[3] * 0.5;
    return out;
}

OlsResult independent_experiment_regression(const std::vector<TrialOutcome>& outcomes,
                                            SeFlavor flavor) {
    if (outcomes.empty())
        throw std::invalid_argument("independent_experiment_regression: no outcomes");
    for (const auto& o : outcomes)
        if (!o.independent_topology)
            throw std::invalid_argument(
                "independent_experiment_regression: expects mixed-q trials only");
    std::vector<double> y, ones, q;
    y.reserve(2 * outcomes.size());
    q.reserve(2 * outcomes.size());
    for (const auto& o : outcomes) {
        y.push_back(o.y_sparse);
        q.push_back(o.q_sparse);
        y.push_back(o.y_dense);
        q.push_back(o.q_dense);
    }
    ones.assign(y.size(), 1.0);
    return ols_robust(y, {ones, q}, {"const", "network_density"}, flavor);
}

GainFromSocialLearning gain_from_social_learning(const std::vector<TrialOutcome>& outcomes) {
    require_sequential(outcomes, "gain_from_social_learning");
    std::map<double, std::pair<double, std::int64_t>> acc;
    for (const auto& o : outcomes) {
        auto& [sum, count] = acc[o.q];
        sum += o.y_tilde;
        ++count;
    }
    GainFromSocialLearning out;
    for (const auto& [arm, sc] : acc)
        out.mean_gain_by_q[arm] = sc.first / static_cast<double>(sc.second) -
                                  reference::kAutarkyBenchmark;
    return out;
}

std::vector<SweepEntry> robustness_sweep(const std::vector<TrialRecord>& records, int m_min,
                                         int m_max, SeFlavor flavor) {
    if (!(4 <= m_min && m_min <= m_max && m_max <= 12))
        throw std::invalid_argument("robustness_sweep: m range must satisfy 4 <= m_min <= m_max <= 12");
    if (records.empty()) throw std::invalid_argument("robustness_sweep: no records");
    std::vector<double> q;
    q.reserve(records.size());
    for (const TrialRecord& tr : records) {
        if (tr.agents.empty()) throw std::invalid_argument("robustness_sweep: empty trial");
        for (const auto& a : tr.agents)
            if (a.q != tr.agents.front().q)
                throw std::invalid_argument("robustness_sweep: expects fixed-q sequential trials");
        q.push_back(tr.agents.front().q);
    }
    const std::vector<double> ones(records.size(), 1.0);
    std::vector<SweepEntry> out;
    for (int m = m_min; m <= m_max; ++m) {
        std::vector<double> y;
        y.reserve(records.size());
        for (const TrialRecord& tr : records) {
            const std::size_t n = tr.agents.size();
            const std::size_t tail = std::min<std::size_t>(static_cast<std::size_t>(m), n);
            y.push_back(mean_correct(tr, n - tail, n - 1));
        }
        out.push_back({m, ols_robust(y, {ones, q}, {"const", "network_density"}, flavor)});
    }
    return out;
}

namespace {

std::string display_name(const std::string& raw) {
    if (raw == "const") return "Constant";
    std::string out;
    bool up = true;
    for (char c : raw) {
        if (c == '_') {
            up = true;
            continue;
        }
        out += up ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
        up = false;
    }
    return out;
}

const char* stars(double p) { return p < 0.01 ? "***" : p < 0.05 ? "**" : p < 0.1 ? "*" : ""; }

std::string num(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace

std::string table_text(const OlsResult& fit, const std::string& title) {
    // non-constant rows in design order, the intercept last
    std::vector<std::size_t> order;
    std::size_t const_idx = fit.names.size();
    for (std::size_t j = 0; j < fit.names.size(); ++j) {
        if (fit.names[j] == "const")
            const_idx = j;
        else
            order.push_back(j);
    }
    if (const_idx < fit.names.size()) order.push_back(const_idx);

    std::size_t left = std::max<std::size_t>(title.size(), 12);
    for (std::size_t j : order) left = std::max(left, display_name(fit.names[j]).size());
    left += 2;
    const std::size_t right = 14;
    const std::size_t total = left + right;

    std::ostringstream os;
    os << title << "\n" << std::string(total, '=') << "\n";
    for (std::size_t j : order) {
        os << std::left << std::setw(static_cast<int>(left)) << display_name(fit.names[j])
           << std::right << std::setw(static_cast<int>(right))
           << num(fit.coef[j], "%.4f") + stars(fit.pval[j]) << "\n";
        os << std::left << std::setw(static_cast<int>(left)) << ""
           << std::right << std::setw(static_cast<int>(right)) << "(" + num(fit.se[j], "%.4f") + ")"
           << "\n";
    }
    os << std::string(total, '-') << "\n";
    os << std::left << std::setw(static_cast<int>(left)) << "Observations" << std::right
       << std::setw(static_cast<int>(right)) << fit.n_obs << "\n";
    os << std::left << std::setw(static_cast<int>(left)) << "Adjusted R^2" << std::right
       << std::setw(static_cast<int>(right)) << num(fit.adj_r2, "%.3f") << "\n";
    os << std::string(total, '-') << "\n";
    os << "Robust (" << to_string(fit.flavor) << ") standard errors in parentheses\n";
    os << "* p<0.1, ** p<0.05, *** p<0.01\n";
    return os.str();
}

}  // namespace netlearn

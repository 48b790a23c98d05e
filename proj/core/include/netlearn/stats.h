#pragma once

#include <map>
#include <string>
#include <vector>

#include "netlearn/sim.h"

namespace netlearn {

// HC1 (the n/(n-k) small-sample correction) is the default robust-SE flavor;
// HC0 is available since the choice is a convention, not a derivation.
enum class SeFlavor { hc1, hc0 };

const char* to_string(SeFlavor f);

struct OlsResult {
    std::vector<std::string> names;
    std::vector<double> coef;
    std::vector<double> se;     // heteroskedasticity-robust
    std::vector<double> tstat;
    std::vector<double> pval;   // two-sided, t distribution with n-k df
    double r2 = 0.0;
    double adj_r2 = 0.0;
    int n_obs = 0;
    int n_params = 0;
    SeFlavor flavor = SeFlavor::hc1;
};

// Least squares via orthogonal decomposition (rank-revealing), robust
// covariance from the squared residuals. Throws std::invalid_argument on
// shape mismatches and std::runtime_error on a rank-deficient design.
OlsResult ols_robust(const std::vector<double>& y,
                     const std::vector<std::vector<double>>& columns,
                     const std::vector<std::string>& names,
                     SeFlavor flavor = SeFlavor::hc1);

// per-trial aggregates feeding the regressions
struct TrialOutcome {
    std::uint64_t trial_id = 0;
    bool independent_topology = false;
    double q = 0.0;        // the trial's arm (sequential topology)
    double y_tilde = 0.0;  // fraction correct over the last 8 positions
    double y_bar = 0.0;    // fraction correct over all positions
    int misleading_early = 0;  // misleading signals among the first ceil(n/5) agents
    double y_sparse = 0.0;     // evaluator-arm fractions (independent topology)
    double y_dense = 0.0;
    double q_sparse = 0.0;     // the two evaluator densities those fractions belong to
    double q_dense = 0.0;
};

std::vector<TrialOutcome> trial_outcomes(const std::vector<TrialRecord>& records);

// last-8 accuracy on network density (with intercept)
OlsResult density_regression(const std::vector<TrialOutcome>& outcomes,
                             SeFlavor flavor = SeFlavor::hc1);

struct InteractionRegression {
    OlsResult fit;  // const, density, misleading count, density x misleading
    // gamma/2: how much more one misleading early signal hurts on the dense
    // arm than on the sparse arm (the arms are half a unit of q apart)
    double marginal_effect_difference = 0.0;
};

InteractionRegression misleading_interaction_regression(const std::vector<TrialOutcome>& outcomes,
                                                        SeFlavor flavor = SeFlavor::hc1);

// evaluator-arm accuracy on density, two rows per independent-topology trial
OlsResult independent_experiment_regression(const std::vector<TrialOutcome>& outcomes,
                                            SeFlavor flavor = SeFlavor::hc1);

// per-arm mean of (last-8 fraction correct - the published autarky benchmark)
struct GainFromSocialLearning {
    std::map<double, double> mean_gain_by_q;
};

GainFromSocialLearning gain_from_social_learning(const std::vector<TrialOutcome>& outcomes);

// density regressions with the outcome redefined over the last m positions,
// m in [m_min, m_max] within the allowed 4..12 range
struct SweepEntry {
    int m = 0;
    OlsResult fit;
};

std::vector<SweepEntry> robustness_sweep(const std::vector<TrialRecord>& records,
                                         int m_min = 4, int m_max = 12,
                                         SeFlavor flavor = SeFlavor::hc1);

// fixed-width text rendering in the usual journal layout (coefficient rows
// with SEs in parentheses, significance stars, n and adjusted R^2 footer)
std::string table_text(const OlsResult& fit, const std::string& title);

}  // namespace netlearn

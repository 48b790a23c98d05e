#pragma once

#include <string>
#include <vector>

#include "netlearn/model.h"

namespace netlearn {

// The appendix formula for ell (the log-likelihood a naive agent attaches to
// one observed action) and for the action-choice probability can each be read
// more than one way; see the variant comments. Which pair the authors actually
// used is settled empirically by calibrate_variants against their table.
enum class EllVariant {
    printed_formula,  // (2/sigma^2) * (mu + sigma*phi(-mu/sigma)) / (1 - Phi(-mu/sigma)), as typeset
    truncated_mean,   // (2/sigma^2) * (mu + sigma*phi(-mu/sigma) / (1 - Phi(-mu/sigma))):
                      // 2*E[s | s>0, R]/sigma^2 with the truncated-normal mean
    exact_binary,     // ln(Phi(mu/sigma)/Phi(-mu/sigma)): exact LLR of a signal-following action
};

enum class ChoiceVariant {
    printed_argument,  // Phi((sigma*(i-i')*ell - 2*mu*sigma)/2), as typeset
    derived_argument,  // Phi((i-i')*ell*sigma/(2*mu) - mu/sigma): solve the decision
                       // threshold for s and standardize under state R
};

const char* to_string(EllVariant v);
const char* to_string(ChoiceVariant v);

double compute_ell(const SignalParams& params, EllVariant variant);

// P(the entering agent chooses L | state R, i observed L actions, i' observed R actions)
double choice_prob_L(const ObservedCounts& counts, double ell, const SignalParams& params,
                     ChoiceVariant variant);

// Distribution of the (L,R) action counts among the first n agents,
// conditional on state R. k + k' = n always, so it is a vector over k.
struct CountDistribution {
    int n = 0;
    std::vector<double> prob;  // prob[k] = P(k of the first n played L)
};

inline CountDistribution initial_count_distribution() { return {0, {1.0}}; }

// One agent enters: mixes over her binomially-thinned view of the current
// counts and over her resulting action. Throws if q is outside [0,1] or if
// probability mass is not conserved to 1e-9.
CountDistribution step_distribution(const CountDistribution& dist, double q, double ell,
                                    const SignalParams& params, ChoiceVariant variant);

// Per-position probability of the correct action for naive agents on the
// Bernoulli(q) observation network. Conditioning on state L instead must give
// the same curve (checked in tests to 1e-12); the default run conditions on R.
std::vector<double> naive_accuracy_curve(const NetworkParams& net, const SignalParams& params,
                                         EllVariant ell_variant, ChoiceVariant choice_variant,
                                         State conditioned_on = State::R);

struct VariantFit {
    EllVariant ell_variant;
    ChoiceVariant choice_variant;
    double ell_value;
    double max_abs_dev;  // against the 16 reference table entries
};

struct CalibrationReport {
    std::vector<VariantFit> fits;  // all six pairs, best first
    EllVariant ell_variant;        // selected pair
    ChoiceVariant choice_variant;
};

// Evaluates all six (ell, choice) variant pairs at q=1/4 and q=3/4, n=40, and
// selects the pair closest to the reference table. Throws if even the best
// pair misses by 0.01 or more — the formulas would then not match the numbers
// they are supposed to produce, which should never pass silently.
CalibrationReport calibrate_variants(const SignalParams& params);

}  // namespace netlearn

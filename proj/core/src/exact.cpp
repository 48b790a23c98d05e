#include "netlearn/exact.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "netlearn/reference.h"

namespace netlearn {

namespace {

// B(i, k, q): binomial pmf, log-gamma form so nothing overflows as k grows
double binom_pmf(int i, int k, double q) {
    if (i < 0 || i > k) return 0.0;
    if (q == 0.0) return i == 0 ? 1.0 : 0.0;
    if (q == 1.0) return i == k ? 1.0 : 0.0;
    const double lg = std::lgamma(k + 1.0) - std::lgamma(i + 1.0) - std::lgamma(k - i + 1.0);
    return std::exp(lg + i * std::log(q) + (k - i) * std::log1p(-q));
}

// P(the entering agent chooses L | truth, i observed L, i' observed R)
double choice_prob_L_given(int i, int ip, double ell, const SignalParams& p, ChoiceVariant v,
                           State truth) {
    const double d = static_cast<double>(i - ip);
    if (v == ChoiceVariant::derived_argument) {
        // choose L iff 2 mu s / sigma^2 < (i - i') ell, i.e. s below a
        // threshold; standardize the threshold under the truth's signal mean
        const double b = ell * p.sigma / (2.0 * p.mu);
        const double a = p.mu / p.sigma;
        return truth == State::R ? std_normal_cdf(d * b - a) : std_normal_cdf(d * b + a);
    }
    // printed argument, exactly as typeset for truth R; the truth-L value is
    // its mirror image P(choose L | L, i, i') = 1 - P(choose L | R, i', i)
    if (truth == State::R) return std_normal_cdf((p.sigma * d * ell - 2.0 * p.mu * p.sigma) / 2.0);
    return 1.0 - std_normal_cdf((p.sigma * (-d) * ell - 2.0 * p.mu * p.sigma) / 2.0);
}

// tables reused across every (k,k') pair of a curve computation
struct StepTables {
    std::vector<std::vector<double>> binom;  // binom[k][i] = B(i,k,q)
    std::vector<double> phi;                 // phi[d + offset] = choice prob at count diff d
    int offset = 0;

    StepTables(int n_max, double q, double ell, const SignalParams& p, ChoiceVariant v,
               State truth) {
        binom.resize(static_cast<std::size_t>(n_max) + 1);
        for (int k = 0; k <= n_max; ++k) {
            auto& row = binom[static_cast<std::size_t>(k)];
            row.resize(static_cast<std::size_t>(k) + 1);
            for (int i = 0; i <= k; ++i) row[static_cast<std::size_t>(i)] = binom_pmf(i, k, q);
        }
        offset = n_max;
        phi.resize(2 * static_cast<std::size_t>(n_max) + 1);
        for (int d = -n_max; d <= n_max; ++d)
            phi[static_cast<std::size_t>(d + offset)] = choice_prob_L_given(d, 0, ell, p, v, truth);
    }

    // marginalize the thinned observation counts: i ~ B(k,q), i' ~ B(k',q)
    double entry_prob_L(int k, int kp) const {
        const auto& bk = binom[static_cast<std::size_t>(k)];
        const auto& bkp = binom[static_cast<std::size_t>(kp)];
        double tot = 0.0;
        for (int i = 0; i <= k; ++i) {
            const double bi = bk[static_cast<std::size_t>(i)];
            if (bi == 0.0) continue;
            double inner = 0.0;
            for (int ip = 0; ip <= kp; ++ip)
                inner += bkp[static_cast<std::size_t>(ip)] * phi[static_cast<std::size_t>(i - ip + offset)];
            tot += bi * inner;
        }
        return tot;
    }
};

CountDistribution step_with_tables(const CountDistribution& dist, const StepTables& t) {
    CountDistribution next;
    next.n = dist.n + 1;
    next.prob.assign(static_cast<std::size_t>(next.n) + 1, 0.0);
    // accumulate from the smaller count index up, keeping summation order fixed
    for (int k = 0; k <= dist.n; ++k) {
        const double p = dist.prob[static_cast<std::size_t>(k)];
        if (p == 0.0) continue;
        const double w = t.entry_prob_L(k, dist.n - k);
        next.prob[static_cast<std::size_t>(k) + 1] += p * w;
        next.prob[static_cast<std::size_t>(k)] += p * (1.0 - w);
    }
    double mass = 0.0;
    for (double p : next.prob) {
        if (p < 0.0) throw std::runtime_error("count distribution produced a negative probability");
        mass += p;
    }
    if (std::abs(mass - 1.0) > 1e-9)
        throw std::runtime_error("count distribution lost probability mass");
    return next;
}

}  // namespace

const char* to_string(EllVariant v) {
    switch (v) {
        case EllVariant::printed_formula: return "printed-formula";
        case EllVariant::truncated_mean: return "truncated-mean";
        case EllVariant::exact_binary: return "exact-binary";
    }
    return "?";
}

const char* to_string(ChoiceVariant v) {
    switch (v) {
        case ChoiceVariant::printed_argument: return "printed-argument";
        case ChoiceVariant::derived_argument: return "derived-argument";
    }
    return "?";
}

double compute_ell(const SignalParams& params, EllVariant variant) {
    params.validate();
    const double a = params.mu / params.sigma;
    const double s2 = params.sigma * params.sigma;
    switch (variant) {
        case EllVariant::printed_formula:
            return (2.0 / s2) * (params.mu + params.sigma * std_normal_pdf(-a)) / (1.0 - std_normal_cdf(-a));
        case EllVariant::truncated_mean:
            return (2.0 / s2) * (params.mu + params.sigma * std_normal_pdf(-a) / (1.0 - std_normal_cdf(-a)));
        case EllVariant::exact_binary:
            return std::log(std_normal_cdf(a) / std_normal_cdf(-a));
    }
    throw std::invalid_argument("unknown ell variant");
}

double choice_prob_L(const ObservedCounts& counts, double ell, const SignalParams& params,
                     ChoiceVariant variant) {
    params.validate();
    return choice_prob_L_given(counts.n_left, counts.n_right, ell, params, variant, State::R);
}

CountDistribution step_distribution(const CountDistribution& dist, double q, double ell,
                                    const SignalParams& params, ChoiceVariant variant) {
    params.validate();
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("step_distribution: q must lie in [0,1]");
    if (dist.n < 0 || dist.prob.size() != static_cast<std::size_t>(dist.n) + 1)
        throw std::invalid_argument("step_distribution: malformed count distribution");
    StepTables t(dist.n, q, ell, params, variant, State::R);
    return step_with_tables(dist, t);
}

std::vector<double> naive_accuracy_curve(const NetworkParams& net, const SignalParams& params,
                                         EllVariant ell_variant, ChoiceVariant choice_variant,
                                         State conditioned_on) {
    net.validate();
    params.validate();
    // the recursion is O(n^4) in scalar work; keep it honest
    if (net.n_agents > 200)
        throw std::invalid_argument("naive_accuracy_curve: n_agents above the 200-agent guard");

    const double ell = compute_ell(params, ell_variant);
    StepTables t(net.n_agents, net.q, ell, params, choice_variant, conditioned_on);

    std::vector<double> curve;
    curve.reserve(static_cast<std::size_t>(net.n_agents));
    CountDistribution dist = initial_count_distribution();
    for (int pos = 1; pos <= net.n_agents; ++pos) {
        // P(the agent at pos matches the truth | counts so far), summed over
        // the count distribution from the smaller L-count up
        double acc = 0.0;
        for (int k = 0; k <= dist.n; ++k) {
            const double p = dist.prob[static_cast<std::size_t>(k)];
            if (p == 0.0) continue;
            const double w = t.entry_prob_L(k, dist.n - k);
            acc += p * (conditioned_on == State::R ? 1.0 - w : w);
        }
        curve.push_back(acc);
        if (pos < net.n_agents) dist = step_with_tables(dist, t);
    }
    return curve;
}

CalibrationReport calibrate_variants(const SignalParams& params) {
    params.validate();
    constexpr EllVariant ells[] = {EllVariant::printed_formula, EllVariant::truncated_mean,
                                   EllVariant::exact_binary};
    constexpr ChoiceVariant choices[] = {ChoiceVariant::printed_argument,
                                         ChoiceVariant::derived_argument};

    CalibrationReport report;
    for (EllVariant ev : ells) {
        for (ChoiceVariant cv : choices) {
            const auto sparse = naive_accuracy_curve({reference::kQSparse, reference::kAgentsPerTrial},
                                                     params, ev, cv);
            const auto dense = naive_accuracy_curve({reference::kQDense, reference::kAgentsPerTrial},
                                                    params, ev, cv);
            double dev = 0.0;
            for (std::size_t r = 0; r < reference::kNaiveSparse.size(); ++r) {
                const std::size_t pos = static_cast<std::size_t>(reference::kTableFirstPosition) + r;
                dev = std::max(dev, std::abs(sparse[pos - 1] - reference::kNaiveSparse[r]));
                dev = std::max(dev, std::abs(dense[pos - 1] - reference::kNaiveDense[r]));
            }
            report.fits.push_back({ev, cv, compute_ell(params, ev), dev});
        }
    }
    std::stable_sort(report.fits.begin(), report.fits.end(),
                     [](const VariantFit& a, const VariantFit& b) { return a.max_abs_dev < b.max_abs_dev; });

    const VariantFit& best = report.fits.front();
    if (!(best.max_abs_dev < 0.01)) {
        throw std::runtime_error(
            std::string("calibration failed: best variant pair (") + to_string(best.ell_variant) +
            ", " + to_string(best.choice_variant) + ") still deviates by " +
            std::to_string(best.max_abs_dev) + " from the reference table");
    }
    report.ell_variant = best.ell_variant;
    report.choice_variant = best.choice_variant;
    return report;
}

}  // namespace netlearn

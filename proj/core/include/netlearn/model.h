#pragma once

#include <stdexcept>
#include <vector>

#include "netlearn/gaussian.h"
#include "netlearn/rng.h"

namespace netlearn {

enum class State : int { L = 0, R = 1 };

inline char state_char(State s) { return s == State::R ? 'R' : 'L'; }
inline State opposite(State s) { return s == State::R ? State::L : State::R; }

struct SignalParams {
    double mu = 1.0;     // conditional mean magnitude: N(+mu,.) in state R, N(-mu,.) in state L
    double sigma = 2.0;  // conditional standard deviation

    void validate() const {
        if (!(mu > 0.0)) throw std::invalid_argument("SignalParams: mu must be positive");
        if (!(sigma > 0.0)) throw std::invalid_argument("SignalParams: sigma must be positive");
    }
};

struct NetworkParams {
    double q = 0.25;  // probability of observing each predecessor
    int n_agents = 40;

    void validate() const {
        if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("NetworkParams: q must lie in [0,1]");
        if (n_agents < 1) throw std::invalid_argument("NetworkParams: n_agents must be at least 1");
    }
};

// per-agent lists of observed predecessors (1-based positions, lower-triangular)
struct NetworkRealization {
    std::vector<std::vector<int>> neighbors;
};

struct ObservedCounts {
    int n_left = 0;   // observed L actions
    int n_right = 0;  // observed R actions
};

enum class BehaviorKind { naive, autarkic, mixed };

struct BehaviorModel {
    BehaviorKind kind = BehaviorKind::naive;
    double naive_share = 1.0;  // mixed population: P(an agent is naive rather than autarkic)

    void validate() const {
        if (!(naive_share >= 0.0 && naive_share <= 1.0))
            throw std::invalid_argument("BehaviorModel: naive_share must lie in [0,1]");
    }
};

// log f(s|R) - log f(s|L) = 2*mu*s/sigma^2 for the symmetric Gaussian pair
inline double signal_loglik_ratio(double s, const SignalParams& p) {
    return 2.0 * p.mu * s / (p.sigma * p.sigma);
}

// accuracy of deciding from the own signal alone: Phi(mu/sigma)
inline double autarky_accuracy(const SignalParams& p) {
    return std_normal_cdf(p.mu / p.sigma);
}

// Decision of an agent that treats every observed action as an independent
// signal worth +-ell of log-likelihood (each predecessor assumed to have acted
// on her private signal alone). Exact posterior ties follow the sign of the
// own signal, and R at s == 0: a measure-zero event under continuous signals,
// but reachable in floating point, so the rule is fixed for reproducibility.
State naive_decide(double s, const ObservedCounts& counts, double ell, const SignalParams& params);

// one Bernoulli(q) draw per (observer, predecessor) pair
NetworkRealization sample_network(const NetworkParams& net, SplitMix64& rng);

// N(+mu, sigma^2) in state R, N(-mu, sigma^2) in state L; only the
// conditional mean depends on the state, the standard draw is shared
double sample_signal(State state, const SignalParams& params, SplitMix64& rng);

}  // namespace netlearn

#include "netlearn/model.h"

namespace netlearn {

State naive_decide(double s, const ObservedCounts& counts, double ell, const SignalParams& params) {
    const double llr = signal_loglik_ratio(s, params) +
                       ell * static_cast<double>(counts.n_right - counts.n_left);
    if (llr > 0.0) return State::R;
    if (llr < 0.0) return State::L;
    // exact tie: fall back to the own signal, and to R at s == 0
    if (s > 0.0) return State::R;
    if (s < 0.0) return State::L;
    return State::R;
}

NetworkRealization sample_network(const NetworkParams& net, SplitMix64& rng) {
    net.validate();
    NetworkRealization real;
    real.neighbors.resize(static_cast<std::size_t>(net.n_agents));
    for (int i = 1; i <= net.n_agents; ++i) {
        auto& row = real.neighbors[static_cast<std::size_t>(i - 1)];
        for (int j = 1; j < i; ++j) {
            if (rng.uniform01() < net.q) row.push_back(j);
        }
    }
    return real;
}

double sample_signal(State state, const SignalParams& params, SplitMix64& rng) {
    params.validate();
    const double z = rng.gaussian();
    const double mean = state == State::R ? params.mu : -params.mu;
    return mean + params.sigma * z;
}

}  // namespace netlearn

#include "netlearn/bound.h"

#include <cmath>
#include <stdexcept>

namespace netlearn {

NeighborDistribution neighbor_distribution(int position, double q) {
    if (position < 1) throw std::invalid_argument("neighbor_distribution: position must be >= 1");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("neighbor_distribution: q must lie in [0,1]");
    NeighborDistribution d;
    d.weight.assign(static_cast<std::size_t>(position) - 1, 0.0);
    // the most recent observed predecessor is j when i skips j+1..i-1 and hits j
    for (int j = 1; j < position; ++j)
        d.weight[static_cast<std::size_t>(j) - 1] = q * std::pow(1.0 - q, position - 1 - j);
    d.weight_none = std::pow(1.0 - q, position - 1);
    return d;
}

double combine_signal_with_binary_given(double p_neighbor, const SignalParams& params, State truth) {
    params.validate();
    if (!(p_neighbor >= 0.5 && p_neighbor < 1.0))
        throw std::domain_error("combine_signal_with_binary: neighbor accuracy must lie in [0.5, 1)");
    const double a = params.mu / params.sigma;
    const double b = params.sigma / (2.0 * params.mu) * std::log(p_neighbor / (1.0 - p_neighbor));
    if (truth == State::R) {
        // neighbor plays R w.p. p; agent follows her signal against the
        // +-ln(p/(1-p)) shift and is correct when she lands on R
        return p_neighbor * std_normal_cdf(a + b) + (1.0 - p_neighbor) * std_normal_cdf(a - b);
    }
    // truth L: the neighbor plays L w.p. p and the agent is correct when the
    // shifted threshold rule lands on L; standardizing under N(-mu, sigma^2)
    const double correct_given_L_neighbor = std_normal_cdf(b + a);
    const double correct_given_R_neighbor = std_normal_cdf(-b + a);
    return p_neighbor * correct_given_L_neighbor + (1.0 - p_neighbor) * correct_given_R_neighbor;
}

double combine_signal_with_binary(double p_neighbor, const SignalParams& params) {
    return combine_signal_with_binary_given(p_neighbor, params, State::R);
}

std::vector<double> constrained_accuracy_curve(const NetworkParams& net, const SignalParams& params) {
    net.validate();
    params.validate();
    const double aut = autarky_accuracy(params);

    std::vector<double> p;
    p.reserve(static_cast<std::size_t>(net.n_agents));
    p.push_back(aut);
    for (int i = 1; i < net.n_agents; ++i) {
        // agent at position i+1 mixes over who her most recent observed
        // predecessor turns out to be
        const NeighborDistribution nb = neighbor_distribution(i + 1, net.q);
        double tot = nb.weight_none * aut;
        for (int j = 1; j <= i; ++j)
            tot += nb.weight[static_cast<std::size_t>(j) - 1] *
                   combine_signal_with_binary(p[static_cast<std::size_t>(j) - 1], params);
        p.push_back(tot);
    }
    return p;
}

}  // namespace netlearn

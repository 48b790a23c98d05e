#pragma once

#include <vector>

#include "netlearn/model.h"

namespace netlearn {

// Where an agent's one usable observation comes from when she conditions on
// the most recent predecessor she happens to observe: geometric weights over
// predecessors, plus the no-observation atom.
struct NeighborDistribution {
    std::vector<double> weight;  // weight[j-1] = q * (1-q)^(position-1-j), j = 1..position-1
    double weight_none = 1.0;    // (1-q)^(position-1)
};

NeighborDistribution neighbor_distribution(int position, double q);

// Accuracy of the Bayes-optimal rule combining the own Gaussian signal with
// one symmetric binary signal of accuracy p (a neighbor's action):
// p*Phi(a+b) + (1-p)*Phi(a-b) with a = mu/sigma, b = (sigma/(2 mu)) ln(p/(1-p)).
// Throws std::domain_error outside p in [0.5, 1).
double combine_signal_with_binary(double p_neighbor, const SignalParams& params);

// Same quantity derived conditional on a named true state. Both conditionals
// must agree to 1e-12 — the binary signal being state-symmetric is a claim the
// tests verify rather than an assumption baked in.
double combine_signal_with_binary_given(double p_neighbor, const SignalParams& params, State truth);

// Accuracy curve of the constrained strategy profile in which each agent uses
// only her signal and the most recent observed predecessor's action:
//   p_1 = Phi(mu/sigma)
//   p_{i+1} = sum_j q(1-q)^{i-j} combine(p_j) + (1-q)^i Phi(mu/sigma).
// Lower-bounds accuracy under full rationality.
std::vector<double> constrained_accuracy_curve(const NetworkParams& net, const SignalParams& params);

}  // namespace netlearn

#pragma once

#include <array>

// Reference values from the original experiment's analysis. Two kinds live
// here and they are used very differently:
//
//  * model tables (naive accuracy, rational lower bounds) — computed numbers
//    the solvers are calibrated against and tested against;
//  * subject-data point estimates — results of the original behavioral
//    experiment. The raw subject data is not distributed with this tool, so
//    these are documentation constants surfaced in reports, never test
//    targets.
namespace netlearn::reference {

// experimental environment
inline constexpr double kMu = 1.0;
inline constexpr double kSigma = 2.0;
inline constexpr double kQSparse = 0.25;
inline constexpr double kQDense = 0.75;
inline constexpr int kAgentsPerTrial = 40;
inline constexpr int kTrialsPerArm = 130;

// the benchmark an agent achieves from her own signal alone, as published
// (4-decimal rounding of Phi(1/2)); "gain from social learning" is measured
// against this literal value
inline constexpr double kAutarkyBenchmark = 0.6915;

// naive-agent accuracy at positions 33..40 (4 decimals)
inline constexpr int kTableFirstPosition = 33;
inline constexpr std::array<double, 8> kNaiveSparse = {
    0.8773, 0.8780, 0.8786, 0.8792, 0.8797, 0.8801, 0.8805, 0.8808};
inline constexpr std::array<double, 8> kNaiveDense = {
    0.7768, 0.7768, 0.7768, 0.7768, 0.7768, 0.7768, 0.7768, 0.7768};

// lower bounds on rational-agent accuracy, dense network, positions 33..40
inline constexpr std::array<double, 8> kRationalBoundDense = {
    0.9685, 0.9695, 0.9705, 0.9714, 0.9723, 0.9731, 0.9739, 0.9746};

// ---- subject-data point estimates (documentation only) ----

// last-8 accuracy regressed on network density, 260 trials
inline constexpr double kSubjectDensitySlope = -0.0923;
inline constexpr double kSubjectDensitySlopeSe = 0.0406;
inline constexpr double kSubjectDensitySlopeP = 0.0239;
inline constexpr double kSubjectDensityIntercept = 0.802;
inline constexpr double kSubjectDensityInterceptSe = 0.0218;
inline constexpr int kSubjectDensityN = 260;
inline constexpr double kSubjectDensityAdjR2 = 0.016;

// misleading-early-signal interaction specification
inline constexpr double kSubjectInteractionGamma = -0.050;
inline constexpr double kSubjectInteractionGammaSe = 0.030;
inline constexpr double kSubjectInteractionGammaP = 0.0923;
inline constexpr double kSubjectInteractionMisleading = 0.014;
inline constexpr double kSubjectInteractionMisleadingSe = 0.017;
inline constexpr double kSubjectInteractionDensity = 0.033;
inline constexpr double kSubjectInteractionDensitySe = 0.082;
inline constexpr double kSubjectInteractionIntercept = 0.768;
inline constexpr double kSubjectInteractionInterceptSe = 0.045;

// conditionally-independent-neighbors design
inline constexpr double kSubjectIndependentSlope = 0.0865;
inline constexpr double kSubjectIndependentSlopeSe = 0.0417;
inline constexpr double kSubjectIndependentSlopeP = 0.0391;
inline constexpr double kSubjectIndependentIntercept = 0.660;
inline constexpr double kSubjectIndependentInterceptSe = 0.0229;
inline constexpr double kSubjectIndependentMeanSparse = 0.682;
inline constexpr double kSubjectIndependentMeanDense = 0.725;

// gain from social learning (percentage points), last 8 positions
inline constexpr double kSubjectGainSparsePts = 8.73;
inline constexpr double kSubjectGainDensePts = 4.12;

// going against one's signal within the last 8 positions
inline constexpr int kSubjectAgainstSignalCountSparse = 138;
inline constexpr int kSubjectAgainstSignalCountDense = 136;
inline constexpr double kSubjectAgainstSignalAccSparse = 0.8188;
inline constexpr double kSubjectAgainstSignalAccDense = 0.7132;

// standard deviation of per-trial overall accuracy (percentage points)
inline constexpr double kSubjectSdFractionCorrectSparsePts = 9.12;
inline constexpr double kSubjectSdFractionCorrectDensePts = 11.36;

// share of first-position subjects who followed their own signal
inline constexpr double kSubjectFirstPositionSignalUse = 0.938;

}  // namespace netlearn::reference

#pragma once

#include <span>

#include "mixpred/mixture.hpp"

namespace mixpred {

/// Squared Hellinger distance sum_a (sqrt(p_a) - sqrt(q_a))^2, in [0, 2].
double hellinger_sq(std::span<const double> p, std::span<const double> q);

/// KL divergence sum_{a: p_a > 0} p_a ln(p_a / q_a).
/// 0*ln(0/q) = 0; returns +inf when p_a > 0 while q_a = 0.
double kl(std::span<const double> p, std::span<const double> q);

/// Half the L1 distance, in [0, 1].
double total_variation(std::span<const double> p, std::span<const double> q);

inline double hellinger_sq(const PredictiveDistribution& p,
                           const PredictiveDistribution& q) {
  return hellinger_sq(p.probs(), q.probs());
}
inline double kl(const PredictiveDistribution& p,
                 const PredictiveDistribution& q) {
  return kl(p.probs(), q.probs());
}
inline double total_variation(const PredictiveDistribution& p,
                              const PredictiveDistribution& q) {
  return total_variation(p.probs(), q.probs());
}

/// Information gain c_t: posterior-weighted KL from each surviving model's
/// predictive to the mixture predictive. Reads only the mixture state, so
/// it is the same no matter which model is the truth. Always finite: the
/// mixture dominates each positive-posterior model pointwise.
double info_gain(const MixtureState& s);

/// The step-level random variables of one prediction step, evaluated on
/// the current (pre-observation) history.
struct StepDivergences {
  double h = 0.0;   // squared Hellinger between truth and mixture
  double d = 0.0;   // KL(truth || mixture), may be +inf
  double c = 0.0;   // information gain (truth-independent)
  double tv = 0.0;  // total variation
};

StepDivergences step_divergences(const MixtureState& s, int truth);

/// Running sums D_T, H_T, C_T and the sup of log z_t = log(xi/mu) along one
/// sampled path. Sums are plain sequential additions in step order, so a
/// fixed seed reproduces them bit-for-bit.
struct CumulativeTracker {
  double D = 0.0;
  double H = 0.0;
  double C = 0.0;
  long T = 0;
  double sup_log_z = kLogZero;

  void accumulate(const StepDivergences& sd, double log_z) {
    D += sd.d;
    H += sd.h;
    C += sd.c;
    sup_log_z = sup_log_z < log_z ? log_z : sup_log_z;
    ++T;
  }
};

}  // namespace mixpred

#pragma once

#include <vector>

#include "mixpred/divergence.hpp"
#include "mixpred/mixture.hpp"

namespace mixpred {

/// delta is the confidence parameter; w_mu_assumed stands in for the true
/// model's prior weight in the plausible-set test and both bounds. It
/// defaults to the smallest prior weight (1/K under the uniform prior,
/// where the w_mu/w_nu factors cancel).
struct ConfidenceParams {
  double delta;
  double w_mu_assumed;

  ConfidenceParams(double delta_, double w_mu_assumed_);
  static ConfidenceParams with_default_w(const ModelClass& mc, double delta_) {
    return ConfidenceParams(delta_, mc.min_prior());
  }
};

/// The narrowing set of plausible models: model k stays alive while
///   nu_k(omega_{<tau}) / xi(omega_{<tau}) >= delta * w_mu / w_k
/// has held at every tau so far. Flags are monotone; the all-tau
/// quantifier is evaluated incrementally, one test per step.
class PlausibleSet {
 public:
  PlausibleSet(const ModelClass& mc, ConfidenceParams params);

  /// Applies the membership test on the state's current prefix.
  /// Call once per time step, before reading the bound.
  void update(const MixtureState& s);

  bool alive(int k) const { return alive_[static_cast<size_t>(k)]; }
  int alive_count() const { return alive_count_; }
  bool empty() const { return alive_count_ == 0; }
  const ConfidenceParams& params() const { return params_; }

 private:
  ConfidenceParams params_;
  std::vector<char> alive_;
  std::vector<double> log_threshold_;  // log(delta * w_mu / w_k)
  int alive_count_;
};

/// h_hat: sup over plausible models of (w_k / w_mu) * Hellinger^2 between
/// the model's predictive and the mixture predictive. +inf when no model
/// is plausible: the empty sup means the delta-probability bad event
/// already occurred, and a vacuous 0 would fake confidence.
double h_hat(const PlausibleSet& ps, const MixtureState& s);

/// d_hat = c_t / (w_mu * delta).
double d_hat(const MixtureState& s, const ConfidenceParams& params);

/// Hoeffding comparator f_t = sqrt(ln(2/delta) / (2t)).
double hoeffding_f(long t, double delta);

/// Union-bound comparator g_t = sqrt(ln(2t(t+1)/delta) / (2t)).
double hoeffding_g(long t, double delta);

}  // namespace mixpred

#include "mixpred/confidence.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mixpred {

ConfidenceParams::ConfidenceParams(double delta_, double w_mu_assumed_)
    : delta(delta_), w_mu_assumed(w_mu_assumed_) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must be in (0,1)");
  if (!(w_mu_assumed > 0.0 && w_mu_assumed <= 1.0))
    throw std::invalid_argument("w_mu_assumed must be in (0,1]");
}

PlausibleSet::PlausibleSet(const ModelClass& mc, ConfidenceParams params)
    : params_(params),
      alive_(static_cast<size_t>(mc.size()), 1),
      log_threshold_(static_cast<size_t>(mc.size())),
      alive_count_(mc.size()) {
  const double log_dw = std::log(params_.delta) + std::log(params_.w_mu_assumed);
  for (int k = 0; k < mc.size(); ++k)
    log_threshold_[static_cast<size_t>(k)] = log_dw - mc.log_prior(k);
}

void PlausibleSet::update(const MixtureState& s) {
  const int k = static_cast<int>(alive_.size());
  assert(k == s.model_class().size());
  for (int i = 0; i < k; ++i) {
    if (!alive_[static_cast<size_t>(i)]) continue;
    if (s.log_posterior_ratio(i) < log_threshold_[static_cast<size_t>(i)]) {
      alive_[static_cast<size_t>(i)] = 0;
      --alive_count_;
    }
  }
}

double h_hat(const PlausibleSet& ps, const MixtureState& s) {
  if (ps.empty()) return std::numeric_limits<double>::infinity();
  const auto mix = s.mixture_predictive_view();
  const ModelClass& mc = s.model_class();
  double sup = 0.0;
  for (int k = 0; k < mc.size(); ++k) {
    if (!ps.alive(k)) continue;
    const double v =
        mc.prior(k) / ps.params().w_mu_assumed * hellinger_sq(s.model_predictive(k), mix);
    sup = v > sup ? v : sup;
  }
  return sup;
}

double d_hat(const MixtureState& s, const ConfidenceParams& params) {
  return info_gain(s) / (params.w_mu_assumed * params.delta);
}

double hoeffding_f(long t, double delta) {
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must be in (0,1)");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(t)));
}

double hoeffding_g(long t, double delta) {
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must be in (0,1)");
  const double td = static_cast<double>(t);
  return std::sqrt(std::log(2.0 * td * (td + 1.0) / delta) / (2.0 * td));
}

}  // namespace mixpred

#include "mixpred/divergence.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace mixpred {

double hellinger_sq(std::span<const double> p, std::span<const double> q) {
  assert(p.size() == q.size());
  double acc = 0.0;
  for (size_t a = 0; a < p.size(); ++a) {
    const double d = std::sqrt(p[a]) - std::sqrt(q[a]);
    acc += d * d;
  }
  return acc;
}

double kl(std::span<const double> p, std::span<const double> q) {
  assert(p.size() == q.size());
  double acc = 0.0;
  for (size_t a = 0; a < p.size(); ++a) {
    if (p[a] <= 0.0) continue;
    if (q[a] <= 0.0) return std::numeric_limits<double>::infinity();
    acc += p[a] * std::log(p[a] / q[a]);
  }
  // tiny negative values from rounding when p ~= q
  return acc < 0.0 ? 0.0 : acc;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  assert(p.size() == q.size());
  double acc = 0.0;
  for (size_t a = 0; a < p.size(); ++a) acc += std::abs(p[a] - q[a]);
  return 0.5 * acc;
}

double info_gain(const MixtureState& s) {
  const int k = s.model_class().size();
  const auto mix = s.mixture_predictive_view();
  double c = 0.0;
  for (int i = 0; i < k; ++i) {
    const double w = s.posterior(i);
    if (w <= 0.0) continue;
    c += w * kl(s.model_predictive(i), mix);
  }
  return c;
}

StepDivergences step_divergences(const MixtureState& s, int truth) {
  assert(truth >= 0 && truth < s.model_class().size());
  const auto mix = s.mixture_predictive_view();
  const auto mu = s.model_predictive(truth);
  StepDivergences sd;
  sd.h = hellinger_sq(mu, mix);
  sd.d = kl(mu, mix);
  sd.tv = total_variation(mu, mix);
  sd.c = info_gain(s);
  return sd;
}

}  // namespace mixpred

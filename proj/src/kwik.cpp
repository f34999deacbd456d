#include "mixpred/kwik.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "mixpred/rng.hpp"

namespace mixpred {

KwikConfig::KwikConfig(double epsilon_, double delta_,
                       std::shared_ptr<const ModelClass> mc)
    : epsilon(epsilon_), delta(delta_), model_class(std::move(mc)) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must be in (0,1)");
  if (!model_class) throw std::invalid_argument("null model class");
  if (!model_class->uniform_prior())
    throw std::invalid_argument("kwik requires a uniform prior");
}

KwikAction kwik_step(const MixtureState& s, const PlausibleSet& ps,
                     const KwikConfig& cfg) {
  if (h_hat(ps, s) <= cfg.epsilon)
    return KwikAction{s.mixture_predictive()};
  return KwikAction{std::nullopt};
}

KwikRunOutcome kwik_run(const KwikConfig& cfg, int truth, std::uint64_t seed,
                        long horizon) {
  const ModelClass& mc = *cfg.model_class;
  assert(truth >= 0 && truth < mc.size());
  assert(horizon >= 1);

  MixtureState state(cfg.model_class);
  PlausibleSet ps(mc, ConfidenceParams(cfg.delta, 1.0 / mc.size()));
  Rng rng(seed);

  KwikRunOutcome out;
  out.actions.resize(static_cast<size_t>(horizon));
  for (long t = 0; t < horizon; ++t) {
    ps.update(state);
    const auto truth_pred = state.model_predictive(truth);
    const bool confident = h_hat(ps, state) <= cfg.epsilon;
    if (confident) {
      const auto mix = state.mixture_predictive_view();
      if (hellinger_sq(mix, truth_pred) > cfg.epsilon && !out.failed) {
        out.failed = true;
        out.first_fail_step = t;
      }
      const double tv = total_variation(mix, truth_pred);
      out.max_tv_predict = tv > out.max_tv_predict ? tv : out.max_tv_predict;
    } else {
      out.actions[static_cast<size_t>(t)] = 1;
      ++out.bot_count;
    }
    const Symbol a =
        static_cast<Symbol>(sample_index(truth_pred, rng.next_double()));
    state.observe(a);
  }
  out.steps = horizon;
  return out;
}

double bot_bound(int k, double epsilon, double delta, double constant) {
  if (k < 1 || !(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("bot_bound: bad arguments");
  return constant * (static_cast<double>(k) / epsilon) *
         std::log(static_cast<double>(k) / delta);
}

}  // namespace mixpred

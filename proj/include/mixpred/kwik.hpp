#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "mixpred/confidence.hpp"

namespace mixpred {

/// Accuracy epsilon is on the squared-Hellinger scale. The class prior
/// must be uniform; w_mu is taken as 1/K throughout.
struct KwikConfig {
  double epsilon;
  double delta;
  std::shared_ptr<const ModelClass> model_class;

  KwikConfig(double epsilon_, double delta_,
             std::shared_ptr<const ModelClass> mc);
};

/// One agent output: a predictive distribution, or bot (abstain).
struct KwikAction {
  std::optional<PredictiveDistribution> prediction;
  bool is_bot() const { return !prediction.has_value(); }
};

/// Predict the mixture when h_hat <= epsilon, otherwise abstain.
KwikAction kwik_step(const MixtureState& s, const PlausibleSet& ps,
                     const KwikConfig& cfg);

struct KwikRunOutcome {
  bool failed = false;       // some predicting step exceeded epsilon
  long bot_count = 0;
  long steps = 0;
  long first_fail_step = -1;         // 0-based, -1 when never failed
  std::vector<std::uint8_t> actions;  // per step: 1 = bot, 0 = predict
  double max_tv_predict = 0.0;        // max TV(prediction, truth) over predict steps
};

/// Simulates the interaction loop: at each step the agent predicts or
/// abstains, a prediction is adjudicated against the truth's exact
/// predictive, the environment samples omega_t from the truth and reveals
/// it (after bot as well as after predict), and the agent updates. A
/// failed run continues to the horizon with the flag latched so bot
/// statistics stay comparable across runs. Deterministic given seed.
KwikRunOutcome kwik_run(const KwikConfig& cfg, int truth, std::uint64_t seed,
                        long horizon);

/// Comparator constant * (K / epsilon) * ln(K / delta) for the bot budget.
double bot_bound(int k, double epsilon, double delta, double constant);

}  // namespace mixpred

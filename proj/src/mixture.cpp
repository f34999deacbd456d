#include "mixpred/mixture.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace mixpred {

ModelClass::ModelClass(std::vector<std::shared_ptr<const Measure>> models,
                       std::vector<double> prior)
    : models_(std::move(models)),
      prior_(std::move(prior)),
      alphabet_(1),
      min_prior_(1.0),
      uniform_(true) {
  if (models_.empty()) throw std::invalid_argument("empty model class");
  if (prior_.size() != models_.size())
    throw std::invalid_argument("prior size mismatch");
  alphabet_ = models_.front()->alphabet();
  double total = 0.0;
  for (size_t k = 0; k < models_.size(); ++k) {
    if (!models_[k]) throw std::invalid_argument("null model");
    if (!(models_[k]->alphabet() == alphabet_))
      throw std::invalid_argument("models must share one alphabet");
    if (!(prior_[k] > 0.0 && prior_[k] <= 1.0))
      throw std::invalid_argument("prior weights must be in (0,1]");
    total += prior_[k];
    min_prior_ = std::min(min_prior_, prior_[k]);
    if (std::abs(prior_[k] - prior_[0]) > 1e-15) uniform_ = false;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("prior must sum to 1");
  log_prior_.resize(prior_.size());
  for (size_t k = 0; k < prior_.size(); ++k) log_prior_[k] = std::log(prior_[k]);
}

ModelClass ModelClass::uniform(
    std::vector<std::shared_ptr<const Measure>> models) {
  const size_t k = models.size();
  if (k == 0) throw std::invalid_argument("empty model class");
  std::vector<double> prior(k, 1.0 / static_cast<double>(k));
  return ModelClass(std::move(models), std::move(prior));
}

double ModelClass::prior_entropy() const {
  double ent = 0.0;
  for (size_t k = 0; k < prior_.size(); ++k)
    ent -= prior_[k] * log_prior_[k];
  return ent;
}

MixtureState::MixtureState(std::shared_ptr<const ModelClass> mc)
    : class_(std::move(mc)),
      log_model_seq_(static_cast<size_t>(class_->size()), 0.0),
      log_mix_seq_(0.0),
      log_post_(static_cast<size_t>(class_->size())),
      post_(static_cast<size_t>(class_->size())) {
  const int k = class_->size();
  for (int i = 0; i < k; ++i) {
    log_post_[static_cast<size_t>(i)] = class_->log_prior(i);
    post_[static_cast<size_t>(i)] = class_->prior(i);
  }
  pred_cache_.resize(static_cast<size_t>(k) *
                     static_cast<size_t>(class_->alphabet().size()));
  mix_pred_.resize(static_cast<size_t>(class_->alphabet().size()));
}

void MixtureState::refresh_cache() const {
  if (cache_valid_) return;
  const int k = class_->size();
  const int a = class_->alphabet().size();
  std::fill(mix_pred_.begin(), mix_pred_.end(), 0.0);
  for (int i = 0; i < k; ++i) {
    auto row = std::span<double>(pred_cache_).subspan(
        static_cast<size_t>(i) * static_cast<size_t>(a), static_cast<size_t>(a));
    if (eliminated(i)) {
      std::fill(row.begin(), row.end(), 0.0);
      continue;
    }
    class_->model(i).predictive_into(history_, row);
    const double w = post_[static_cast<size_t>(i)];
    if (w > 0.0) {
      for (int s = 0; s < a; ++s) mix_pred_[static_cast<size_t>(s)] += w * row[static_cast<size_t>(s)];
    }
  }
  cache_valid_ = true;
}

void MixtureState::mixture_predictive_into(std::span<double> out) const {
  refresh_cache();
  assert(out.size() == mix_pred_.size());
  std::copy(mix_pred_.begin(), mix_pred_.end(), out.begin());
}

PredictiveDistribution MixtureState::mixture_predictive() const {
  refresh_cache();
  return PredictiveDistribution(mix_pred_);
}

std::span<const double> MixtureState::mixture_predictive_view() const {
  refresh_cache();
  return mix_pred_;
}

std::span<const double> MixtureState::model_predictive(int k) const {
  refresh_cache();
  const auto a = static_cast<size_t>(class_->alphabet().size());
  return std::span<const double>(pred_cache_).subspan(static_cast<size_t>(k) * a, a);
}

void MixtureState::observe(Symbol a) {
  if (!class_->alphabet().contains(a))
    throw std::invalid_argument("symbol outside alphabet");
  refresh_cache();
  const double mix_step = mix_pred_[static_cast<size_t>(a)];
  if (!(mix_step > 0.0))
    throw ImpossibleObservation("mixture assigns probability 0 to symbol");

  const int k = class_->size();
  const int na = class_->alphabet().size();
  log_mix_seq_ += std::log(mix_step);
  for (int i = 0; i < k; ++i) {
    auto& lm = log_model_seq_[static_cast<size_t>(i)];
    if (lm == kLogZero) continue;
    const double step =
        pred_cache_[static_cast<size_t>(i) * static_cast<size_t>(na) + static_cast<size_t>(a)];
    lm = step > 0.0 ? lm + std::log(step) : kLogZero;
  }

  // Bayes-rule identity, then a max-shifted log-sum-exp renormalization to
  // absorb float drift between the two routes to log xi.
  double shift = kLogZero;
  for (int i = 0; i < k; ++i) {
    log_post_[static_cast<size_t>(i)] =
        class_->log_prior(i) + log_model_seq_[static_cast<size_t>(i)] - log_mix_seq_;
    shift = std::max(shift, log_post_[static_cast<size_t>(i)]);
  }
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const double lp = log_post_[static_cast<size_t>(i)];
    if (lp != kLogZero) total += std::exp(lp - shift);
  }
  const double log_total = shift + std::log(total);
  for (int i = 0; i < k; ++i) {
    auto& lp = log_post_[static_cast<size_t>(i)];
    if (lp != kLogZero) lp -= log_total;
    post_[static_cast<size_t>(i)] = lp == kLogZero ? 0.0 : std::exp(lp);
  }

  history_.push_back(a);
  cache_valid_ = false;
}

}  // namespace mixpred

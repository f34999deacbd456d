#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mixpred/measure.hpp"

namespace mixpred {

/// A finite model class with a strictly positive prior summing to 1.
/// All models share one alphabet. Immutable after construction.
class ModelClass {
 public:
  ModelClass(std::vector<std::shared_ptr<const Measure>> models,
             std::vector<double> prior);

  static ModelClass uniform(std::vector<std::shared_ptr<const Measure>> models);

  int size() const { return static_cast<int>(models_.size()); }
  const Measure& model(int k) const { return *models_[static_cast<size_t>(k)]; }
  double prior(int k) const { return prior_[static_cast<size_t>(k)]; }
  double log_prior(int k) const { return log_prior_[static_cast<size_t>(k)]; }
  const Alphabet& alphabet() const { return alphabet_; }
  bool uniform_prior() const { return uniform_; }

  /// Ent(w) = -sum_k w_k ln w_k.
  double prior_entropy() const;

  /// Smallest prior weight; the default stand-in for w_mu when the truth
  /// is unknown (equals 1/K under the uniform prior).
  double min_prior() const { return min_prior_; }

 private:
  std::vector<std::shared_ptr<const Measure>> models_;
  std::vector<double> prior_;
  std::vector<double> log_prior_;
  Alphabet alphabet_;
  double min_prior_;
  bool uniform_;
};

/// Sequential Bayes state over a ModelClass: per-model and mixture log
/// sequence-probabilities, log posterior weights, and the history, updated
/// one observed symbol at a time.
///
/// The posterior is recomputed each step from the identity
///   log w_k(x) = log w_k + log nu_k(x) - log xi(x)
/// and renormalized with a max-shifted log-sum-exp, rather than updated
/// multiplicatively; log xi(x) accumulates the per-step mixture conditionals.
///
/// Single-owner mutable state: may be moved between threads, not shared.
class MixtureState {
 public:
  explicit MixtureState(std::shared_ptr<const ModelClass> mc);

  const ModelClass& model_class() const { return *class_; }
  std::shared_ptr<const ModelClass> class_ptr() const { return class_; }

  /// Number of observed symbols.
  long time() const { return static_cast<long>(history_.size()); }
  std::span<const Symbol> history() const { return history_; }

  /// Advances the state by one observed symbol.
  /// Throws ImpossibleObservation when every model forbids `a`.
  void observe(Symbol a);

  /// xi(.|history): posterior-weighted average of the surviving models'
  /// predictives. `out` must have alphabet size.
  void mixture_predictive_into(std::span<double> out) const;
  PredictiveDistribution mixture_predictive() const;

  /// View of the cached mixture predictive; valid until the next observe.
  std::span<const double> mixture_predictive_view() const;

  /// Cached predictive row of model k at the current history.
  /// Only valid for non-eliminated models.
  std::span<const double> model_predictive(int k) const;

  double log_model_seq(int k) const { return log_model_seq_[static_cast<size_t>(k)]; }
  LogProb log_mix_seq() const { return log_mix_seq_; }
  double log_posterior(int k) const { return log_post_[static_cast<size_t>(k)]; }
  double posterior(int k) const { return post_[static_cast<size_t>(k)]; }

  /// log( nu_k(x) / xi(x) ); -inf for eliminated models.
  double log_posterior_ratio(int k) const {
    return log_model_seq_[static_cast<size_t>(k)] - log_mix_seq_;
  }

  /// A model is eliminated once some observed step had probability 0
  /// under it; it never regains positive posterior.
  bool eliminated(int k) const {
    return log_model_seq_[static_cast<size_t>(k)] == kLogZero;
  }

 private:
  void refresh_cache() const;

  std::shared_ptr<const ModelClass> class_;
  History history_;
  std::vector<double> log_model_seq_;  // log nu_k(history)
  LogProb log_mix_seq_;                // log xi(history)
  std::vector<double> log_post_;       // log w_k(history)
  std::vector<double> post_;           // exp(log_post_)

  // per-step scratch, rebuilt lazily after each observe
  mutable std::vector<double> pred_cache_;  // K x |A| predictive rows
  mutable std::vector<double> mix_pred_;    // |A|
  mutable bool cache_valid_ = false;
};

inline MixtureState new_mixture(std::shared_ptr<const ModelClass> mc) {
  return MixtureState(std::move(mc));
}

}  // namespace mixpred

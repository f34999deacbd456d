#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mixpred/errors.hpp"

namespace mixpred {

/// Index of a symbol in its alphabet.
using Symbol = std::int32_t;

/// A finite alphabet of `size` symbols, identified 0..size-1.
class Alphabet {
 public:
  explicit Alphabet(int size);
  int size() const { return size_; }
  bool contains(Symbol a) const { return a >= 0 && a < size_; }
  bool operator==(const Alphabet& o) const { return size_ == o.size_; }

 private:
  int size_;
};

/// A finite observation sequence; History{} is the empty string.
using History = std::vector<Symbol>;

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// Natural-log probability, in [-inf, 0]. -inf encodes exact zero.
using LogProb = double;

/// One-step distribution over the alphabet: non-negative, sums to 1
/// within 1e-12 (checked at construction).
class PredictiveDistribution {
 public:
  explicit PredictiveDistribution(std::vector<double> probs);
  std::span<const double> probs() const { return probs_; }
  double operator[](Symbol a) const { return probs_[static_cast<size_t>(a)]; }
  int size() const { return static_cast<int>(probs_.size()); }

 private:
  std::vector<double> probs_;
};

/// A probability measure on infinite sequences, presented through its
/// one-step conditionals. Immutable after construction and shareable
/// across threads; `predictive` is a pure function of the history.
class Measure {
 public:
  virtual ~Measure() = default;

  const Alphabet& alphabet() const { return alphabet_; }

  /// Writes the next-symbol distribution given `history` into `out`
  /// (out.size() must equal the alphabet size).
  /// Throws ConditioningOnNullSet if the measure assigns probability 0
  /// to `history` (only possible for the deterministic families; the
  /// i.i.d. families define their conditional for every history).
  virtual void predictive_into(std::span<const Symbol> history,
                               std::span<double> out) const = 0;

  PredictiveDistribution predictive(std::span<const Symbol> history) const;

  virtual std::string name() const = 0;

 protected:
  explicit Measure(Alphabet a) : alphabet_(a) {}
  Alphabet alphabet_;
};

/// log mu(x) by the chain rule; -inf when any step has probability 0;
/// log_prob of the empty history is 0.
LogProb log_prob(const Measure& m, std::span<const Symbol> x);

/// Samples a length-`horizon` sequence by iterating the predictive.
/// Deterministic given (seed, horizon).
History sample(const Measure& m, std::uint64_t seed, int horizon);

// ---------------------------------------------------------------------------
// Concrete families
// ---------------------------------------------------------------------------

/// Bernoulli(theta) on {0,1}: predictive is (1-theta, theta) each step.
/// Degenerate theta in {0,1} is allowed; the conditional is taken from the
/// parameter regardless of the history (i.i.d. convention).
class BernoulliMeasure final : public Measure {
 public:
  explicit BernoulliMeasure(double theta);
  void predictive_into(std::span<const Symbol> history,
                       std::span<double> out) const override;
  double theta() const { return theta_; }
  std::string name() const override;

 private:
  double theta_;
};

/// Fixed distribution p emitted independently each step.
class CategoricalIID final : public Measure {
 public:
  explicit CategoricalIID(std::vector<double> p);
  void predictive_into(std::span<const Symbol> history,
                       std::span<double> out) const override;
  std::string name() const override;

 private:
  std::vector<double> p_;
};

/// Deterministic: emits k ones, then zeros forever.
class OnesThenZeros final : public Measure {
 public:
  explicit OnesThenZeros(int k);
  void predictive_into(std::span<const Symbol> history,
                       std::span<double> out) const override;
  int k() const { return k_; }
  std::string name() const override;

 private:
  int k_;
};

/// Deterministic: an infinite sequence of ones.
class AllOnes final : public Measure {
 public:
  AllOnes();
  void predictive_into(std::span<const Symbol> history,
                       std::span<double> out) const override;
  std::string name() const override;
};

/// Uniform measure: every symbol probability 1/|A| at every step,
/// so mu(x) = |A|^(-len(x)).
class Lebesgue final : public Measure {
 public:
  explicit Lebesgue(Alphabet a);
  void predictive_into(std::span<const Symbol> history,
                       std::span<double> out) const override;
  std::string name() const override;
};

/// Explicit conditional table up to a fixed depth, for oracle tests.
/// Every history up to the depth that the table will be queried on must
/// be set; missing entries are a logic error.
class TableMeasure final : public Measure {
 public:
  TableMeasure(Alphabet a, int depth);
  void set(const History& history, std::vector<double> conditional);
  void predictive_into(std::span<const Symbol> history,
                       std::span<double> out) const override;
  int depth() const { return depth_; }
  std::string name() const override;

 private:
  int depth_;
  std::map<History, std::vector<double>> table_;
};

}  // namespace mixpred

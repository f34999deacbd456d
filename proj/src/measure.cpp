#include "mixpred/measure.hpp"

#include <cassert>
#include <cmath>
#include <numeric>

#include "mixpred/rng.hpp"

namespace mixpred {

Alphabet::Alphabet(int size) : size_(size) {
  if (size < 1) throw std::invalid_argument("alphabet size must be >= 1");
}

PredictiveDistribution::PredictiveDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("distribution does not sum to 1");
}

PredictiveDistribution Measure::predictive(
    std::span<const Symbol> history) const {
  std::vector<double> out(static_cast<size_t>(alphabet_.size()));
  predictive_into(history, out);
  return PredictiveDistribution(std::move(out));
}

LogProb log_prob(const Measure& m, std::span<const Symbol> x) {
  std::vector<double> buf(static_cast<size_t>(m.alphabet().size()));
  double lp = 0.0;
  for (size_t t = 0; t < x.size(); ++t) {
    m.predictive_into(x.first(t), buf);
    const double step = buf[static_cast<size_t>(x[t])];
    if (step <= 0.0) return kLogZero;
    lp += std::log(step);
  }
  return lp;
}

History sample(const Measure& m, std::uint64_t seed, int horizon) {
  assert(horizon >= 0);
  Rng rng(seed);
  History out;
  out.reserve(static_cast<size_t>(horizon));
  std::vector<double> buf(static_cast<size_t>(m.alphabet().size()));
  for (int t = 0; t < horizon; ++t) {
    m.predictive_into(out, buf);
    out.push_back(static_cast<Symbol>(sample_index(buf, rng.next_double())));
  }
  return out;
}

// --- BernoulliMeasure -------------------------------------------------------

BernoulliMeasure::BernoulliMeasure(double theta)
    : Measure(Alphabet(2)), theta_(theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("theta must be in [0,1]");
}

void BernoulliMeasure::predictive_into(std::span<const Symbol> /*history*/,
                                       std::span<double> out) const {
  out[0] = 1.0 - theta_;
  out[1] = theta_;
}

std::string BernoulliMeasure::name() const {
  return "bernoulli(" + std::to_string(theta_) + ")";
}

// --- CategoricalIID ---------------------------------------------------------

CategoricalIID::CategoricalIID(std::vector<double> p)
    : Measure(Alphabet(static_cast<int>(p.size()))), p_(std::move(p)) {
  PredictiveDistribution check(p_);  // validates
}

void CategoricalIID::predictive_into(std::span<const Symbol> /*history*/,
                                     std::span<double> out) const {
  std::copy(p_.begin(), p_.end(), out.begin());
}

std::string CategoricalIID::name() const {
  return "categorical(" + std::to_string(p_.size()) + ")";
}

// --- OnesThenZeros ----------------------------------------------------------

OnesThenZeros::OnesThenZeros(int k) : Measure(Alphabet(2)), k_(k) {
  if (k < 0) throw std::invalid_argument("k must be >= 0");
}

void OnesThenZeros::predictive_into(std::span<const Symbol> history,
                                    std::span<double> out) const {
  const auto len = static_cast<int>(history.size());
  for (int i = 0; i < len; ++i) {
    const Symbol expect = i < k_ ? 1 : 0;
    if (history[static_cast<size_t>(i)] != expect)
      throw ConditioningOnNullSet(name() + " conditioned on impossible prefix");
  }
  const bool emit_one = len < k_;
  out[0] = emit_one ? 0.0 : 1.0;
  out[1] = emit_one ? 1.0 : 0.0;
}

std::string OnesThenZeros::name() const {
  return "ones_then_zeros(" + std::to_string(k_) + ")";
}

// --- AllOnes ----------------------------------------------------------------

AllOnes::AllOnes() : Measure(Alphabet(2)) {}

void AllOnes::predictive_into(std::span<const Symbol> history,
                              std::span<double> out) const {
  for (Symbol s : history) {
    if (s != 1)
      throw ConditioningOnNullSet("all_ones conditioned on impossible prefix");
  }
  out[0] = 0.0;
  out[1] = 1.0;
}

std::string AllOnes::name() const { return "all_ones"; }

// --- Lebesgue ---------------------------------------------------------------

Lebesgue::Lebesgue(Alphabet a) : Measure(a) {}

void Lebesgue::predictive_into(std::span<const Symbol> /*history*/,
                               std::span<double> out) const {
  const double u = 1.0 / static_cast<double>(alphabet_.size());
  std::fill(out.begin(), out.end(), u);
}

std::string Lebesgue::name() const {
  return "lebesgue(" + std::to_string(alphabet_.size()) + ")";
}

// --- TableMeasure -----------------------------------------------------------

TableMeasure::TableMeasure(Alphabet a, int depth) : Measure(a), depth_(depth) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
}

void TableMeasure::set(const History& history, std::vector<double> conditional) {
  if (static_cast<int>(history.size()) > depth_)
    throw std::invalid_argument("history longer than table depth");
  if (static_cast<int>(conditional.size()) != alphabet_.size())
    throw std::invalid_argument("conditional size mismatch");
  PredictiveDistribution check(conditional);  // validates
  table_[history] = std::move(conditional);
}

void TableMeasure::predictive_into(std::span<const Symbol> history,
                                   std::span<double> out) const {
  History key(history.begin(), history.end());
  auto it = table_.find(key);
  if (it == table_.end())
    throw std::logic_error("table_measure: no entry for queried history");
  std::copy(it->second.begin(), it->second.end(), out.begin());
}

std::string TableMeasure::name() const {
  return "table(depth=" + std::to_string(depth_) + ")";
}

}  // namespace mixpred

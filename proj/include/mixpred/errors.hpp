#pragma once

#include <stdexcept>
#include <string>

namespace mixpred {

// Conditioning a measure on a history it assigns probability zero to.
struct ConditioningOnNullSet : std::runtime_error {
  explicit ConditioningOnNullSet(const std::string& what)
      : std::runtime_error(what) {}
};

// Observing a symbol the whole mixture assigns probability zero to,
// i.e. every model in the class forbids it.
struct ImpossibleObservation : std::runtime_error {
  explicit ImpossibleObservation(const std::string& what)
      : std::runtime_error(what) {}
};

// Brute-force enumeration request exceeds the |A|^n guard.
struct InstanceTooLarge : std::runtime_error {
  explicit InstanceTooLarge(const std::string& what)
      : std::runtime_error(what) {}
};

struct UnknownTheoremId : std::runtime_error {
  explicit UnknownTheoremId(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace mixpred

#pragma once

#include <memory>
#include <string>

#include "mixpred/mixture.hpp"

namespace mixpred {

/// A resolved model class plus the index of the sampling truth.
struct ClassSpec {
  std::shared_ptr<const ModelClass> model_class;
  int truth = 0;
  std::string name;
};

/// Built-in class names:
///   appendix   41 Bernoulli models theta_k = k/40, uniform prior, truth 20
///   uniform21  21 Bernoulli models theta_k = k/20, uniform prior, truth 10
///   fixc       {lebesgue, all_ones} on {0,1}, uniform prior, truth 0
///   fixa       {ones_then_zeros(k)} k=0..3, uniform prior, truth 3
///
/// Anything else is treated as a path to a class file (key = value lines,
/// '#' comments; see README for the schema).
ClassSpec resolve_class(const std::string& name_or_path);

/// Parses a class file. Schema:
///   family = bernoulli_grid | bernoulli_list | ones_then_zeros | lebesgue_allones
///   models = <K>                  (bernoulli_grid, ones_then_zeros)
///   thetas = <v1> <v2> ...        (bernoulli_list)
///   prior  = <w1> <w2> ...        (optional, default uniform)
///   truth  = <index>              (optional, default 0)
ClassSpec parse_class_file(const std::string& path);

}  // namespace mixpred

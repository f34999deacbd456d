#include <doctest.h>

#include <cmath>

#include "mixpred/class_config.hpp"
#include "mixpred/mixture.hpp"
#include "mixpred/rng.hpp"

using namespace mixpred;

namespace {

std::shared_ptr<const ModelClass> fixc_class() {
  return resolve_class("fixc").model_class;
}

}  // namespace

TEST_CASE("initial state echoes the prior") {
  auto k1 = std::make_shared<ModelClass>(
      ModelClass::uniform({std::make_shared<BernoulliMeasure>(0.3)}));
  MixtureState s1(k1);
  CHECK(s1.posterior(0) == 1.0);
  auto p = s1.mixture_predictive();
  CHECK(p[0] == doctest::Approx(0.7));
  CHECK(p[1] == doctest::Approx(0.3));

  const auto appendix = resolve_class("appendix").model_class;
  MixtureState s41(appendix);
  for (int k = 0; k < 41; ++k)
    CHECK(s41.posterior(k) == doctest::Approx(1.0 / 41).epsilon(1e-12));
  CHECK(appendix->prior_entropy() == doctest::Approx(3.713572066704308).epsilon(1e-12));

  std::vector<std::shared_ptr<const Measure>> ms{
      std::make_shared<BernoulliMeasure>(0.2),
      std::make_shared<BernoulliMeasure>(0.8)};
  ModelClass skew(ms, {0.25, 0.75});
  CHECK(skew.prior_entropy() == doctest::Approx(0.5623351446188083).epsilon(1e-12));
  MixtureState s(std::make_shared<ModelClass>(skew));
  CHECK(s.log_posterior(0) == doctest::Approx(std::log(0.25)).epsilon(1e-14));
  CHECK(s.log_posterior(1) == doctest::Approx(std::log(0.75)).epsilon(1e-14));
}

TEST_CASE("fixc hand-computed bayes steps") {
  MixtureState s(fixc_class());
  auto p = s.mixture_predictive();
  CHECK(p[1] == doctest::Approx(0.75).epsilon(1e-14));  // 1/2*1/2 + 1/2*1

  // all posterior ratios are 1 at the empty history
  CHECK(s.log_posterior_ratio(0) == 0.0);
  CHECK(s.log_posterior_ratio(1) == 0.0);

  s.observe(1);
  CHECK(s.posterior(0) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(s.posterior(1) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(s.log_posterior_ratio(1) ==
        doctest::Approx(0.28768207245178085).epsilon(1e-12));  // ln(1/0.75)
}

TEST_CASE("zero-probability step eliminates a model for good") {
  std::vector<std::shared_ptr<const Measure>> ms{
      std::make_shared<AllOnes>(), std::make_shared<OnesThenZeros>(0)};
  MixtureState s(std::make_shared<ModelClass>(ModelClass::uniform(ms)));
  s.observe(1);
  CHECK(s.posterior(0) == 1.0);
  CHECK(s.posterior(1) == 0.0);
  CHECK(s.eliminated(1));
  CHECK(s.log_posterior_ratio(1) == kLogZero);
  s.observe(1);
  CHECK(s.eliminated(1));
  CHECK(s.posterior(1) == 0.0);
}

TEST_CASE("single-model class keeps mixture equal to the model") {
  auto k1 = std::make_shared<ModelClass>(
      ModelClass::uniform({std::make_shared<BernoulliMeasure>(0.3)}));
  MixtureState s(k1);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    CHECK(s.posterior(0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s.log_mix_seq() == doctest::Approx(s.log_model_seq(0)).epsilon(1e-12));
    s.observe(static_cast<Symbol>(rng.next_u64() & 1));
  }
}

TEST_CASE("fixa mixture conditional after two ones") {
  const auto fixa = resolve_class("fixa");
  MixtureState s(fixa.model_class);
  s.observe(1);
  s.observe(1);
  auto p = s.mixture_predictive();
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));  // 1/(K-t) with K=4, t=2
  CHECK(std::exp(s.log_mix_seq()) == doctest::Approx(0.5).epsilon(1e-12));  // (K-t)/K
}

TEST_CASE("impossible observation throws") {
  auto mc = std::make_shared<ModelClass>(
      ModelClass::uniform({std::make_shared<AllOnes>()}));
  MixtureState s(mc);
  CHECK_THROWS_AS(s.observe(0), ImpossibleObservation);
}

TEST_CASE("invariants along random paths: dominance, normalization, identity") {
  std::vector<std::shared_ptr<const Measure>> ms;
  for (double th : {0.05, 0.3, 0.5, 0.77, 0.95})
    ms.push_back(std::make_shared<BernoulliMeasure>(th));
  auto mc = std::make_shared<ModelClass>(
      ModelClass(ms, {0.1, 0.2, 0.3, 0.25, 0.15}));

  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    MixtureState s(mc);
    Rng rng = Rng::derive(99, rep);
    for (int t = 0; t < 120; ++t) {
      std::vector<double> p(2);
      s.mixture_predictive_into(p);
      s.observe(static_cast<Symbol>(sample_index(p, rng.next_double())));

      double post_sum = 0.0, path_sum = 0.0;
      for (int k = 0; k < mc->size(); ++k) {
        post_sum += s.posterior(k);
        // dominance: log xi >= log w_k + log nu_k
        CHECK(s.log_mix_seq() >=
              mc->log_prior(k) + s.log_model_seq(k) - 1e-9);
        path_sum += mc->prior(k) * std::exp(s.log_model_seq(k));
      }
      CHECK(post_sum == doctest::Approx(1.0).epsilon(1e-10));
      // two routes to xi(x) agree: accumulated conditionals vs direct sum
      CHECK(std::exp(s.log_mix_seq()) ==
            doctest::Approx(path_sum).epsilon(1e-9));
    }
  }
}

TEST_CASE("model class validation") {
  CHECK_THROWS(ModelClass({}, {}));
  std::vector<std::shared_ptr<const Measure>> ms{
      std::make_shared<BernoulliMeasure>(0.5)};
  CHECK_THROWS(ModelClass(ms, {0.5}));        // does not sum to 1
  CHECK_THROWS(ModelClass(ms, {1.0, 1.0}));   // size mismatch
  std::vector<std::shared_ptr<const Measure>> mixed{
      std::make_shared<BernoulliMeasure>(0.5),
      std::make_shared<Lebesgue>(Alphabet(3))};
  CHECK_THROWS(ModelClass::uniform(mixed));   // alphabet mismatch
}

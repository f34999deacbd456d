#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixpred/class_config.hpp"
#include "mixpred/confidence.hpp"
#include "mixpred/divergence.hpp"
#include "mixpred/kwik.hpp"

namespace mixpred {

struct ExperimentConfig {
  ClassSpec cls;
  double delta = 0.1;
  double epsilon = 0.05;  // kwik only
  long horizon = 300;
  long runs = 20000;
  std::uint64_t master_seed = 1;
  std::string out_path;
  int t_offset = 1;
  std::optional<double> w_mu_override;
  int threads = 0;  // 0 = hardware concurrency
};

/// Per-step records of one sampled path. Index n = 0..horizon-1 holds the
/// quantities evaluated on the prefix of length n, before observing the
/// (n+1)-th symbol; paper time is t = n + 1.
struct RunTrace {
  std::vector<double> h, d, c, h_hat, d_hat, log_z;
  CumulativeTracker totals;
  double sum_d_hat = 0.0;
  double sum_h_hat_capped = 0.0;  // empty-set steps capped at the scale bound
  bool viol_h = false;            // some step had h > h_hat
  bool viol_d = false;            // some step had d > d_hat
  bool truth_ejected = false;     // truth left the plausible set
};

/// Simulates one path sampled from the class's truth model, recording the
/// paper's per-step random variables pre-observation. Deterministic given
/// the seed.
RunTrace simulate_run(const ClassSpec& cls, const ConfidenceParams& params,
                      long horizon, std::uint64_t seed, bool record_steps);

/// Aggregated Monte Carlo batch. Per-record aggregates are present only
/// when built with record_steps; run finals and coverage counts always are.
/// Aggregation is an ordered reduction by run index, so results do not
/// depend on the number of worker threads.
struct MonteCarloBatch {
  long runs = 0;
  long horizon = 0;
  double delta = 0.0;
  double w_mu_assumed = 0.0;

  // per-record (index n), from sqrt-scale h samples
  std::vector<double> q90_sqrt_h;
  std::vector<double> mean_sqrt_h;
  std::vector<double> mean_sqrt_h_hat;  // over runs with nonempty plausible set
  std::vector<long> h_hat_empty;        // runs with empty set at this record
  std::vector<double> mean_d_hat;

  // per-run finals
  std::vector<double> D, H, C, sup_log_z, sum_d_hat, sum_h_hat;
  long viol_h = 0, viol_d = 0, truth_ejected = 0;
};

MonteCarloBatch run_batch(const ClassSpec& cls, const ConfidenceParams& params,
                          long horizon, long runs, std::uint64_t master_seed,
                          int threads, bool record_steps);

/// CSV rows for the appendix experiment table. Row r is taken from record
/// n = r + t_offset; columns are
///   t, q90_h, mean_h_hat, f_t, g_t, mean_h, mean_d_hat
/// with q90_h / mean_h_hat / mean_h on the Hellinger-distance (sqrt) scale
/// and f_t/g_t evaluated at t = r (inf at r = 0).
std::vector<std::array<double, 7>> csv_rows(const MonteCarloBatch& batch,
                                            int t_offset, double delta);

void write_csv(const std::string& path,
               const std::vector<std::array<double, 7>>& rows);

struct AggregateReport {
  std::vector<std::array<double, 7>> rows;
  MonteCarloBatch batch;
};

/// Runs the appendix reproduction (class defaults to `appendix`) and writes
/// the CSV when cfg.out_path is set.
AggregateReport run_appendix_experiment(const ExperimentConfig& cfg);

/// One verdict line: statistic vs bound with the Monte Carlo standard
/// error that the 3-sigma tolerance was computed from (0 for exact checks).
struct VerdictReport {
  std::string id;
  double statistic = 0.0;
  double bound = 0.0;
  double stderr_ = 0.0;
  bool pass = false;
  std::string detail;

  std::string line() const;  // "id\tstatistic\tbound\tstderr\tverdict"
};

/// Theorem ids: T1..T9 and LSM (supermartingale lemma). Probabilistic
/// verdicts use bound + 3 standard errors. `reuse` supplies a prebuilt
/// batch over the same config to avoid resampling.
VerdictReport verify_theorem(const std::string& id, const ExperimentConfig& cfg,
                             const MonteCarloBatch* reuse = nullptr);

struct KwikBatch {
  long runs = 0;
  long failed = 0;
  double max_tv_predict = 0.0;    // over all runs
  double max_tv_nonfailed = 0.0;  // over runs that never failed
  std::vector<long> bot_counts;
  long q90_bot = 0;
  double fitted_constant = 0.0;
};

KwikBatch run_kwik_batch(const KwikConfig& kcfg, int truth, long horizon,
                         long runs, std::uint64_t master_seed, int threads);

/// Exact check of the two-model lower-bound construction: the truncated
/// KL sum along the all-ones prefix must exceed the closed-form bound
/// whenever that bound is positive. Exact, no sampling.
VerdictReport check_prop1(double delta, double w);

/// Exact check of the K deterministic counters class: the exactly computed
/// C lies in (0.5 ln^2 K - 1, 6 ln^2 K + 14 ln K + 8].
VerdictReport check_prop2(int k);

struct ExactExpectations {
  double D = 0.0, H = 0.0, C = 0.0;
  long paths = 0;  // enumerated mu-positive paths
};

/// Exact E[D_n], E[H_n], E[C_n] by enumerating every length-n string with
/// positive truth probability and replaying the mixture on each. Guarded
/// by |A|^n <= 2^20.
ExactExpectations brute_force_expectation(const ClassSpec& cls, int horizon);

}  // namespace mixpred

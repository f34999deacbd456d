#include "mixpred/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mixpred/rng.hpp"

namespace mixpred {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int effective_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, n) on a worker pool. fn must only touch
/// per-index state; results are reduced by the caller in index order.
void parallel_runs(long n, int threads, const std::function<void(long)>& fn) {
  threads = std::min<long>(effective_threads(threads), n);
  if (threads <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const long i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s2 = 0.0;
  for (double x : v) s2 += (x - m) * (x - m);
  const auto n = static_cast<double>(v.size());
  return std::sqrt(s2 / (n - 1.0) / n);
}

double fraction_stderr(double p, long n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

RunTrace simulate_run(const ClassSpec& cls, const ConfidenceParams& params,
                      long horizon, std::uint64_t seed, bool record_steps) {
  const ModelClass& mc = *cls.model_class;
  MixtureState state(cls.model_class);
  PlausibleSet ps(mc, params);
  Rng rng(seed);

  // cap for empty-set h_hat when summing: largest value any real sup can take
  double w_ratio_max = 0.0;
  for (int k = 0; k < mc.size(); ++k)
    w_ratio_max = std::max(w_ratio_max, mc.prior(k) / params.w_mu_assumed);
  const double h_hat_cap = 2.0 * w_ratio_max;

  RunTrace tr;
  if (record_steps) {
    const auto n = static_cast<size_t>(horizon);
    tr.h.reserve(n);
    tr.d.reserve(n);
    tr.c.reserve(n);
    tr.h_hat.reserve(n);
    tr.d_hat.reserve(n);
    tr.log_z.reserve(n);
  }

  for (long n = 0; n < horizon; ++n) {
    ps.update(state);
    const StepDivergences sd = step_divergences(state, cls.truth);
    const double hh = h_hat(ps, state);
    const double dh = sd.c / (params.w_mu_assumed * params.delta);
    const double lz = state.log_mix_seq() - state.log_model_seq(cls.truth);

    tr.totals.accumulate(sd, lz);
    tr.sum_d_hat += dh;
    tr.sum_h_hat_capped += std::min(hh, h_hat_cap);
    tr.viol_h = tr.viol_h || sd.h > hh;
    tr.viol_d = tr.viol_d || sd.d > dh;
    tr.truth_ejected = tr.truth_ejected || !ps.alive(cls.truth);

    if (record_steps) {
      tr.h.push_back(sd.h);
      tr.d.push_back(sd.d);
      tr.c.push_back(sd.c);
      tr.h_hat.push_back(hh);
      tr.d_hat.push_back(dh);
      tr.log_z.push_back(lz);
    }

    const auto mu = state.model_predictive(cls.truth);
    state.observe(static_cast<Symbol>(sample_index(mu, rng.next_double())));
  }
  return tr;
}

MonteCarloBatch run_batch(const ClassSpec& cls, const ConfidenceParams& params,
                          long horizon, long runs, std::uint64_t master_seed,
                          int threads, bool record_steps) {
  MonteCarloBatch b;
  b.runs = runs;
  b.horizon = horizon;
  b.delta = params.delta;
  b.w_mu_assumed = params.w_mu_assumed;
  b.D.resize(static_cast<size_t>(runs));
  b.H.resize(static_cast<size_t>(runs));
  b.C.resize(static_cast<size_t>(runs));
  b.sup_log_z.resize(static_cast<size_t>(runs));
  b.sum_d_hat.resize(static_cast<size_t>(runs));
  b.sum_h_hat.resize(static_cast<size_t>(runs));
  std::vector<std::uint8_t> flags(static_cast<size_t>(runs), 0);

  const auto cells = static_cast<size_t>(runs) * static_cast<size_t>(horizon);
  std::vector<double> m_h, m_hhat, m_dhat;
  if (record_steps) {
    m_h.resize(cells);
    m_hhat.resize(cells);
    m_dhat.resize(cells);
  }

  parallel_runs(runs, threads, [&](long i) {
    RunTrace tr = simulate_run(cls, params, horizon,
                               Rng::derive(master_seed, static_cast<std::uint64_t>(i)).next_u64(),
                               record_steps);
    const auto ui = static_cast<size_t>(i);
    b.D[ui] = tr.totals.D;
    b.H[ui] = tr.totals.H;
    b.C[ui] = tr.totals.C;
    b.sup_log_z[ui] = tr.totals.sup_log_z;
    b.sum_d_hat[ui] = tr.sum_d_hat;
    b.sum_h_hat[ui] = tr.sum_h_hat_capped;
    flags[ui] = static_cast<std::uint8_t>((tr.viol_h ? 1 : 0) | (tr.viol_d ? 2 : 0) |
                                          (tr.truth_ejected ? 4 : 0));
    if (record_steps) {
      const size_t base = ui * static_cast<size_t>(horizon);
      std::copy(tr.h.begin(), tr.h.end(), m_h.begin() + static_cast<long>(base));
      std::copy(tr.h_hat.begin(), tr.h_hat.end(), m_hhat.begin() + static_cast<long>(base));
      std::copy(tr.d_hat.begin(), tr.d_hat.end(), m_dhat.begin() + static_cast<long>(base));
    }
  });

  for (long i = 0; i < runs; ++i) {
    const auto f = flags[static_cast<size_t>(i)];
    b.viol_h += (f & 1) ? 1 : 0;
    b.viol_d += (f & 2) ? 1 : 0;
    b.truth_ejected += (f & 4) ? 1 : 0;
  }

  if (record_steps) {
    const auto nrec = static_cast<size_t>(horizon);
    b.q90_sqrt_h.resize(nrec);
    b.mean_sqrt_h.resize(nrec);
    b.mean_sqrt_h_hat.resize(nrec);
    b.h_hat_empty.resize(nrec);
    b.mean_d_hat.resize(nrec);
    const auto rank = static_cast<size_t>(
        std::ceil(0.9 * static_cast<double>(runs))) - 1;  // 1-based ceil(0.9N)
    std::vector<double> col(static_cast<size_t>(runs));
    for (size_t n = 0; n < nrec; ++n) {
      double sum_sqrt_h = 0.0, sum_sqrt_hhat = 0.0, sum_dhat = 0.0;
      long nonempty = 0;
      for (size_t i = 0; i < static_cast<size_t>(runs); ++i) {
        const size_t at = i * nrec + n;
        col[i] = m_h[at];
        sum_sqrt_h += std::sqrt(m_h[at]);
        const double hh = m_hhat[at];
        if (std::isfinite(hh)) {
          sum_sqrt_hhat += std::sqrt(hh);
          ++nonempty;
        }
        sum_dhat += m_dhat[at];
      }
      std::nth_element(col.begin(), col.begin() + static_cast<long>(rank), col.end());
      b.q90_sqrt_h[n] = std::sqrt(col[rank]);
      b.mean_sqrt_h[n] = sum_sqrt_h / static_cast<double>(runs);
      b.mean_sqrt_h_hat[n] =
          nonempty > 0 ? sum_sqrt_hhat / static_cast<double>(nonempty) : kInf;
      b.h_hat_empty[n] = runs - nonempty;
      b.mean_d_hat[n] = sum_dhat / static_cast<double>(runs);
    }
  }
  return b;
}

std::vector<std::array<double, 7>> csv_rows(const MonteCarloBatch& batch,
                                            int t_offset, double delta) {
  assert(t_offset == 0 || t_offset == 1);
  const long rows = batch.horizon - t_offset;
  std::vector<std::array<double, 7>> out;
  out.reserve(static_cast<size_t>(rows));
  for (long r = 0; r < rows; ++r) {
    const auto n = static_cast<size_t>(r + t_offset);
    out.push_back({static_cast<double>(r), batch.q90_sqrt_h[n],
                   batch.mean_sqrt_h_hat[n],
                   r >= 1 ? hoeffding_f(r, delta) : kInf,
                   r >= 1 ? hoeffding_g(r, delta) : kInf, batch.mean_sqrt_h[n],
                   batch.mean_d_hat[n]});
  }
  return out;
}

void write_csv(const std::string& path,
               const std::vector<std::array<double, 7>>& rows) {
  std::ofstream out(path, std::ios::binary);  // binary: identical bytes everywhere
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "t,q90_h,mean_h_hat,f_t,g_t,mean_h,mean_d_hat\n";
  char buf[256];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%ld,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  static_cast<long>(row[0]), row[1], row[2], row[3], row[4],
                  row[5], row[6]);
    out << buf;
  }
}

AggregateReport run_appendix_experiment(const ExperimentConfig& cfg) {
  const ClassSpec& cls = cfg.cls;
  ConfidenceParams params(cfg.delta, cfg.w_mu_override
                                         ? *cfg.w_mu_override
                                         : cls.model_class->min_prior());
  AggregateReport rep;
  rep.batch = run_batch(cls, params, cfg.horizon, cfg.runs, cfg.master_seed,
                        cfg.threads, /*record_steps=*/true);
  rep.rows = csv_rows(rep.batch, cfg.t_offset, cfg.delta);
  if (!cfg.out_path.empty()) write_csv(cfg.out_path, rep.rows);
  return rep;
}

std::string VerdictReport::line() const {
  std::ostringstream os;
  os << id << '\t' << fmt(statistic) << '\t' << fmt(bound) << '\t'
     << fmt(stderr_) << '\t' << (pass ? "PASS" : "FAIL");
  if (!detail.empty()) os << '\t' << detail;
  return os.str();
}

namespace {

VerdictReport fraction_verdict(std::string id, double frac, double delta,
                               long n, std::string detail) {
  VerdictReport v;
  v.id = std::move(id);
  v.statistic = frac;
  v.stderr_ = fraction_stderr(delta, n);
  v.bound = delta + 3.0 * v.stderr_;
  v.pass = frac <= v.bound;
  v.detail = std::move(detail);
  return v;
}

VerdictReport mean_verdict(std::string id, const std::vector<double>& samples,
                           double bound, std::string detail) {
  VerdictReport v;
  v.id = std::move(id);
  v.statistic = mean_of(samples);
  v.stderr_ = stderr_of(samples);
  v.bound = bound + 3.0 * v.stderr_;
  v.pass = v.statistic <= v.bound;
  v.detail = std::move(detail);
  return v;
}

}  // namespace

KwikBatch run_kwik_batch(const KwikConfig& kcfg, int truth, long horizon,
                         long runs, std::uint64_t master_seed, int threads) {
  KwikBatch kb;
  kb.runs = runs;
  kb.bot_counts.resize(static_cast<size_t>(runs));
  std::vector<std::uint8_t> failed(static_cast<size_t>(runs), 0);
  std::vector<double> tvs(static_cast<size_t>(runs), 0.0);
  parallel_runs(runs, threads, [&](long i) {
    const KwikRunOutcome out =
        kwik_run(kcfg, truth,
                 Rng::derive(master_seed, static_cast<std::uint64_t>(i)).next_u64(),
                 horizon);
    kb.bot_counts[static_cast<size_t>(i)] = out.bot_count;
    failed[static_cast<size_t>(i)] = out.failed ? 1 : 0;
    tvs[static_cast<size_t>(i)] = out.max_tv_predict;
  });
  for (long i = 0; i < runs; ++i) {
    kb.failed += failed[static_cast<size_t>(i)];
    kb.max_tv_predict = std::max(kb.max_tv_predict, tvs[static_cast<size_t>(i)]);
    if (!failed[static_cast<size_t>(i)])
      kb.max_tv_nonfailed = std::max(kb.max_tv_nonfailed, tvs[static_cast<size_t>(i)]);
  }
  std::vector<long> sorted = kb.bot_counts;
  const auto rank =
      static_cast<size_t>(std::ceil(0.9 * static_cast<double>(runs))) - 1;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(rank),
                   sorted.end());
  kb.q90_bot = sorted[rank];
  kb.fitted_constant = static_cast<double>(kb.q90_bot) /
                       bot_bound(kcfg.model_class->size(), kcfg.epsilon,
                                 kcfg.delta, 1.0);
  return kb;
}

VerdictReport verify_theorem(const std::string& id, const ExperimentConfig& cfg,
                             const MonteCarloBatch* reuse) {
  const ClassSpec& cls = cfg.cls;
  const ModelClass& mc = *cls.model_class;
  const double w_mu_true = mc.prior(cls.truth);
  const double delta = cfg.delta;
  ConfidenceParams params(delta,
                          cfg.w_mu_override ? *cfg.w_mu_override : mc.min_prior());

  if (id == "T9") {
    KwikConfig kcfg(cfg.epsilon, delta, cls.model_class);
    const KwikBatch kb = run_kwik_batch(kcfg, cls.truth, cfg.horizon, cfg.runs,
                                        cfg.master_seed, cfg.threads);
    const double frac =
        static_cast<double>(kb.failed) / static_cast<double>(kb.runs);
    auto v = fraction_verdict(
        "T9", frac, delta, kb.runs,
        "fail_frac; q90_bot=" + std::to_string(kb.q90_bot) +
            " fitted_C=" + fmt(kb.fitted_constant) +
            " max_tv_predict=" + fmt(kb.max_tv_predict));
    return v;
  }

  MonteCarloBatch local;
  const MonteCarloBatch* b = reuse;
  if (b == nullptr) {
    local = run_batch(cls, params, cfg.horizon, cfg.runs, cfg.master_seed,
                      cfg.threads, /*record_steps=*/false);
    b = &local;
  }
  const long n = b->runs;

  if (id == "T1") {
    auto v = mean_verdict("T1", b->D, std::log(1.0 / w_mu_true),
                          "mean_H=" + fmt(mean_of(b->H)));
    v.pass = v.pass && mean_of(b->H) <= v.statistic;
    return v;
  }
  if (id == "T2") {
    const double thr = std::log(1.0 / w_mu_true) + 2.0 * std::log(1.0 / delta);
    long count = 0;
    for (double h : b->H) count += h > thr ? 1 : 0;
    return fraction_verdict("T2", static_cast<double>(count) / n, delta, n,
                            "thr=" + fmt(thr));
  }
  if (id == "T3") {
    const double thr = std::exp(1.0) * std::log(6.0 / delta) *
                       (std::log(2.0 / delta) + std::log(1.0 / w_mu_true));
    long count = 0;
    for (double d : b->D) count += d > thr ? 1 : 0;
    return fraction_verdict("T3", static_cast<double>(count) / n, delta, n,
                            "thr=" + fmt(thr));
  }
  if (id == "T4") {
    return mean_verdict("T4", b->C, mc.prior_entropy() / w_mu_true, "");
  }
  if (id == "T5") {
    if (!mc.uniform_prior())
      throw std::invalid_argument("T5 requires a uniform prior");
    const double lk = std::log(static_cast<double>(mc.size()));
    return mean_verdict("T5", b->C, 6.0 * lk * lk + 14.0 * lk + 8.0, "");
  }
  if (id == "T6") {
    const double fh = static_cast<double>(b->viol_h) / n;
    const double fd = static_cast<double>(b->viol_d) / n;
    const double fe = static_cast<double>(b->truth_ejected) / n;
    auto v = fraction_verdict("T6", std::max({fh, fd, fe}), delta, n,
                              "viol_h=" + fmt(fh) + " viol_d=" + fmt(fd) +
                                  " ejected=" + fmt(fe));
    return v;
  }
  if (id == "T7") {
    const double bound = mc.prior_entropy() /
                         (delta * params.w_mu_assumed * params.w_mu_assumed);
    return mean_verdict("T7", b->sum_d_hat, bound, "");
  }
  if (id == "T8") {
    const double w = params.w_mu_assumed;
    const double bound =
        2.0 / w *
        (std::log(1.0 / w) + std::log(1.0 / delta) + mc.prior_entropy());
    return mean_verdict("T8", b->sum_h_hat, bound, "");
  }
  if (id == "LSM") {
    const double thr = -std::log(delta);
    long count = 0;
    for (double z : b->sup_log_z) count += z >= thr ? 1 : 0;
    return fraction_verdict("LSM", static_cast<double>(count) / n, delta, n,
                            "thr_log_z=" + fmt(thr));
  }
  throw UnknownTheoremId("unknown theorem id: " + id);
}

VerdictReport check_prop1(double delta, double w) {
  if (!(delta > 0.0 && delta < 1.0) || !(w > 0.0 && w < 1.0))
    throw std::invalid_argument("prop1: delta and w must be in (0,1)");

  const double log_inv_delta = std::log(1.0 / delta);
  const long n = static_cast<long>(std::floor(log_inv_delta / std::log(2.0)));

  // closed-form chain along the all-ones prefix
  double exact = 0.0;
  for (long t = 1; t <= n + 1; ++t) {
    const double xi_t = w * std::pow(2.0, -static_cast<double>(t)) + (1.0 - w);
    const double xi_tm1 =
        w * std::pow(2.0, -static_cast<double>(t - 1)) + (1.0 - w);
    const double xi1 = xi_t / xi_tm1;
    exact += 0.5 * std::log(0.5 / xi1) + 0.5 * std::log(0.5 / (1.0 - xi1));
  }

  // same chain through the mixture state, as a cross-check of both routes
  std::vector<std::shared_ptr<const Measure>> models;
  models.push_back(std::make_shared<Lebesgue>(Alphabet(2)));
  models.push_back(std::make_shared<AllOnes>());
  auto mc = std::make_shared<ModelClass>(std::move(models),
                                         std::vector<double>{w, 1.0 - w});
  MixtureState state(mc);
  double replay = 0.0;
  for (long t = 1; t <= n + 1; ++t) {
    replay += kl(state.model_predictive(0), state.mixture_predictive_view());
    state.observe(1);
  }
  if (std::abs(replay - exact) > 1e-9)
    throw std::logic_error("prop1: closed form and mixture replay disagree");

  const double formula = 1.0 / (4.0 * std::log(2.0)) * log_inv_delta *
                         (log_inv_delta + 2.0 * std::log((1.0 - w) / w) -
                          3.0 * std::log(2.0));
  VerdictReport v;
  v.id = "prop1";
  v.statistic = exact;
  v.bound = formula;
  v.stderr_ = 0.0;
  v.pass = formula <= 0.0 || exact > formula;  // vacuous when formula <= 0
  v.detail = "n=" + std::to_string(n) + " exact_sum=" + fmt(exact) +
             " formula=" + fmt(formula) +
             (formula <= 0.0 ? " (vacuous)" : "");
  return v;
}

VerdictReport check_prop2(int k) {
  if (k < 2) throw std::invalid_argument("prop2: K must be >= 2");
  std::vector<std::shared_ptr<const Measure>> models;
  for (int i = 0; i < k; ++i) models.push_back(std::make_shared<OnesThenZeros>(i));
  auto mc = std::make_shared<ModelClass>(ModelClass::uniform(std::move(models)));
  const int truth = k - 1;

  // The truth path is deterministic, so C_infinity is an exact sum: c_t is 0
  // once the posterior is a point mass, which happens right after the first
  // zero is observed.
  MixtureState state(mc);
  double c_exact = 0.0;
  const long t_star = static_cast<long>(k) + 2;
  for (long t = 1; t <= t_star; ++t) {
    c_exact += info_gain(state);
    const Symbol a = t <= truth ? 1 : 0;
    state.observe(a);
  }

  const double lk = std::log(static_cast<double>(k));
  const double lower = 0.5 * lk * lk - 1.0;
  const double upper = 6.0 * lk * lk + 14.0 * lk + 8.0;
  VerdictReport v;
  v.id = "prop2";
  v.statistic = c_exact;
  v.bound = upper;
  v.stderr_ = 0.0;
  v.pass = lower < c_exact && c_exact <= upper;
  v.detail = "K=" + std::to_string(k) + " lower=" + fmt(lower) +
             " C_exact=" + fmt(c_exact) + " upper=" + fmt(upper);
  return v;
}

namespace {

// Accumulates mu(x) * (d, h, c) over every mu-positive prefix x of length
// depth = 0..horizon-1, i.e. the exact E[D_horizon], E[H_horizon],
// E[C_horizon]. Zero-probability branches are pruned.
void brute_force_rec(const MixtureState& state, const ClassSpec& cls,
                     double path_mu, int depth, int horizon,
                     ExactExpectations& acc) {
  const StepDivergences sd = step_divergences(state, cls.truth);
  acc.D += path_mu * sd.d;
  acc.H += path_mu * sd.h;
  acc.C += path_mu * sd.c;
  if (depth == horizon - 1) {
    ++acc.paths;
    return;
  }
  const auto mu = state.model_predictive(cls.truth);
  for (Symbol a = 0; a < static_cast<Symbol>(mu.size()); ++a) {
    if (mu[static_cast<size_t>(a)] <= 0.0) continue;
    MixtureState child = state;
    child.observe(a);
    brute_force_rec(child, cls, path_mu * mu[static_cast<size_t>(a)], depth + 1,
                    horizon, acc);
  }
}

}  // namespace

ExactExpectations brute_force_expectation(const ClassSpec& cls, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const double total = std::pow(
      static_cast<double>(cls.model_class->alphabet().size()), horizon);
  if (total > static_cast<double>(1 << 20))
    throw InstanceTooLarge("brute force guard: |A|^n > 2^20");
  ExactExpectations acc;
  MixtureState state(cls.model_class);
  brute_force_rec(state, cls, 1.0, 0, horizon, acc);
  return acc;
}

}  // namespace mixpred

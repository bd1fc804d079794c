#include "mdslb/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mdslb/ctmc.hpp"
#include "mdslb/diffusion.hpp"
#include "mdslb/math_util.hpp"
#include "mdslb/parallel.hpp"
#include "mdslb/rng.hpp"

namespace mdslb {

MetricSample metrics(const QueuePMF& pihat, int64_t n) {
  MetricSample m;
  int K = pihat.K();
  double nn = static_cast<double>(n);
  m.empty_count = nn * pihat.probs[0];
  double large = pihat.tail_mass;
  for (int j = 6; j <= K; ++j) large += pihat.probs[static_cast<size_t>(j)];
  m.large_count = nn * large;
  double mean = static_cast<double>(K + 1) * pihat.tail_mass;
  for (int j = 1; j <= K; ++j) mean += j * pihat.probs[static_cast<size_t>(j)];
  m.mean_len = mean;
  return m;
}

MetricSample metrics_from_counts(const std::vector<int64_t>& counts,
                                 int64_t jobs_total, int64_t n) {
  MetricSample m;
  m.empty_count = counts.empty() ? 0.0 : static_cast<double>(counts[0]);
  int64_t large = 0;
  for (size_t j = 6; j < counts.size(); ++j) large += counts[j];
  m.large_count = static_cast<double>(large);
  m.mean_len = static_cast<double>(jobs_total) / static_cast<double>(n);
  return m;
}

CiInterval percentile_ci(std::vector<double> samples, double level) {
  if (samples.size() < 2) throw ValidationError("need at least 2 samples for a CI");
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("CI level must be in (0,1)");
  std::sort(samples.begin(), samples.end());
  double alpha = 0.5 * (1.0 - level);
  auto quant = [&](double q) {
    double pos = q * static_cast<double>(samples.size() - 1);
    size_t lo = static_cast<size_t>(pos);
    size_t hi = std::min(lo + 1, samples.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return samples[lo] * (1.0 - frac) + samples[hi] * frac;
  };
  return CiInterval{quant(alpha), quant(1.0 - alpha)};
}

CiInterval normal_ci(const std::vector<double>& samples, double level) {
  if (samples.size() < 2) throw ValidationError("need at least 2 samples for a CI");
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("CI level must be in (0,1)");
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / static_cast<double>(samples.size() - 1));
  double z = normal_quantile(1.0 - 0.5 * (1.0 - level));
  return CiInterval{mean - z * sd, mean + z * sd};
}

namespace {

const char* kMetricNames[3] = {"empty_count", "large_count", "mean_len"};

void put_sample(std::vector<std::vector<double>>& raw, size_t base, int64_t rep,
                const MetricSample& m) {
  raw[base + 0][static_cast<size_t>(rep)] = m.empty_count;
  raw[base + 1][static_cast<size_t>(rep)] = m.large_count;
  raw[base + 2][static_cast<size_t>(rep)] = m.mean_len;
}

} // namespace

CoverageReport run_coverage(const SystemParams& base,
                            const std::vector<CoverageCell>& cells,
                            const TruncationConfig& tc, int reps_diff,
                            int reps_ctmc, uint64_t master_seed,
                            const std::string& ci_method, int jobs, double dt,
                            double ode_h) {
  if (cells.empty()) throw ValidationError("coverage grid is empty");
  if (reps_diff < 2 || reps_ctmc < 1) throw ValidationError("too few replicates");
  if (ci_method != "percentile" && ci_method != "normal")
    throw ValidationError("ci method must be percentile or normal");
  tc.validate();

  CoverageReport rep;
  rep.reps_diff = reps_diff;
  rep.reps_ctmc = reps_ctmc;
  rep.master_seed = master_seed;
  rep.ci_method = ci_method;
  rep.raw_diff.assign(cells.size() * 3, std::vector<double>(static_cast<size_t>(reps_diff), 0.0));
  rep.raw_ctmc.assign(cells.size() * 3, std::vector<double>(static_cast<size_t>(reps_ctmc), 0.0));

  for (size_t ci = 0; ci < cells.size(); ++ci) {
    SystemParams p = base;
    p.L = cells[ci].L;
    p.k = cells[ci].k;
    p.validate();

    QueuePMF pi0 = pmf_delta0(tc.K);
    SdeCoeffs coeffs = make_sde_coeffs(pi0, p, tc, dt, ode_h);
    const QueuePMF& piT = coeffs.pi.back();
    size_t rawbase = ci * 3;

    uint64_t stream_diff = 2 * ci;
    uint64_t stream_ctmc = 2 * ci + 1;

    FluctuationVector x0(static_cast<size_t>(tc.K) + 1, 0.0);
    parallel_for(jobs, reps_diff, [&](int64_t i) {
      uint64_t s = derive_seed(master_seed, stream_diff, static_cast<uint64_t>(i));
      SdeTrajectory tr = simulate_sde(x0, coeffs, p, s);
      QueuePMF pihat = reconstruct(piT, tr.x.back(), p.n);
      put_sample(rep.raw_diff, rawbase, i, metrics(pihat, p.n));
    });

    CountVector init = counts_all_empty(p.n);
    std::vector<double> terminal{p.T};
    parallel_for(jobs, reps_ctmc, [&](int64_t i) {
      uint64_t s = derive_seed(master_seed, stream_ctmc, static_cast<uint64_t>(i));
      CtmcTrajectory tr = simulate_ctmc(p, init, terminal, s);
      put_sample(rep.raw_ctmc, rawbase, i,
                 metrics_from_counts(tr.counts.back(), tr.jobs.back(), p.n));
    });

    for (int mi = 0; mi < 3; ++mi) {
      const std::vector<double>& dsamp = rep.raw_diff[rawbase + static_cast<size_t>(mi)];
      const std::vector<double>& csamp = rep.raw_ctmc[rawbase + static_cast<size_t>(mi)];
      CiInterval iv = (ci_method == "normal") ? normal_ci(dsamp, 0.95)
                                              : percentile_ci(dsamp, 0.95);
      int inside = 0;
      double cmean = 0.0;
      for (double v : csamp) {
        if (v >= iv.lo && v <= iv.hi) ++inside;
        cmean += v;
      }
      double dmean = 0.0;
      for (double v : dsamp) dmean += v;
      CoverageRow row;
      row.L = p.L;
      row.k = p.k;
      row.metric = kMetricNames[mi];
      row.ci_lo = iv.lo;
      row.ci_hi = iv.hi;
      row.coverage = static_cast<double>(inside) / static_cast<double>(reps_ctmc);
      row.diff_mean = dmean / static_cast<double>(reps_diff);
      row.ctmc_mean = cmean / static_cast<double>(reps_ctmc);
      rep.rows.push_back(row);
    }
  }
  return rep;
}

BenchResult bench(const SystemParams& p, const TruncationConfig& tc, int trials,
                  uint64_t seed, double dt, double ode_h) {
  p.validate();
  tc.validate();
  if (trials < 1) throw ValidationError("bench needs at least 1 trial");
  using clock = std::chrono::steady_clock;
  BenchResult out;
  out.trials = trials;

  CountVector init = counts_all_empty(p.n);
  std::vector<double> terminal{p.T};
  // one warmup trial each, excluded from timing
  (void)simulate_ctmc(p, init, terminal, derive_seed(seed, 100, 0));

  uint64_t events = 0;
  auto t0 = clock::now();
  for (int i = 0; i < trials; ++i) {
    CtmcTrajectory tr = simulate_ctmc(p, init, terminal, derive_seed(seed, 101, static_cast<uint64_t>(i)));
    events += tr.events;
  }
  auto t1 = clock::now();
  out.ctmc_secs_per_trial =
      std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(trials);
  out.events_per_trial = static_cast<double>(events) / static_cast<double>(trials);

  auto t2 = clock::now();
  SdeCoeffs coeffs = make_sde_coeffs(pmf_delta0(tc.K), p, tc, dt, ode_h);
  auto t3 = clock::now();
  out.ode_secs = std::chrono::duration<double>(t3 - t2).count();

  FluctuationVector x0(static_cast<size_t>(tc.K) + 1, 0.0);
  (void)simulate_sde(x0, coeffs, p, derive_seed(seed, 102, 0));
  auto t4 = clock::now();
  for (int i = 0; i < trials; ++i)
    (void)simulate_sde(x0, coeffs, p, derive_seed(seed, 103, static_cast<uint64_t>(i)));
  auto t5 = clock::now();
  out.sde_secs_per_trial =
      std::chrono::duration<double>(t5 - t4).count() / static_cast<double>(trials);
  out.speedup = out.ctmc_secs_per_trial / out.sde_secs_per_trial;
  return out;
}

} // namespace mdslb

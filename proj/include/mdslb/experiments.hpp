#ifndef MDSLB_EXPERIMENTS_HPP
#define MDSLB_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mdslb/types.hpp"

namespace mdslb {

// Count-scale summary of one terminal state: servers with empty queues,
// servers with more than 5 tasks (length >= 6), and tasks per server.
struct MetricSample {
  double empty_count = 0.0;
  double large_count = 0.0;
  double mean_len = 0.0;
};

// From an empirical-scale pmf. Tail mass counts toward large_count and is
// floored at length K+1 for the mean.
MetricSample metrics(const QueuePMF& pihat, int64_t n);

// From exact chain counts; mean uses the running task total.
MetricSample metrics_from_counts(const std::vector<int64_t>& counts,
                                 int64_t jobs_total, int64_t n);

struct CiInterval {
  double lo = 0.0, hi = 0.0;
};

// Equal-tailed empirical interval, linear interpolation between order
// statistics. level = 0.95 uses the 2.5% and 97.5% quantiles.
CiInterval percentile_ci(std::vector<double> samples, double level);

// mean +- z * sample standard deviation
CiInterval normal_ci(const std::vector<double>& samples, double level);

struct CoverageCell {
  int L = 0, k = 0;
};

struct CoverageRow {
  int L = 0, k = 0;
  std::string metric;
  double ci_lo = 0.0, ci_hi = 0.0;
  double coverage = 0.0;   // fraction of chain replicates inside the CI
  double diff_mean = 0.0;  // mean of the diffusion samples
  double ctmc_mean = 0.0;  // mean of the chain samples
};

struct CoverageReport {
  std::vector<CoverageRow> rows;
  int reps_diff = 0, reps_ctmc = 0;
  uint64_t master_seed = 0;
  std::string ci_method;
  // raw per-replicate terminal metrics, row-aligned with rows[] cells
  std::vector<std::vector<double>> raw_diff;  // [cell*3 + metric][rep]
  std::vector<std::vector<double>> raw_ctmc;
};

// For each (L,k) cell: solve the limit, cache diffusion coefficients, run
// reps_diff diffusion replicates and reps_ctmc chain replicates from the
// empty state, build the CI from the diffusion samples per metric, and
// report the fraction of chain replicates covered. Replicate seeds come
// from derive_seed(master, stream, index) with one stream per (cell, side),
// so results do not depend on thread count.
CoverageReport run_coverage(const SystemParams& base,
                            const std::vector<CoverageCell>& cells,
                            const TruncationConfig& tc, int reps_diff,
                            int reps_ctmc, uint64_t master_seed,
                            const std::string& ci_method, int jobs, double dt,
                            double ode_h);

struct BenchResult {
  int trials = 0;
  double ctmc_secs_per_trial = 0.0;
  double sde_secs_per_trial = 0.0;
  double ode_secs = 0.0; // one-time limit solve + coefficient cache
  double speedup = 0.0;  // ctmc / sde, per trial
  double events_per_trial = 0.0;
};

// Wall-clock comparison of one chain trial vs one diffusion trial at the
// same parameters, deterministic coefficients amortized separately.
BenchResult bench(const SystemParams& p, const TruncationConfig& tc, int trials,
                  uint64_t seed, double dt, double ode_h);

} // namespace mdslb

#endif

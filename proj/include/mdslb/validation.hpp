#ifndef MDSLB_VALIDATION_HPP
#define MDSLB_VALIDATION_HPP

#include <cstdint>
#include <vector>

#include "mdslb/types.hpp"

namespace mdslb {

struct LlnResult {
  std::vector<int64_t> ns;
  std::vector<double> mean_err; // mean over reps of sup_t d0(chain, limit)
  double slope = 0.0;           // log-log regression slope
  bool decreasing = false;
  bool slope_ok = false;
  bool pass = false;
};

// Chain-vs-limit distance study. d0 weights coordinate j by 2^-j; the two
// tail masses are compared at weight 2^-K. Error per replicate is the sup
// over the dt-spaced sample grid.
LlnResult lln_convergence_study(const SystemParams& base,
                                const std::vector<int64_t>& ns, int reps,
                                const TruncationConfig& tc, uint64_t seed,
                                int jobs, double dt, double ode_h);

struct CovariationResult {
  double t0 = 0.0, delta = 0.0;
  int reps = 0;
  double max_z = 0.0;
  int worst_i = 0, worst_j = 0;
  bool pass = false;
};

// Short-window increment covariance against the local covariance operator:
// from one chain state at t0, replay many windows of length delta, center
// the scaled compensated increments, and compare their sample covariance
// entrywise to delta * Phi(pi(t0)) on coordinates 0..6 in units of the
// sample covariance standard error. Passes at 5 sigma. Entries touching a
// coordinate with less than a quarter event quantum (1/n) of sample
// variance are skipped; they carry no usable covariance signal.
CovariationResult covariation_check(const SystemParams& p,
                                    const TruncationConfig& tc, double t0,
                                    double delta, int reps, uint64_t seed,
                                    int jobs, double dt, double ode_h);

} // namespace mdslb

#endif

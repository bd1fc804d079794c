#ifndef MDSLB_DIFFUSION_HPP
#define MDSLB_DIFFUSION_HPP

#include <cstdint>
#include <vector>

#include "mdslb/fluid.hpp"
#include "mdslb/types.hpp"

namespace mdslb {

// Deterministic limit and diffusion coefficients cached on the time grid:
// pi(t_m) plus a(t_m) = sqrt_psd(Phi(pi(t_m))). Shared by every replicate.
struct SdeCoeffs {
  std::vector<double> times;
  std::vector<QueuePMF> pi;
  std::vector<CovMatrix> a;
};

SdeCoeffs make_sde_coeffs(const QueuePMF& pi0, const SystemParams& p,
                          const TruncationConfig& tc, double dt, double ode_h);

struct SdeTrajectory {
  std::vector<double> times;
  std::vector<FluctuationVector> x;
  double max_zero_sum_drift = 0.0; // largest |sum x| removed per step
  bool projection_flagged = false; // any step needed more than 1e-6
};

// Euler scheme on the fluctuation SDE: per grid step,
//   X += G(X, pi(t_m)) dt + a(t_m) sqrt(dt) xi,   xi iid standard normal,
// then X is projected back onto the zero-sum hyperplane; the projected
// magnitude is tracked and flagged past 1e-6 per step.
SdeTrajectory simulate_sde(const FluctuationVector& x0, const SdeCoeffs& coeffs,
                           const SystemParams& p, uint64_t seed);

// Empirical-scale pmf recovered from the limit state and a fluctuation:
// coordinates pi_j + x_j / sqrt(n), tail mass carried over.
QueuePMF reconstruct(const QueuePMF& pi, const FluctuationVector& x, int64_t n);

} // namespace mdslb

#endif

#ifndef MDSLB_FLUID_HPP
#define MDSLB_FLUID_HPP

#include <vector>

#include "mdslb/types.hpp"

namespace mdslb {

struct FluidTrajectory {
  std::vector<double> times;
  std::vector<QueuePMF> states; // tail_mass carries the accumulated leak
  double max_step_err = 0.0;    // worst l1 gap against the half-step shadow
  double max_mass_defect = 0.0; // worst |sum + leak - 1| before output cleanup
  double max_clamp = 0.0;       // largest negative coordinate magnitude zeroed
};

// Fixed-step RK4 on the truncated deterministic limit, coordinates 0..K plus
// one leak component with derivative lambda L! zeta_bar(K, pi), so total
// mass is a conserved linear invariant. A shadow state advanced at h/2
// bounds the discretization error at every grid time (NumericalError past
// 1e-6). Output states are clamped at 0 (coordinates below -1e-12 raise
// NumericalError) and scaled so coordinates sum to 1 - leak.
FluidTrajectory solve_ode(const QueuePMF& pi0, const SystemParams& p,
                          const TruncationConfig& tc, double h,
                          const std::vector<double>& grid);

// Same integrator for the d-choice drift.
FluidTrajectory solve_ode_powerd(const QueuePMF& pi0, double lambda, int d,
                                 const TruncationConfig& tc, double h,
                                 const std::vector<double>& grid);

// Uniform grid 0, dt, 2dt, ..., T (last point clamped to T).
std::vector<double> uniform_grid(double T, double dt);

} // namespace mdslb

#endif

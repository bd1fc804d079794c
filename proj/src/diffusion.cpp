#include "mdslb/diffusion.hpp"

#include <cmath>

#include "mdslb/covariance.hpp"
#include "mdslb/drift.hpp"
#include "mdslb/rng.hpp"

namespace mdslb {

SdeCoeffs make_sde_coeffs(const QueuePMF& pi0, const SystemParams& p,
                          const TruncationConfig& tc, double dt, double ode_h) {
  std::vector<double> grid = uniform_grid(p.T, dt);
  FluidTrajectory fl = solve_ode(pi0, p, tc, ode_h, grid);
  SdeCoeffs c;
  c.times = fl.times;
  c.pi = fl.states;
  c.a.reserve(c.pi.size());
  for (const QueuePMF& r : c.pi) c.a.push_back(sqrt_psd(phi_matrix(r, p)));
  return c;
}

SdeTrajectory simulate_sde(const FluctuationVector& x0, const SdeCoeffs& coeffs,
                           const SystemParams& p, uint64_t seed) {
  size_t M = coeffs.times.size();
  if (M == 0 || coeffs.pi.size() != M || coeffs.a.size() != M)
    throw ValidationError("sde coefficients are inconsistent");
  int K = coeffs.pi[0].K();
  if (static_cast<int>(x0.size()) != K + 1)
    throw ValidationError("x0 must have K+1 coordinates");

  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SdeTrajectory out;
  out.times = coeffs.times;
  out.x.reserve(M);
  FluctuationVector x = x0;
  out.x.push_back(x);
  std::vector<double> xi(static_cast<size_t>(K) + 1);
  std::vector<double> noise(static_cast<size_t>(K) + 1);
  for (size_t m = 0; m + 1 < M; ++m) {
    double dt = coeffs.times[m + 1] - coeffs.times[m];
    double sq = std::sqrt(dt);
    std::vector<double> G = drift_G(x, coeffs.pi[m], p, K);
    for (int j = 0; j <= K; ++j) xi[static_cast<size_t>(j)] = gauss(rng);
    const CovMatrix& a = coeffs.a[m];
    for (int i = 0; i <= K; ++i) {
      double acc = 0.0;
      for (int j = 0; j <= K; ++j) acc += a.at(i, j) * xi[static_cast<size_t>(j)];
      noise[static_cast<size_t>(i)] = acc;
    }
    for (int j = 0; j <= K; ++j)
      x[static_cast<size_t>(j)] += G[static_cast<size_t>(j)] * dt + sq * noise[static_cast<size_t>(j)];
    double s = 0.0;
    for (double v : x) s += v;
    out.max_zero_sum_drift = std::max(out.max_zero_sum_drift, std::fabs(s));
    if (std::fabs(s) > 1e-6) out.projection_flagged = true;
    double adj = s / static_cast<double>(K + 1);
    for (double& v : x) v -= adj;
    out.x.push_back(x);
  }
  return out;
}

QueuePMF reconstruct(const QueuePMF& pi, const FluctuationVector& x, int64_t n) {
  if (x.size() != pi.probs.size())
    throw ValidationError("fluctuation size does not match pmf");
  QueuePMF out = pi;
  double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (size_t j = 0; j < out.probs.size(); ++j) out.probs[j] += x[j] * s;
  return out;
}

} // namespace mdslb

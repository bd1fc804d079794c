#include "mdslb/fluid.hpp"

#include <cmath>
#include <functional>

#include "mdslb/rates.hpp"

namespace mdslb {

std::vector<double> uniform_grid(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw ValidationError("grid needs T > 0 and dt > 0");
  int M = static_cast<int>(std::ceil(T / dt - 1e-9));
  std::vector<double> g;
  g.reserve(static_cast<size_t>(M) + 1);
  for (int m = 0; m < M; ++m) g.push_back(m * dt);
  g.push_back(T);
  return g;
}

namespace {

using RhsFn = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct Rk4 {
  std::vector<double> k1, k2, k3, k4, tmp;

  void step(const RhsFn& rhs, std::vector<double>& y, double h) {
    size_t d = y.size();
    k1.resize(d); k2.resize(d); k3.resize(d); k4.resize(d); tmp.resize(d);
    rhs(y, k1);
    for (size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(tmp, k2);
    for (size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(tmp, k3);
    for (size_t i = 0; i < d; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(tmp, k4);
    for (size_t i = 0; i < d; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
};

FluidTrajectory solve_generic(const QueuePMF& pi0, const TruncationConfig& tc,
                              double h, const std::vector<double>& grid,
                              const RhsFn& rhs) {
  tc.validate();
  pi0.check();
  if (pi0.K() != tc.K)
    throw ValidationError("initial pmf must have K+1 coordinates");
  if (!(h > 0.0)) throw ValidationError("step size must be positive");
  if (grid.empty()) throw ValidationError("empty sample grid");
  int K = tc.K;

  std::vector<double> y(static_cast<size_t>(K) + 2, 0.0);
  for (int j = 0; j <= K; ++j) y[static_cast<size_t>(j)] = pi0.probs[static_cast<size_t>(j)];
  y[static_cast<size_t>(K) + 1] = pi0.tail_mass;
  std::vector<double> ys = y; // half-step shadow

  FluidTrajectory out;
  Rk4 rk, rks;
  for (size_t g = 0; g < grid.size(); ++g) {
    if (g > 0) {
      double span = grid[g] - grid[g - 1];
      if (span < 0.0) throw ValidationError("sample grid must be nondecreasing");
      if (span > 0.0) {
        int nst = std::max(1, static_cast<int>(std::ceil(span / h - 1e-9)));
        double hh = span / nst;
        for (int s = 0; s < nst; ++s) rk.step(rhs, y, hh);
        for (int s = 0; s < 2 * nst; ++s) rks.step(rhs, ys, 0.5 * hh);
        double err = 0.0;
        for (size_t i = 0; i < y.size(); ++i) err += std::fabs(y[i] - ys[i]);
        out.max_step_err = std::max(out.max_step_err, err);
        if (err > 1e-6)
          throw NumericalError("step-doubling check failed at t = " + std::to_string(grid[g]));
      }
    }
    double leak = y[static_cast<size_t>(K) + 1];
    double sum = 0.0;
    for (int j = 0; j <= K; ++j) sum += y[static_cast<size_t>(j)];
    double defect = std::fabs(sum + leak - 1.0);
    out.max_mass_defect = std::max(out.max_mass_defect, defect);
    if (defect > 1e-9)
      throw NumericalError("mass accounting drifted past 1e-9 at t = " + std::to_string(grid[g]));

    QueuePMF snap;
    snap.probs.resize(static_cast<size_t>(K) + 1);
    double clamped_sum = 0.0;
    for (int j = 0; j <= K; ++j) {
      double v = y[static_cast<size_t>(j)];
      if (v < -1e-12)
        throw NumericalError("coordinate " + std::to_string(j) + " went negative at t = " +
                             std::to_string(grid[g]));
      if (v < 0.0) out.max_clamp = std::max(out.max_clamp, -v);
      snap.probs[static_cast<size_t>(j)] = std::max(v, 0.0);
      clamped_sum += snap.probs[static_cast<size_t>(j)];
    }
    if (leak < 0.0 || leak > 1.0)
      throw NumericalError("leak left [0,1] at t = " + std::to_string(grid[g]));
    if (clamped_sum > 0.0) {
      double scale = (1.0 - leak) / clamped_sum;
      for (double& v : snap.probs) v *= scale;
    }
    snap.tail_mass = leak;
    out.times.push_back(grid[g]);
    out.states.push_back(std::move(snap));
  }
  return out;
}

} // namespace

FluidTrajectory solve_ode(const QueuePMF& pi0, const SystemParams& p,
                          const TruncationConfig& tc, double h,
                          const std::vector<double>& grid) {
  p.validate();
  int K = tc.K;
  QueuePMF scratch;
  scratch.probs.resize(static_cast<size_t>(K) + 1);
  RhsFn rhs = [&p, K, scratch](const std::vector<double>& y,
                               std::vector<double>& dy) mutable {
    for (int j = 0; j <= K; ++j) scratch.probs[static_cast<size_t>(j)] = y[static_cast<size_t>(j)];
    scratch.tail_mass = y[static_cast<size_t>(K) + 1];
    std::vector<double> F = drift_F(scratch, p);
    dy.resize(y.size());
    for (int j = 0; j <= K; ++j) dy[static_cast<size_t>(j)] = F[static_cast<size_t>(j)];
    dy[static_cast<size_t>(K) + 1] = leak_rate(scratch, p);
  };
  return solve_generic(pi0, tc, h, grid, rhs);
}

FluidTrajectory solve_ode_powerd(const QueuePMF& pi0, double lambda, int d,
                                 const TruncationConfig& tc, double h,
                                 const std::vector<double>& grid) {
  if (d < 1) throw ValidationError("d must be at least 1");
  if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
  int K = tc.K;
  QueuePMF scratch;
  scratch.probs.resize(static_cast<size_t>(K) + 1);
  RhsFn rhs = [lambda, d, K, scratch](const std::vector<double>& y,
                                      std::vector<double>& dy) mutable {
    for (int j = 0; j <= K; ++j) scratch.probs[static_cast<size_t>(j)] = y[static_cast<size_t>(j)];
    scratch.tail_mass = y[static_cast<size_t>(K) + 1];
    std::vector<double> F = drift_F_powerd(scratch, lambda, d);
    dy.resize(y.size());
    for (int j = 0; j <= K; ++j) dy[static_cast<size_t>(j)] = F[static_cast<size_t>(j)];
    dy[static_cast<size_t>(K) + 1] = leak_rate_powerd(scratch, lambda, d);
  };
  return solve_generic(pi0, tc, h, grid, rhs);
}

} // namespace mdslb

#include "mdslb/drift.hpp"

#include <algorithm>

#include "mdslb/math_util.hpp"

namespace mdslb {

namespace {

struct XiCore {
  double xi1 = 0.0, xi2 = 0.0, xi3 = 0.0;
  double sum() const { return xi1 + xi2 + xi3; }
};

// Partial-derivative sums of the arrival kernel at one coordinate, already
// multiplied by the directional factors Ph (prefix), Rh (own), Th (tail).
XiCore xi_core(double P, double R, double T, double Ph, double Rh, double Th,
               int L, int k) {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (int i1 = 0; i1 < k && i1 <= L; ++i1) {
    double fp = ipow(P, i1) / factorial(i1);
    double fp1 = (i1 >= 1) ? ipow(P, i1 - 1) / factorial(i1 - 1) : 0.0;
    for (int i2 = 1; i2 <= L - i1; ++i2) {
      int c = std::min(i2, k - i1);
      double fr = ipow(R, i2) / factorial(i2);
      double fr1 = ipow(R, i2 - 1) / factorial(i2 - 1);
      int e3 = L - i1 - i2;
      double ft = ipow(T, e3) / factorial(e3);
      double ft1 = (e3 >= 1) ? ipow(T, e3 - 1) / factorial(e3 - 1) : 0.0;
      s1 += fp1 * c * fr * ft;
      s2 += fp * c * fr1 * ft;
      s3 += fp * c * fr * ft1;
    }
  }
  XiCore out;
  out.xi1 = s1 * Ph;
  out.xi2 = s2 * Rh;
  out.xi3 = s3 * Th;
  return out;
}

XiCore xi_at(const FluctuationVector& x, const QueuePMF& r, int L, int k, int j) {
  if (j < 0) return XiCore{};
  int K = r.K();
  double P = 0.0, Ph = 0.0;
  for (int m = 0; m < j && m <= K; ++m) {
    P += r.probs[static_cast<size_t>(m)];
    Ph += x[static_cast<size_t>(m)];
  }
  double R = r.at(j);
  double Rh = (j <= K) ? x[static_cast<size_t>(j)] : 0.0;
  double T = r.tail_mass;
  for (int m = j + 1; m <= K; ++m) T += r.probs[static_cast<size_t>(m)];
  double Th = -(Ph + Rh);
  return xi_core(P, R, T, Ph, Rh, Th, L, k);
}

} // namespace

double xi_components(const FluctuationVector& x, const QueuePMF& r, int L,
                     int k, int which, int j) {
  if (which == 4) {
    auto get = [&](int m) {
      return (m >= 0 && m < static_cast<int>(x.size())) ? x[static_cast<size_t>(m)] : 0.0;
    };
    return get(j + 1) - get(j);
  }
  XiCore c = xi_at(x, r, L, k, j);
  switch (which) {
    case 1: return c.xi1;
    case 2: return c.xi2;
    case 3: return c.xi3;
    default: throw ValidationError("xi component selector must be 1..4");
  }
}

std::vector<double> drift_G(const FluctuationVector& x, const QueuePMF& r,
                            const SystemParams& p, int K) {
  if (static_cast<int>(x.size()) != K + 1 || r.K() != K)
    throw ValidationError("drift_G: x and r must have K+1 coordinates");
  double lf = p.lambda * factorial(p.L);
  std::vector<double> G(static_cast<size_t>(K) + 1, 0.0);

  double P = 0.0, Ph = 0.0;
  double T = r.tail_mass;
  for (int m = 1; m <= K; ++m) T += r.probs[static_cast<size_t>(m)];
  double prev = 0.0; // Dzeta(-1)
  for (int j = 0; j <= K; ++j) {
    double R = r.probs[static_cast<size_t>(j)];
    double Rh = x[static_cast<size_t>(j)];
    double Th = -(Ph + Rh);
    double cur = xi_core(P, R, T, Ph, Rh, Th, p.L, p.k).sum();
    double xnext = (j + 1 <= K) ? x[static_cast<size_t>(j) + 1] : 0.0;
    double service = p.k * (xnext - (j >= 1 ? x[static_cast<size_t>(j)] : 0.0));
    G[static_cast<size_t>(j)] = lf * (prev - cur) + service;
    prev = cur;
    P += R;
    Ph += Rh;
    if (j + 1 <= K) T -= r.probs[static_cast<size_t>(j) + 1];
  }
  return G;
}

std::vector<double> drift_G_powerd(const FluctuationVector& x, const QueuePMF& r,
                                   int d, double lambda, int K) {
  if (static_cast<int>(x.size()) != K + 1 || r.K() != K)
    throw ValidationError("drift_G_powerd: x and r must have K+1 coordinates");
  std::vector<double> v(static_cast<size_t>(K) + 2, 0.0);
  std::vector<double> w(static_cast<size_t>(K) + 2, 0.0);
  v[static_cast<size_t>(K) + 1] = r.tail_mass;
  for (int j = K; j >= 0; --j) {
    v[static_cast<size_t>(j)] = v[static_cast<size_t>(j) + 1] + r.probs[static_cast<size_t>(j)];
    w[static_cast<size_t>(j)] = w[static_cast<size_t>(j) + 1] + x[static_cast<size_t>(j)];
  }
  auto vw = [&](int j) {
    return ipow(v[static_cast<size_t>(j)], d - 1) * w[static_cast<size_t>(j)];
  };
  std::vector<double> G(static_cast<size_t>(K) + 1, 0.0);
  double x1 = (K >= 1) ? x[1] : 0.0;
  G[0] = -lambda * d * (vw(0) - vw(1)) + x1;
  for (int j = 1; j <= K; ++j) {
    double xnext = (j + 1 <= K) ? x[static_cast<size_t>(j) + 1] : 0.0;
    G[static_cast<size_t>(j)] =
        lambda * d * (vw(j - 1) - 2.0 * vw(j) + vw(j + 1)) + xnext - x[static_cast<size_t>(j)];
  }
  return G;
}

} // namespace mdslb

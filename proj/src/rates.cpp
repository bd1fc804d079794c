#include "mdslb/rates.hpp"

#include <algorithm>

#include "mdslb/math_util.hpp"

namespace mdslb {

std::vector<int> jump_vector(const Configuration& cfg, int k, int K) {
  std::vector<int> d(static_cast<size_t>(K) + 2, 0);
  for (int i = 0; i < k; ++i) {
    int v = cfg.levels[static_cast<size_t>(i)];
    d[static_cast<size_t>(v)] -= 1;
    d[static_cast<size_t>(v) + 1] += 1;
  }
  return d;
}

std::vector<Configuration> enumerate_configs(int K, int L) {
  std::vector<Configuration> out;
  for_each_config(K, L, [&](const std::vector<int>& lv) {
    out.push_back(Configuration{lv});
  });
  return out;
}

double zeta_bar(int j, const QueuePMF& r, int L, int k) {
  if (j < 0) return 0.0;
  int K = r.K();
  double prefix = 0.0;
  for (int m = 0; m < j && m <= K; ++m) prefix += r.probs[static_cast<size_t>(m)];
  double rj = r.at(j);
  double tail = r.tail_mass;
  for (int m = j + 1; m <= K; ++m) tail += r.probs[static_cast<size_t>(m)];

  double z = 0.0;
  for (int i1 = 0; i1 < k && i1 <= L; ++i1) {
    double f1 = ipow(prefix, i1) / factorial(i1);
    if (f1 == 0.0) continue;
    double inner = 0.0;
    for (int i2 = 1; i2 <= L - i1; ++i2) {
      int w = std::min(i2, k - i1);
      inner += w * ipow(rj, i2) / factorial(i2) *
               ipow(tail, L - i1 - i2) / factorial(L - i1 - i2);
    }
    z += f1 * inner;
  }
  return z;
}

std::vector<double> drift_F(const QueuePMF& r, const SystemParams& p) {
  int K = r.K();
  double lf = p.lambda * factorial(p.L);
  std::vector<double> F(static_cast<size_t>(K) + 1, 0.0);
  double zb_prev = 0.0; // zeta_bar(-1)
  for (int j = 0; j <= K; ++j) {
    double zb = zeta_bar(j, r, p.L, p.k);
    double service = p.k * (r.at(j + 1) - (j >= 1 ? r.probs[static_cast<size_t>(j)] : 0.0));
    F[static_cast<size_t>(j)] = lf * (zb_prev - zb) + service;
    zb_prev = zb;
  }
  return F;
}

double leak_rate(const QueuePMF& r, const SystemParams& p) {
  return p.lambda * factorial(p.L) * zeta_bar(r.K(), r, p.L, p.k);
}

// v[j] = mass at level >= j, with v[K+1] = tail_mass
static std::vector<double> suffix_mass(const QueuePMF& r) {
  int K = r.K();
  std::vector<double> v(static_cast<size_t>(K) + 2, 0.0);
  v[static_cast<size_t>(K) + 1] = r.tail_mass;
  for (int j = K; j >= 0; --j)
    v[static_cast<size_t>(j)] = v[static_cast<size_t>(j) + 1] + r.probs[static_cast<size_t>(j)];
  return v;
}

std::vector<double> drift_F_powerd(const QueuePMF& r, double lambda, int d) {
  int K = r.K();
  std::vector<double> v = suffix_mass(r);
  std::vector<double> F(static_cast<size_t>(K) + 1, 0.0);
  F[0] = -lambda * (ipow(v[0], d) - ipow(v[1], d)) + r.at(1);
  for (int j = 1; j <= K; ++j) {
    double arr = lambda * (ipow(v[static_cast<size_t>(j) - 1], d) -
                           2.0 * ipow(v[static_cast<size_t>(j)], d) +
                           ipow(v[static_cast<size_t>(j) + 1], d));
    F[static_cast<size_t>(j)] = arr + r.at(j + 1) - r.probs[static_cast<size_t>(j)];
  }
  return F;
}

double leak_rate_powerd(const QueuePMF& r, double lambda, int d) {
  std::vector<double> v = suffix_mass(r);
  int K = r.K();
  return lambda * (ipow(v[static_cast<size_t>(K)], d) - ipow(v[static_cast<size_t>(K) + 1], d));
}

double zeta_exact(int j, const CountVector& x, int L, int k) {
  int64_t prefix = 0, tail = 0, xj = 0;
  for (size_t m = 0; m < x.counts.size(); ++m) {
    if (static_cast<int>(m) < j) prefix += x.counts[m];
    else if (static_cast<int>(m) == j) xj = x.counts[m];
    else tail += x.counts[m];
  }
  double z = 0.0;
  for (int i1 = 0; i1 < k && i1 <= L; ++i1) {
    double f1 = binom_count(prefix, i1);
    if (f1 == 0.0) continue;
    double inner = 0.0;
    for (int i2 = 1; i2 <= L - i1; ++i2) {
      int w = std::min(i2, k - i1);
      inner += w * binom_count(xj, i2) * binom_count(tail, L - i1 - i2);
    }
    z += f1 * inner;
  }
  return z;
}

std::vector<double> arrival_component_oracle(const QueuePMF& r, const SystemParams& p) {
  int K = r.K();
  std::vector<double> out(static_cast<size_t>(K) + 1, 0.0);
  double lf = p.lambda * factorial(p.L);
  // levels 0..K are tracked; K+1 stands for the whole tail, which is exact
  // because the per-run weights multiply out to tail_mass^m / m! either way
  for_each_config(K + 1, p.L, [&](const std::vector<int>& lv) {
    // weight prod_j r_j^rho_j / rho_j! over runs of equal levels
    double w = 1.0;
    size_t i = 0;
    while (i < lv.size()) {
      size_t e = i;
      while (e < lv.size() && lv[e] == lv[i]) ++e;
      int cnt = static_cast<int>(e - i);
      double mass = lv[i] <= K ? r.probs[static_cast<size_t>(lv[i])] : r.tail_mass;
      w *= ipow(mass, cnt) / factorial(cnt);
      i = e;
    }
    if (w == 0.0) return;
    for (int t = 0; t < p.k; ++t) {
      int v = lv[static_cast<size_t>(t)];
      if (v <= K) out[static_cast<size_t>(v)] -= lf * w;
      if (v + 1 <= K) out[static_cast<size_t>(v) + 1] += lf * w;
    }
  });
  return out;
}

} // namespace mdslb

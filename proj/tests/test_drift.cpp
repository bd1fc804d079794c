#include <doctest.h>

#include <cmath>
#include <random>

#include "mdslb/drift.hpp"
#include "mdslb/rates.hpp"

using namespace mdslb;

namespace {

QueuePMF random_pmf(std::mt19937_64& g, int K, int zero_top = 0) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  QueuePMF r;
  r.probs.assign(static_cast<size_t>(K) + 1, 0.0);
  double s = 0.0;
  for (int j = 0; j <= K - zero_top; ++j) {
    r.probs[static_cast<size_t>(j)] = u(g);
    s += r.probs[static_cast<size_t>(j)];
  }
  double tail = zero_top > 0 ? 0.0 : 0.05 * u(g);
  for (auto& v : r.probs) v *= (1.0 - tail) / s;
  r.tail_mass = tail;
  return r;
}

FluctuationVector random_direction(std::mt19937_64& g, int K, bool zero_sum,
                                   int zero_top = 0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FluctuationVector x(static_cast<size_t>(K) + 1, 0.0);
  for (int j = 0; j <= K - zero_top; ++j) x[static_cast<size_t>(j)] = u(g);
  if (zero_sum) {
    double s = 0.0;
    int live = K - zero_top + 1;
    for (double v : x) s += v;
    for (int j = 0; j <= K - zero_top; ++j) x[static_cast<size_t>(j)] -= s / live;
  }
  return x;
}

// central difference of drift_F along x; the tail coordinate moves by the
// opposite amount so the perturbation stays total-mass-preserving, matching
// the tail convention inside drift_G
std::vector<double> fd_drift(const FluctuationVector& x, const QueuePMF& r,
                             const SystemParams& p, double u) {
  double sx = 0.0;
  for (double v : x) sx += v;
  QueuePMF hi = r, lo = r;
  for (size_t j = 0; j < x.size(); ++j) {
    hi.probs[j] += u * x[j];
    lo.probs[j] -= u * x[j];
  }
  hi.tail_mass -= u * sx;
  lo.tail_mass += u * sx;
  std::vector<double> fh = drift_F(hi, p);
  std::vector<double> fl = drift_F(lo, p);
  for (size_t j = 0; j < fh.size(); ++j) fh[j] = (fh[j] - fl[j]) / (2.0 * u);
  return fh;
}

} // namespace

TEST_CASE("service difference component") {
  FluctuationVector x = {1.0, -1.0, 0.0};
  QueuePMF r = pmf_delta0(2);
  CHECK(xi_components(x, r, 2, 1, 4, 0) == doctest::Approx(-2.0));
  CHECK(xi_components(x, r, 2, 1, 4, 1) == doctest::Approx(1.0));
  CHECK(xi_components(x, r, 2, 1, 4, 2) == doctest::Approx(0.0));
  CHECK_THROWS_AS((void)xi_components(x, r, 2, 1, 5, 0), ValidationError);
}

TEST_CASE("own-coordinate component at a zero coordinate") {
  // L=2, k=1: zeta_bar(j) = R*T + R^2/2, so the R-partial at R=0 is T
  QueuePMF r;
  r.probs = {0.5, 0.0, 0.3};
  r.tail_mass = 0.2;
  FluctuationVector x = {0.1, 0.4, -0.2};
  double T = 0.3 + 0.2; // mass above level 1
  CHECK(xi_components(x, r, 2, 1, 2, 1) == doctest::Approx(T * 0.4).epsilon(1e-13));
}

TEST_CASE("fluctuation drift matches finite differences of the mean drift") {
  std::mt19937_64 g(314);
  SystemParams p;
  p.lambda = 0.9;
  const int K = 8;
  for (int L = 1; L <= 5; ++L) {
    for (int k = 1; k <= L; ++k) {
      p.L = L;
      p.k = k;
      for (int rep = 0; rep < 10; ++rep) {
        QueuePMF r = random_pmf(g, K);
        FluctuationVector x = random_direction(g, K, false);
        std::vector<double> gexact = drift_G(x, r, p, K);
        std::vector<double> gfd = fd_drift(x, r, p, 1e-6);
        for (size_t j = 0; j < gexact.size(); ++j) {
          double scale = std::max(1.0, std::abs(gexact[j]));
          CHECK(std::abs(gexact[j] - gfd[j]) <= 1e-5 * scale);
        }
      }
    }
  }
}

TEST_CASE("two-choice closed form") {
  // corrected display of the two-choice fluctuation drift for i >= 1:
  //   2 lambda [ sum_{m>=i} (x_{i-1} r_m - x_i r_{m+1})
  //            + sum_{m>=i-1} (r_{i-1} x_m - r_i x_{m+1}) ] + x_{i+1} - x_i
  std::mt19937_64 g(2718);
  SystemParams p;
  p.lambda = 0.9;
  p.L = 2;
  p.k = 1;
  const int K = 7;
  for (int rep = 0; rep < 20; ++rep) {
    QueuePMF r = random_pmf(g, K, 2);
    FluctuationVector x = random_direction(g, K, true, 2);
    std::vector<double> gexact = drift_G(x, r, p, K);
    auto rat = [&](int j) { return j >= 0 && j <= K ? r.probs[static_cast<size_t>(j)] : 0.0; };
    auto xat = [&](int j) { return j >= 0 && j <= K ? x[static_cast<size_t>(j)] : 0.0; };
    for (int i = 1; i <= K; ++i) {
      double s = 0.0;
      for (int m = i; m <= K + 1; ++m) s += xat(i - 1) * rat(m) - xat(i) * rat(m + 1);
      for (int m = i - 1; m <= K + 1; ++m) s += rat(i - 1) * xat(m) - rat(i) * xat(m + 1);
      double want = 2.0 * p.lambda * s + xat(i + 1) - xat(i);
      CHECK(gexact[static_cast<size_t>(i)] == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("power-of-d fluctuation drift") {
  std::mt19937_64 g(555);
  const int K = 9;
  SystemParams p;
  p.lambda = 0.85;
  p.k = 1;
  for (int d = 1; d <= 4; ++d) {
    p.L = d;
    for (int rep = 0; rep < 10; ++rep) {
      QueuePMF r = random_pmf(g, K);
      FluctuationVector x = random_direction(g, K, true);
      std::vector<double> a = drift_G(x, r, p, K);
      std::vector<double> b = drift_G_powerd(x, r, d, p.lambda, K);
      REQUIRE(a.size() == b.size());
      for (size_t j = 0; j < a.size(); ++j)
        CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-10));

      // and against finite differences of the tail-power drift
      double u = 1e-6;
      QueuePMF hi = r, lo = r;
      for (size_t j = 0; j < x.size(); ++j) {
        hi.probs[j] += u * x[j];
        lo.probs[j] -= u * x[j];
      }
      std::vector<double> fh = drift_F_powerd(hi, p.lambda, d);
      std::vector<double> fl = drift_F_powerd(lo, p.lambda, d);
      for (size_t j = 0; j < fh.size(); ++j) {
        double fd = (fh[j] - fl[j]) / (2.0 * u);
        CHECK(std::abs(b[j] - fd) <= 1e-5 * std::max(1.0, std::abs(b[j])));
      }
    }
  }
}

TEST_CASE("fluctuation drift conserves zero sum away from the truncation edge") {
  std::mt19937_64 g(808);
  SystemParams p;
  p.lambda = 1.2;
  const int K = 10;
  for (int L = 1; L <= 4; ++L) {
    for (int k = 1; k <= L; ++k) {
      p.L = L;
      p.k = k;
      QueuePMF r = random_pmf(g, K, 3);
      FluctuationVector x = random_direction(g, K, true, 3);
      std::vector<double> gv = drift_G(x, r, p, K);
      double s = 0.0;
      for (double v : gv) s += v;
      CHECK(std::abs(s) <= 1e-12);
    }
  }
}

TEST_CASE("dimension mismatch is rejected") {
  QueuePMF r = pmf_delta0(4);
  FluctuationVector x(3, 0.0);
  SystemParams p;
  CHECK_THROWS_AS((void)drift_G(x, r, p, 4), ValidationError);
}

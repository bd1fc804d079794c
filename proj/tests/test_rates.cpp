#include <doctest.h>

#include <cmath>
#include <random>

#include "mdslb/math_util.hpp"
#include "mdslb/rates.hpp"

using namespace mdslb;

namespace {

QueuePMF random_pmf(std::mt19937_64& g, int K, double tail_share = 0.1) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  QueuePMF r;
  r.probs.resize(static_cast<size_t>(K) + 1);
  double s = 0.0;
  for (auto& v : r.probs) {
    v = u(g);
    s += v;
  }
  double tail = u(g) * tail_share;
  for (auto& v : r.probs) v *= (1.0 - tail) / s;
  r.tail_mass = tail;
  return r;
}

} // namespace

TEST_CASE("jump vectors route tasks to the shortest sampled queues") {
  Configuration cfg;
  cfg.levels = {0, 0, 1};
  std::vector<int> d = jump_vector(cfg, 2, 4);
  CHECK(d == std::vector<int>{-2, 2, 0, 0, 0, 0});

  cfg.levels = {0, 2, 5};
  d = jump_vector(cfg, 2, 5);
  CHECK(d == std::vector<int>{-1, 1, -1, 1, 0, 0, 0});

  // single task to the one shortest
  cfg.levels = {3, 3};
  d = jump_vector(cfg, 1, 5);
  CHECK(d == std::vector<int>{0, 0, 0, -1, 1, 0, 0});
}

TEST_CASE("configuration enumeration counts") {
  CHECK(enumerate_configs(2, 2).size() == 6);         // multisets of {0,1,2}
  CHECK(enumerate_configs(20, 5).size() == 53130);    // C(25,5)
  for (const Configuration& c : enumerate_configs(3, 3)) {
    CHECK(c.levels.size() == 3);
    CHECK(std::is_sorted(c.levels.begin(), c.levels.end()));
  }
}

TEST_CASE("zeta_bar closed values") {
  // all mass at zero: only the all-zero configuration contributes
  QueuePMF e0 = pmf_delta0(6);
  CHECK(zeta_bar(0, e0, 2, 1) == doctest::Approx(1.0 / 2.0).epsilon(1e-14));
  CHECK(zeta_bar(0, e0, 3, 2) == doctest::Approx(2.0 / 6.0).epsilon(1e-14));
  CHECK(zeta_bar(0, e0, 5, 4) == doctest::Approx(4.0 / 120.0).epsilon(1e-14));
  CHECK(zeta_bar(1, e0, 2, 1) == 0.0);
  CHECK(zeta_bar(-1, e0, 2, 1) == 0.0);

  // r = (1/2, 1/2), L=2, k=1
  QueuePMF half;
  half.probs = {0.5, 0.5};
  half.tail_mass = 0.0;
  CHECK(zeta_bar(0, half, 2, 1) == doctest::Approx(3.0 / 8.0).epsilon(1e-14));
  CHECK(zeta_bar(1, half, 2, 1) == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("zeta_bar growth bound") {
  std::mt19937_64 g(42);
  for (int rep = 0; rep < 50; ++rep) {
    QueuePMF r = random_pmf(g, 8);
    for (int L = 1; L <= 5; ++L) {
      for (int k = 1; k <= L; ++k) {
        double bound = k * ipow(3.0, L) / factorial(L);
        for (int j = 0; j <= 8; ++j) {
          double z = zeta_bar(j, r, L, k);
          CHECK(z >= 0.0);
          CHECK(z <= bound * r.probs[static_cast<size_t>(j)] + 1e-15);
        }
      }
    }
  }
}

TEST_CASE("drift from the empty state") {
  QueuePMF e0 = pmf_delta0(6);
  SystemParams p;
  p.lambda = 0.9;
  p.L = 2;
  p.k = 1;
  std::vector<double> f = drift_F(e0, p);
  CHECK(f[0] == doctest::Approx(-0.9).epsilon(1e-14));
  CHECK(f[1] == doctest::Approx(0.9).epsilon(1e-14));
  for (size_t j = 2; j < f.size(); ++j) CHECK(f[j] == 0.0);

  // batched variant pushes k tasks per request at rate lambda
  p.L = 5;
  p.k = 3;
  f = drift_F(e0, p);
  CHECK(f[0] == doctest::Approx(-2.7).epsilon(1e-13));
  CHECK(f[1] == doctest::Approx(2.7).epsilon(1e-13));
}

TEST_CASE("drift interior value") {
  QueuePMF half;
  half.probs = {0.5, 0.5};
  half.tail_mass = 0.0;
  SystemParams p;
  p.lambda = 0.9;
  p.L = 2;
  p.k = 1;
  std::vector<double> f = drift_F(half, p);
  // f1 = lambda (v0^2 - 2 v1^2) + (0 - r1) with v0=1, v1=1/2
  CHECK(f[1] == doctest::Approx(-0.05).epsilon(1e-14));
  CHECK(f[0] == doctest::Approx(-f[1] - leak_rate(half, p)).epsilon(1e-12));
}

TEST_CASE("drift sums to minus the truncation leak") {
  std::mt19937_64 g(7);
  SystemParams p;
  for (int rep = 0; rep < 30; ++rep) {
    QueuePMF r = random_pmf(g, 10);
    for (int L = 1; L <= 4; ++L) {
      for (int k = 1; k <= L; ++k) {
        p.L = L;
        p.k = k;
        std::vector<double> f = drift_F(r, p);
        double s = 0.0;
        for (double v : f) s += v;
        CHECK(s == doctest::Approx(-leak_rate(r, p)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("zero arrival rate leaves the empty state fixed") {
  QueuePMF e0 = pmf_delta0(5);
  SystemParams p;
  p.lambda = 0.0; // drift evaluation only; solver-level validation rejects this
  p.L = 2;
  p.k = 1;
  for (double v : drift_F(e0, p)) CHECK(v == 0.0);

  // pure death: mass at level 3 drains downward
  QueuePMF r;
  r.probs = {0.0, 0.0, 0.0, 1.0, 0.0};
  r.tail_mass = 0.0;
  std::vector<double> f = drift_F(r, p);
  CHECK(f[3] == doctest::Approx(-1.0));
  CHECK(f[2] == doctest::Approx(1.0));
}

TEST_CASE("arrival part matches the configuration enumeration oracle") {
  std::mt19937_64 g(2024);
  SystemParams p;
  p.lambda = 0.7;
  for (int rep = 0; rep < 20; ++rep) {
    QueuePMF r = random_pmf(g, 7);
    for (int L = 1; L <= 4; ++L) {
      for (int k = 1; k <= L; ++k) {
        p.L = L;
        p.k = k;
        std::vector<double> arr = arrival_component_oracle(r, p);
        std::vector<double> f = drift_F(r, p);
        // strip the service part to isolate the arrival kernel
        for (size_t j = 0; j < f.size(); ++j) {
          double rj = r.probs[j];
          double rj1 = j + 1 < f.size() ? r.probs[j + 1] : 0.0;
          f[j] -= k * (rj1 - (j >= 1 ? rj : 0.0));
          CHECK(f[j] == doctest::Approx(arr[j]).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("count-scale zeta examples") {
  CountVector x;
  x.n = 3;
  x.counts = {3, 0};
  CHECK(zeta_exact(0, x, 2, 1) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(zeta_exact(1, x, 2, 1) == 0.0);
}

TEST_CASE("power-of-d drift equals the batch form at k=1") {
  std::mt19937_64 g(11);
  for (int rep = 0; rep < 20; ++rep) {
    QueuePMF r = random_pmf(g, 9);
    for (int d = 1; d <= 5; ++d) {
      SystemParams p;
      p.lambda = 0.8;
      p.L = d;
      p.k = 1;
      std::vector<double> a = drift_F(r, p);
      std::vector<double> b = drift_F_powerd(r, 0.8, d);
      REQUIRE(a.size() == b.size());
      for (size_t j = 0; j < a.size(); ++j)
        CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-11));
      CHECK(leak_rate(r, p) == doctest::Approx(leak_rate_powerd(r, 0.8, d)).epsilon(1e-11));
    }
  }
}

#include <doctest.h>

#include "mdslb/math_util.hpp"
#include "mdslb/types.hpp"

using namespace mdslb;

TEST_CASE("params validation messages") {
  SystemParams p;
  CHECK_NOTHROW(p.validate());

  p.k = 3;
  p.L = 2;
  CHECK_THROWS_WITH_AS(p.validate(), "k must satisfy k <= L", ValidationError);

  p = SystemParams{};
  p.n = 0;
  CHECK_THROWS_WITH_AS(p.validate(), "n must be at least 1", ValidationError);

  p = SystemParams{};
  p.L = 0;
  CHECK_THROWS_WITH_AS(p.validate(), "L must be at least 1", ValidationError);

  p = SystemParams{};
  p.k = 0;
  CHECK_THROWS_WITH_AS(p.validate(), "k must be at least 1", ValidationError);

  p = SystemParams{};
  p.n = 3;
  p.L = 5;
  CHECK_THROWS_WITH_AS(p.validate(), "L must satisfy L <= n", ValidationError);

  p = SystemParams{};
  p.lambda = 0.0;
  CHECK_THROWS_WITH_AS(p.validate(), "lambda must be positive", ValidationError);

  p = SystemParams{};
  p.T = -1.0;
  CHECK_THROWS_WITH_AS(p.validate(), "T must be positive", ValidationError);

  p = SystemParams{};
  p.c = 0.5;
  CHECK_THROWS_WITH_AS(p.validate(), "c must be at least 1", ValidationError);
}

TEST_CASE("truncation validation") {
  TruncationConfig tc;
  CHECK_NOTHROW(tc.validate());
  tc.K = 0;
  CHECK_THROWS_AS(tc.validate(), ValidationError);
}

TEST_CASE("pmf accessors and padding") {
  QueuePMF r;
  r.probs = {0.5, 0.3, 0.1};
  r.tail_mass = 0.1;
  CHECK(r.K() == 2);
  CHECK(r.total() == doctest::Approx(1.0));
  CHECK(r.at(1) == 0.3);
  CHECK(r.at(5) == 0.0);
  CHECK(r.at(-1) == 0.0);
  CHECK_NOTHROW(r.check());

  r.tail_mass = 0.3;
  CHECK_THROWS_AS(r.check(), ValidationError);
}

TEST_CASE("normalize rescales to unit total") {
  QueuePMF r;
  r.probs = {2.0, 1.0, 1.0};
  r.tail_mass = 0.0;
  QueuePMF s = normalize(r);
  CHECK(s.probs[0] == doctest::Approx(0.5));
  CHECK(s.total() == doctest::Approx(1.0));
}

TEST_CASE("delta0 pmf") {
  QueuePMF r = pmf_delta0(4);
  CHECK(r.K() == 4);
  CHECK(r.probs[0] == 1.0);
  CHECK(r.probs[4] == 0.0);
  CHECK(r.tail_mass == 0.0);
}

TEST_CASE("counts to pmf lumps excess into tail") {
  CountVector cv;
  cv.n = 10;
  cv.counts = {5, 2, 0, 1, 1, 1};
  QueuePMF r = pmf_from_counts(cv, 3);
  CHECK(r.probs[0] == doctest::Approx(0.5));
  CHECK(r.probs[3] == doctest::Approx(0.1));
  CHECK(r.tail_mass == doctest::Approx(0.2));
  CHECK(r.total() == doctest::Approx(1.0));
}

TEST_CASE("count vector consistency check") {
  CountVector cv;
  cv.n = 4;
  cv.counts = {1, 2, 1};
  CHECK_NOTHROW(cv.check());
  cv.counts = {1, 2, 2};
  CHECK_THROWS_AS(cv.check(), ValidationError);
  cv.counts = {-1, 3, 2};
  CHECK_THROWS_AS(cv.check(), ValidationError);
}

TEST_CASE("zero sum guard") {
  CHECK_NOTHROW(check_zero_sum({1.0, -0.5, -0.5}));
  CHECK_THROWS_AS(check_zero_sum({1.0, -0.5, -0.4}), ValidationError);
}

TEST_CASE("cov matrix storage and norm") {
  CovMatrix m = CovMatrix::zero(2);
  m.at(0, 0) = 3.0;
  m.at(0, 1) = 4.0;
  CHECK(m.frobenius() == doctest::Approx(5.0));
  CHECK(m.at(1, 1) == 0.0);
}

TEST_CASE("power and combinatorics conventions") {
  CHECK(ipow(0.0, 0) == 1.0);
  CHECK(ipow(2.0, 10) == 1024.0);
  CHECK(factorial(0) == 1.0);
  CHECK(factorial(5) == 120.0);
  CHECK(binom_count(0, 0) == 1.0);
  CHECK(binom_count(3, 5) == 0.0);
  CHECK(binom_count(5, -1) == 0.0);
  CHECK(binom_count(25, 5) == 53130.0);
}

TEST_CASE("normal quantile") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-7));
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963985).epsilon(1e-7));
  CHECK_THROWS_AS((void)normal_quantile(0.0), std::domain_error);
}

#include <doctest.h>

#include <cmath>
#include <map>

#include "mdslb/ctmc.hpp"

using namespace mdslb;

namespace {

int64_t recompute_jobs(const std::vector<int64_t>& counts) {
  int64_t s = 0;
  for (size_t j = 0; j < counts.size(); ++j) s += static_cast<int64_t>(j) * counts[j];
  return s;
}

int64_t recompute_busy(const std::vector<int64_t>& counts) {
  int64_t s = 0;
  for (size_t j = 1; j < counts.size(); ++j) s += counts[j];
  return s;
}

} // namespace

TEST_CASE("configuration sampling is exactly hypergeometric") {
  CountVector init;
  init.n = 4;
  init.counts = {2, 2};
  CtmcState st = make_ctmc_state(init, 0.0, 12345);
  const int N = 30000;
  std::map<std::vector<int>, int> freq;
  for (int i = 0; i < N; ++i) freq[sample_configuration(st, 2)]++;
  // P{0,0} = C(2,2)/C(4,2) = 1/6, P{0,1} = 4/6, P{1,1} = 1/6
  double p00 = freq[{0, 0}] / double(N);
  double p01 = freq[{0, 1}] / double(N);
  double p11 = freq[{1, 1}] / double(N);
  double sd = std::sqrt((1.0 / 6.0) * (5.0 / 6.0) / N);
  CHECK(std::abs(p00 - 1.0 / 6.0) < 5 * sd);
  CHECK(std::abs(p11 - 1.0 / 6.0) < 5 * sd);
  CHECK(std::abs(p01 - 4.0 / 6.0) < 5 * std::sqrt((4.0 / 6.0) * (2.0 / 6.0) / N));
  // sampling must not disturb the state
  CHECK(st.counts == std::vector<int64_t>{2, 2});
}

TEST_CASE("sampled levels arrive sorted") {
  CountVector init;
  init.n = 30;
  init.counts = {10, 10, 10};
  CtmcState st = make_ctmc_state(init, 0.0, 9);
  for (int i = 0; i < 200; ++i) {
    const std::vector<int>& lv = sample_configuration(st, 5);
    CHECK(lv.size() == 5);
    CHECK(std::is_sorted(lv.begin(), lv.end()));
  }
}

TEST_CASE("single transitions keep the books straight") {
  SystemParams p;
  p.n = 20;
  p.lambda = 0.9;
  p.L = 3;
  p.k = 2;
  CountVector init;
  init.n = 20;
  init.counts = {10, 6, 4};
  CtmcState st = make_ctmc_state(init, 0.0, 777);
  int64_t total_before = 0;
  for (int64_t c : st.counts) total_before += c;
  CHECK(total_before == 20);

  for (int step = 0; step < 2000; ++step) {
    int64_t jobs_before = st.jobs_total;
    double t_before = st.t;
    CtmcEvent ev = ctmc_step(st, p);
    CHECK(st.t > t_before);
    int64_t total = 0;
    for (int64_t c : st.counts) total += c;
    CHECK(total == 20);
    CHECK(st.jobs_total == recompute_jobs(st.counts));
    CHECK(st.busy == recompute_busy(st.counts));
    if (ev == CtmcEvent::arrival)
      CHECK(st.jobs_total == jobs_before + p.k);
    else
      CHECK(st.jobs_total == jobs_before - 1);
  }
}

TEST_CASE("departures never fire from an all-empty system") {
  SystemParams p;
  p.n = 5;
  p.lambda = 0.5;
  p.L = 2;
  p.k = 1;
  CtmcState st = make_ctmc_state(counts_all_empty(5), 0.0, 31);
  CtmcEvent ev = ctmc_step(st, p);
  CHECK(ev == CtmcEvent::arrival);
  CHECK(st.jobs_total == 1);
}

TEST_CASE("holding times from the empty state have the right mean") {
  SystemParams p;
  p.n = 50;
  p.lambda = 0.9;
  p.L = 2;
  p.k = 1;
  const int N = 20000;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) {
    CtmcState st = make_ctmc_state(counts_all_empty(50), 0.0, 1000 + i);
    ctmc_step(st, p);
    sum += st.t;
  }
  double rate = 50 * 0.9; // busy = 0, so only arrivals contribute
  double mean = sum / N;
  double se = (1.0 / rate) / std::sqrt(double(N));
  CHECK(std::abs(mean - 1.0 / rate) < 5 * se);
}

TEST_CASE("trajectories are reproducible by seed") {
  SystemParams p;
  p.n = 100;
  p.lambda = 0.9;
  p.L = 3;
  p.k = 2;
  p.T = 2.0;
  std::vector<double> grid = {0.0, 0.5, 1.0, 1.5, 2.0};
  CtmcTrajectory a = simulate_ctmc(p, counts_all_empty(100), grid, 42);
  CtmcTrajectory b = simulate_ctmc(p, counts_all_empty(100), grid, 42);
  CHECK(a.events == b.events);
  CHECK(a.counts == b.counts);
  CHECK(a.jobs == b.jobs);
  CtmcTrajectory c = simulate_ctmc(p, counts_all_empty(100), grid, 43);
  CHECK(a.counts != c.counts);
}

TEST_CASE("snapshots capture the state holding at each grid time") {
  SystemParams p;
  p.n = 40;
  p.lambda = 1.0;
  p.L = 2;
  p.k = 1;
  p.T = 1.0;
  std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  CtmcTrajectory tr = simulate_ctmc(p, counts_all_empty(40), grid, 7);
  REQUIRE(tr.times.size() == grid.size());
  CHECK(tr.counts[0] == std::vector<int64_t>{40});
  for (size_t g = 0; g < grid.size(); ++g) {
    CHECK(tr.times[g] == grid[g]);
    int64_t total = 0;
    for (int64_t c : tr.counts[g]) total += c;
    CHECK(total == 40);
    CHECK(tr.jobs[g] == recompute_jobs(tr.counts[g]));
  }
}

TEST_CASE("initial counts must match the system size") {
  SystemParams p;
  p.n = 10;
  CountVector init;
  init.n = 5;
  init.counts = {5};
  CHECK_THROWS_WITH_AS((void)simulate_ctmc(p, init, {0.0, 1.0}, 1),
                       "initial counts do not match n", ValidationError);
}

#include "mdslb/ctmc.hpp"

#include <algorithm>

namespace mdslb {

CtmcState make_ctmc_state(const CountVector& init, double t0, uint64_t seed) {
  init.check();
  CtmcState st;
  st.counts = init.counts;
  st.n = init.n;
  st.t = t0;
  st.busy = 0;
  st.jobs_total = 0;
  for (size_t j = 0; j < st.counts.size(); ++j) {
    if (j >= 1) st.busy += st.counts[j];
    st.jobs_total += static_cast<int64_t>(j) * st.counts[j];
  }
  st.rng.seed(seed);
  return st;
}

const std::vector<int>& sample_configuration(CtmcState& st, int L) {
  auto& lv = st.levels_scratch;
  lv.clear();
  for (int d = 0; d < L; ++d) {
    std::uniform_int_distribution<int64_t> pick(0, st.n - 1 - d);
    int64_t u = pick(st.rng);
    // walk level classes, skipping servers already drawn
    for (size_t j = 0; j < st.counts.size(); ++j) {
      int64_t avail = st.counts[j];
      for (int prev : lv)
        if (prev == static_cast<int>(j)) --avail;
      if (u < avail) {
        lv.push_back(static_cast<int>(j));
        break;
      }
      u -= avail;
    }
  }
  std::sort(lv.begin(), lv.end());
  return lv;
}

namespace {

void apply_arrival(CtmcState& st, const SystemParams& p) {
  const std::vector<int>& lv = sample_configuration(st, p.L);
  for (int i = 0; i < p.k; ++i) {
    int v = lv[static_cast<size_t>(i)];
    st.counts[static_cast<size_t>(v)] -= 1;
    if (static_cast<size_t>(v) + 1 >= st.counts.size()) st.counts.push_back(0);
    st.counts[static_cast<size_t>(v) + 1] += 1;
    if (v == 0) st.busy += 1;
    st.jobs_total += 1;
  }
}

void apply_departure(CtmcState& st) {
  std::uniform_int_distribution<int64_t> pick(0, st.busy - 1);
  int64_t u = pick(st.rng);
  size_t j = 1;
  while (u >= st.counts[j]) {
    u -= st.counts[j];
    ++j;
  }
  st.counts[j] -= 1;
  st.counts[j - 1] += 1;
  if (j == 1) st.busy -= 1;
  st.jobs_total -= 1;
}

// selector draw; rates recomputed by the caller beforehand
bool draw_is_arrival(CtmcState& st, double arr_rate, double rate) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return unif(st.rng) < arr_rate / rate;
}

} // namespace

CtmcEvent ctmc_step(CtmcState& st, const SystemParams& p) {
  double arr_rate = static_cast<double>(st.n) * p.lambda;
  double rate = arr_rate + static_cast<double>(p.k) * static_cast<double>(st.busy);
  std::exponential_distribution<double> hold(rate);
  st.t += hold(st.rng);
  if (draw_is_arrival(st, arr_rate, rate)) {
    apply_arrival(st, p);
    return CtmcEvent::arrival;
  }
  apply_departure(st);
  return CtmcEvent::departure;
}

CtmcTrajectory simulate_ctmc(const SystemParams& p, const CountVector& init,
                             const std::vector<double>& sample_times,
                             uint64_t seed) {
  p.validate();
  if (init.n != p.n) throw ValidationError("initial counts do not match n");
  CtmcState st = make_ctmc_state(init, 0.0, seed);
  CtmcTrajectory out;
  size_t idx = 0;
  const size_t N = sample_times.size();
  while (idx < N) {
    double arr_rate = static_cast<double>(st.n) * p.lambda;
    double rate = arr_rate + static_cast<double>(p.k) * static_cast<double>(st.busy);
    std::exponential_distribution<double> hold(rate);
    double t_next = st.t + hold(st.rng);
    while (idx < N && sample_times[idx] < t_next) {
      out.times.push_back(sample_times[idx]);
      out.counts.push_back(st.counts);
      out.jobs.push_back(st.jobs_total);
      ++idx;
    }
    if (idx >= N) break;
    st.t = t_next;
    if (draw_is_arrival(st, arr_rate, rate))
      apply_arrival(st, p);
    else
      apply_departure(st);
    out.events += 1;
  }
  return out;
}

} // namespace mdslb

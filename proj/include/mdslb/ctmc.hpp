#ifndef MDSLB_CTMC_HPP
#define MDSLB_CTMC_HPP

#include <cstdint>
#include <vector>

#include "mdslb/rng.hpp"
#include "mdslb/types.hpp"

namespace mdslb {

// Exact n-server chain state. counts[j] = servers with j tasks; busy and
// jobs_total are maintained incrementally.
struct CtmcState {
  std::vector<int64_t> counts;
  int64_t n = 0;
  double t = 0.0;
  int64_t busy = 0;
  int64_t jobs_total = 0;
  Rng rng;

  // scratch for configuration sampling, kept here to avoid reallocation
  std::vector<int> levels_scratch;
};

CtmcState make_ctmc_state(const CountVector& init, double t0, uint64_t seed);

// Queue lengths of L servers drawn uniformly without replacement, sorted
// nondecreasing. Sequential urn draws against the level counts; exact.
const std::vector<int>& sample_configuration(CtmcState& st, int L);

enum class CtmcEvent { arrival, departure };

// One transition: exponential holding time at total rate
// n*lambda + k*busy, then an arrival (probability n*lambda / rate) routing
// k tasks to the k shortest of L sampled queues, or a departure from a
// busy server chosen with probability proportional to its class count.
// RNG draw order is fixed: holding time, event selector, event detail.
CtmcEvent ctmc_step(CtmcState& st, const SystemParams& p);

struct CtmcTrajectory {
  std::vector<double> times;
  std::vector<std::vector<int64_t>> counts; // state at each sample time
  std::vector<int64_t> jobs;                // tasks in system at sample time
  uint64_t events = 0;
};

// Gillespie run over [0, max(sample_times)], recording the state holding at
// each sample time (the state immediately before the first event past it).
CtmcTrajectory simulate_ctmc(const SystemParams& p, const CountVector& init,
                             const std::vector<double>& sample_times,
                             uint64_t seed);

} // namespace mdslb

#endif

#ifndef MDSLB_RATES_HPP
#define MDSLB_RATES_HPP

#include <vector>

#include "mdslb/types.hpp"

namespace mdslb {

// A request's sampled queue lengths, sorted nondecreasing, length L.
struct Configuration {
  std::vector<int> levels;

  int rho(int j) const {
    int c = 0;
    for (int v : levels) c += (v == j);
    return c;
  }
};

// Net change in server counts when the k shortest of the sampled queues
// each receive one task. Length K+2 so the push past level K is visible.
std::vector<int> jump_vector(const Configuration& cfg, int k, int K);

// Visit every nondecreasing L-tuple over levels {0..K} in lexicographic
// order. The callback gets the sorted level vector.
template <class F>
void for_each_config(int K, int L, F&& f) {
  std::vector<int> lv(static_cast<size_t>(L), 0);
  for (;;) {
    f(static_cast<const std::vector<int>&>(lv));
    int i = L - 1;
    while (i >= 0 && lv[i] == K) --i;
    if (i < 0) break;
    int v = lv[i] + 1;
    for (int j = i; j < L; ++j) lv[j] = v;
  }
}

// All C(K+L, L) configurations, materialized. Oracles and tests only.
std::vector<Configuration> enumerate_configs(int K, int L);

// Limit arrival kernel: expected number of tasks landing on queues of
// length exactly j, per request, divided by L!. Accepts j = -1 (gives 0)
// through j = K; levels past K are pooled with tail_mass.
double zeta_bar(int j, const QueuePMF& r, int L, int k);

// Deterministic limit drift, coordinates 0..K. The service flux into K
// from K+1 is dropped by truncation; mass pushed past K leaks (see
// leak_rate). Row sums: sum_j F_j = -leak_rate.
std::vector<double> drift_F(const QueuePMF& r, const SystemParams& p);

// lambda * L! * zeta_bar(K, r): rate at which arrival flux crosses K.
double leak_rate(const QueuePMF& r, const SystemParams& p);

// Same drift for the classic d-choice model (one task to the shortest of
// d sampled queues, unit service rate), in tail-sum closed form. Equals
// drift_F with L=d, k=1.
std::vector<double> drift_F_powerd(const QueuePMF& r, double lambda, int d);

double leak_rate_powerd(const QueuePMF& r, double lambda, int d);

// Prelimit combinatorial kernel: number of L-subsets of servers, weighted
// by tasks landing at level j, for integer counts x. Used by tests tying
// the finite-n chain to the limit kernel.
double zeta_exact(int j, const CountVector& x, int L, int k);

// Arrival part of the drift computed by exhaustive configuration
// enumeration: lambda * L! * sum_cfg <jump, e_j> * prod_i r_i^rho_i / rho_i!.
// Independent of zeta_bar; arbiter for it.
std::vector<double> arrival_component_oracle(const QueuePMF& r, const SystemParams& p);

} // namespace mdslb

#endif

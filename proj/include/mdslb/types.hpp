#ifndef MDSLB_TYPES_HPP
#define MDSLB_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdslb {

// Error taxonomy, mapped to process exit codes by the CLI:
// validation -> 1, numerical -> 2, I/O -> 3.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model parameters for batch sampling with L sampled queues per request
// and k tasks routed to the k shortest of them. Service rate per busy
// server is k, so one request worth of work leaves per unit time.
struct SystemParams {
  int64_t n = 10000;   // number of servers (exact chain only)
  double lambda = 0.9; // request arrival rate per server
  int L = 2;           // queues sampled per request
  int k = 1;           // tasks per request, k <= L
  double c = 1.0;      // storage redundancy factor; recorded in outputs only
  double T = 10.0;     // horizon

  void validate() const;
};

// Coordinate truncation for the deterministic limit and the diffusion.
// Queue lengths 0..K are tracked, mass past K is accounted as leak.
struct TruncationConfig {
  int K = 20;
  double leak_tol = 1e-6;

  void validate() const;
};

// Probability mass function over queue lengths 0..K plus explicit tail mass.
struct QueuePMF {
  std::vector<double> probs;
  double tail_mass = 0.0;

  int K() const { return static_cast<int>(probs.size()) - 1; }
  double total() const;
  // coordinate access with out-of-range reads giving 0
  double at(int j) const {
    return (j >= 0 && j < static_cast<int>(probs.size())) ? probs[j] : 0.0;
  }
  void check(double tol = 1e-12) const;
};

QueuePMF normalize(QueuePMF pmf);

// Point mass at queue length 0 (all servers idle).
QueuePMF pmf_delta0(int K);

// Server counts per queue length; counts[j] = number of servers with j tasks.
struct CountVector {
  std::vector<int64_t> counts;
  int64_t n = 0;

  void check() const;
};

CountVector counts_all_empty(int64_t n);

// counts -> pmf on 0..K, levels past K folded into tail_mass
QueuePMF pmf_from_counts(const CountVector& cv, int K);

// Centered fluctuation coordinates; sums to 0 up to roundoff.
using FluctuationVector = std::vector<double>;

void check_zero_sum(const FluctuationVector& x, double tol = 1e-10);

// Dense symmetric matrix, row major.
struct CovMatrix {
  int dim = 0;
  std::vector<double> a;

  static CovMatrix zero(int d) {
    CovMatrix m;
    m.dim = d;
    m.a.assign(static_cast<size_t>(d) * d, 0.0);
    return m;
  }
  double& at(int i, int j) { return a[static_cast<size_t>(i) * dim + j]; }
  double at(int i, int j) const { return a[static_cast<size_t>(i) * dim + j]; }
  double frobenius() const;
};

} // namespace mdslb

#endif

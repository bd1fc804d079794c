#include "mdslb/types.hpp"

#include <cmath>
#include <numeric>

namespace mdslb {

void SystemParams::validate() const {
  if (n < 1) throw ValidationError("n must be at least 1");
  if (L < 1) throw ValidationError("L must be at least 1");
  if (k < 1) throw ValidationError("k must be at least 1");
  if (k > L) throw ValidationError("k must satisfy k <= L");
  if (static_cast<int64_t>(L) > n) throw ValidationError("L must satisfy L <= n");
  if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
  if (!(T > 0.0)) throw ValidationError("T must be positive");
  if (!(c >= 1.0)) throw ValidationError("c must be at least 1");
}

void TruncationConfig::validate() const {
  if (K < 2) throw ValidationError("K must be at least 2");
  if (!(leak_tol > 0.0)) throw ValidationError("leak_tol must be positive");
}

double QueuePMF::total() const {
  double s = tail_mass;
  for (double p : probs) s += p;
  return s;
}

void QueuePMF::check(double tol) const {
  if (probs.empty()) throw ValidationError("pmf has no coordinates");
  for (size_t j = 0; j < probs.size(); ++j) {
    if (!(probs[j] >= -tol))
      throw ValidationError("pmf coordinate " + std::to_string(j) + " is negative");
  }
  if (!(tail_mass >= -tol)) throw ValidationError("pmf tail mass is negative");
  if (std::fabs(total() - 1.0) > tol)
    throw ValidationError("pmf mass is not 1 within tolerance");
}

QueuePMF normalize(QueuePMF pmf) {
  double s = pmf.total();
  if (!(s > 0.0)) throw ValidationError("cannot normalize pmf with mass <= 0");
  for (double& p : pmf.probs) p /= s;
  pmf.tail_mass /= s;
  return pmf;
}

QueuePMF pmf_delta0(int K) {
  QueuePMF pmf;
  pmf.probs.assign(static_cast<size_t>(K) + 1, 0.0);
  pmf.probs[0] = 1.0;
  return pmf;
}

void CountVector::check() const {
  int64_t s = 0;
  for (int64_t c : counts) {
    if (c < 0) throw ValidationError("negative server count");
    s += c;
  }
  if (s != n) throw ValidationError("server counts do not sum to n");
}

CountVector counts_all_empty(int64_t n) {
  CountVector cv;
  cv.n = n;
  cv.counts.assign(1, n);
  return cv;
}

QueuePMF pmf_from_counts(const CountVector& cv, int K) {
  QueuePMF pmf;
  pmf.probs.assign(static_cast<size_t>(K) + 1, 0.0);
  double inv = 1.0 / static_cast<double>(cv.n);
  for (size_t j = 0; j < cv.counts.size(); ++j) {
    if (j <= static_cast<size_t>(K))
      pmf.probs[j] = static_cast<double>(cv.counts[j]) * inv;
    else
      pmf.tail_mass += static_cast<double>(cv.counts[j]) * inv;
  }
  return pmf;
}

void check_zero_sum(const FluctuationVector& x, double tol) {
  double s = std::accumulate(x.begin(), x.end(), 0.0);
  if (std::fabs(s) > tol)
    throw ValidationError("fluctuation vector does not sum to 0 within tolerance");
}

double CovMatrix::frobenius() const {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

} // namespace mdslb

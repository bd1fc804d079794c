#ifndef MDSLB_MATH_UTIL_HPP
#define MDSLB_MATH_UTIL_HPP

#include <cstdint>

namespace mdslb {

// x^e for small nonnegative integer e, with 0^0 = 1.
inline double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// m! as double, exact for m <= 22 (covers every use here; L <= 8 in practice)
double factorial(int m);

// Binomial coefficient C(a, b) with the counting conventions used throughout:
// C(a, b) = 0 when b < 0 or a < b, C(0, 0) = 1. Computed as a product of
// ratios in double; exact for small arguments, relative error ~1e-15 for the
// large ones (a up to ~1e6, b <= 8).
double binom_count(int64_t a, int b);

// Standard normal quantile (Acklam's rational approximation, |err| < 1e-9).
double normal_quantile(double p);

} // namespace mdslb

#endif

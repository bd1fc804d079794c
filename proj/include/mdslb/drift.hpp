#ifndef MDSLB_DRIFT_HPP
#define MDSLB_DRIFT_HPP

#include <vector>

#include "mdslb/types.hpp"

namespace mdslb {

// One component of the directional derivative of the arrival kernel at
// coordinate j in direction x:
//   which=1: prefix-mass partial times sum_{m<j} x_m
//   which=2: own-coordinate partial times x_j
//   which=3: tail-mass partial times sum_{m>j} x_m, the tail directional
//            factor computed as -sum_{m<=j} x_m (equal for zero-sum x)
//   which=4: service difference x_{j+1} - x_j
double xi_components(const FluctuationVector& x, const QueuePMF& r, int L,
                     int k, int which, int j);

// Fluctuation drift: directional derivative of drift_F at r in direction x,
//   G_j = lambda L! [Dzeta(j-1) - Dzeta(j)] + k (x_{j+1} - x_j 1{j>=1}),
// linear in x. Requires x.size() == K+1 == r coordinate count.
std::vector<double> drift_G(const FluctuationVector& x, const QueuePMF& r,
                            const SystemParams& p, int K);

// d-choice form, directional derivative of drift_F_powerd in tail sums:
//   (G_d)_j = lambda d [v_{j-1}^{d-1} w_{j-1} - 2 v_j^{d-1} w_j
//             + v_{j+1}^{d-1} w_{j+1}] + (x_{j+1} - x_j 1{j>=1})
// with v the suffix masses of r and w the suffix sums of x. Equals drift_G
// at L=d, k=1 for zero-sum x.
std::vector<double> drift_G_powerd(const FluctuationVector& x, const QueuePMF& r,
                                   int d, double lambda, int K);

} // namespace mdslb

#endif

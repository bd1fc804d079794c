#ifndef MDSLB_COVARIANCE_HPP
#define MDSLB_COVARIANCE_HPP

#include <vector>

#include "mdslb/types.hpp"

namespace mdslb {

// Second moment of the arrival jump at coordinate j: sum over sampled-level
// splits of <jump, e_j>^2 weighted by the limit sampling weights. The level
// classes are {< j-1, = j-1, = j, > j}; the signed task count at j is
// min(i2, (k-i1)+) - min(i3, (k-i1-i2)+). All split sizes range freely,
// the saturating weights kill the non-contributing ones.
double zbar_diag(int j, const QueuePMF& r, int L, int k);

// Cross moment <jump, e_i><jump, e_j> for i < j, same construction with
// level classes {< i-1, = i-1, = i, i+1..j-2, = j-1, = j, > j}. For
// j = i+1 the classes "= i" and "= j-1" coincide, which couples the two
// signed counts through the shared split size.
double zbar_offdiag(int i, int j, const QueuePMF& r, int L, int k);

// Local covariance operator of the limit diffusion at state r: arrival
// second moments lambda * L! * zbar plus the departure terms
// k * sum_{i>=1} (e_{i-1} - e_i)(e_{i-1} - e_i)^T r_i, truncated to 0..K.
// Rows sum to 0 up to the mass pushed past K.
CovMatrix phi_matrix(const QueuePMF& r, const SystemParams& p);

// Same operator computed by exhaustive configuration enumeration and
// literal outer products. Arbiter for phi_matrix and the zbar kernels.
CovMatrix phi_oracle(const QueuePMF& r, const SystemParams& p);

// d-choice specialization: the arrival task moves the minimum sampled
// level j up by one with weight v_j^d - v_{j+1}^d, v = suffix mass.
// Equals phi_matrix with L=d, k=1.
CovMatrix phi_powerd(const QueuePMF& r, double lambda, int d);

struct EigenSym {
  std::vector<double> values;
  CovMatrix vectors; // columns are eigenvectors
};

// Cyclic Jacobi for symmetric matrices. Converges when the off-diagonal
// Frobenius norm drops below rel_tol * max(1, ||A||_F).
EigenSym jacobi_eigensym(const CovMatrix& A, double rel_tol = 1e-13,
                         int max_sweeps = 100);

// Symmetric PSD square root via Jacobi. Eigenvalues below
// -1e-10 * max eigenvalue raise NumericalError; small negatives clamp to 0.
CovMatrix sqrt_psd(const CovMatrix& A);

// Prelimit analog of zbar_diag for integer counts, with binomial weights.
double z_prelimit_diag(int j, const CountVector& x, int L, int k);

// Prelimit cross moment for i < j, binomial weights.
double z_prelimit_offdiag(int i, int j, const CountVector& x, int L, int k);

} // namespace mdslb

#endif

#include "mdslb/covariance.hpp"

#include <algorithm>
#include <cmath>

#include "mdslb/math_util.hpp"
#include "mdslb/rates.hpp"

namespace mdslb {

namespace {

inline int pos(int x) { return x > 0 ? x : 0; }

inline double tail_above(const QueuePMF& r, int j) {
  double t = r.tail_mass;
  for (int m = j + 1; m <= r.K(); ++m) t += r.probs[static_cast<size_t>(m)];
  return t;
}

inline double prefix_below(const QueuePMF& r, int j) {
  double s = 0.0;
  for (int m = 0; m < j && m <= r.K(); ++m) s += r.probs[static_cast<size_t>(m)];
  return s;
}

} // namespace

double zbar_diag(int j, const QueuePMF& r, int L, int k) {
  double c1 = prefix_below(r, j - 1); // levels <= j-2
  double c2 = r.at(j - 1);
  double c3 = r.at(j);
  double c4 = tail_above(r, j);

  double z = 0.0;
  for (int i1 = 0; i1 < k && i1 <= L; ++i1) {
    double t1 = ipow(c1, i1) / factorial(i1);
    if (t1 == 0.0) continue;
    for (int i2 = 0; i2 <= L - i1; ++i2) {
      double t2 = ipow(c2, i2) / factorial(i2);
      if (t2 == 0.0) continue;
      for (int i3 = 0; i3 <= L - i1 - i2; ++i3) {
        int w = std::min(i2, pos(k - i1)) - std::min(i3, pos(k - i1 - i2));
        if (w == 0) continue;
        double t3 = ipow(c3, i3) / factorial(i3);
        if (t3 == 0.0) continue;
        int i4 = L - i1 - i2 - i3;
        double t4 = ipow(c4, i4) / factorial(i4);
        z += static_cast<double>(w) * w * t1 * t2 * t3 * t4;
      }
    }
  }
  return z;
}

double zbar_offdiag(int i, int j, const QueuePMF& r, int L, int k) {
  if (i > j) std::swap(i, j);
  if (i == j) return zbar_diag(i, r, L, k);
  bool adj = (j == i + 1);
  double c1 = prefix_below(r, i - 1); // levels <= i-2
  double c2 = r.at(i - 1);
  double c3 = r.at(i);
  double c4 = 0.0; // levels i+1 .. j-2
  for (int m = i + 1; m <= j - 2; ++m) c4 += r.at(m);
  double c5 = adj ? 0.0 : r.at(j - 1);
  double c6 = r.at(j);
  double c7 = tail_above(r, j);

  double z = 0.0;
  for (int i1 = 0; i1 < k && i1 <= L; ++i1) {
    double t1 = ipow(c1, i1) / factorial(i1);
    if (t1 == 0.0) continue;
    for (int i2 = 0; i2 <= L - i1; ++i2) {
      double t2 = ipow(c2, i2) / factorial(i2);
      if (t2 == 0.0) continue;
      for (int i3 = 0; i3 <= L - i1 - i2; ++i3) {
        int wA = std::min(i2, pos(k - i1)) - std::min(i3, pos(k - i1 - i2));
        if (wA == 0) continue;
        double t3 = ipow(c3, i3) / factorial(i3);
        if (t3 == 0.0) continue;
        for (int i4 = 0; i4 <= L - i1 - i2 - i3; ++i4) {
          double t4 = ipow(c4, i4) / factorial(i4);
          if (t4 == 0.0) continue;
          for (int i5 = 0; i5 <= L - i1 - i2 - i3 - i4; ++i5) {
            double t5 = ipow(c5, i5) / factorial(i5);
            if (t5 == 0.0) continue;
            for (int i6 = 0; i6 <= L - i1 - i2 - i3 - i4 - i5; ++i6) {
              int wB = adj ? std::min(i3, pos(k - i1 - i2)) -
                                 std::min(i6, pos(k - i1 - i2 - i3))
                           : std::min(i5, pos(k - i1 - i2 - i3 - i4)) -
                                 std::min(i6, pos(k - i1 - i2 - i3 - i4 - i5));
              if (wB == 0) continue;
              double t6 = ipow(c6, i6) / factorial(i6);
              if (t6 == 0.0) continue;
              int i7 = L - i1 - i2 - i3 - i4 - i5 - i6;
              double t7 = ipow(c7, i7) / factorial(i7);
              z += static_cast<double>(wA) * wB * t1 * t2 * t3 * t4 * t5 * t6 * t7;
            }
          }
        }
      }
    }
  }
  return z;
}

CovMatrix phi_matrix(const QueuePMF& r, const SystemParams& p) {
  int K = r.K();
  double lf = p.lambda * factorial(p.L);
  CovMatrix m = CovMatrix::zero(K + 1);
  for (int j = 0; j <= K; ++j) {
    double diag = lf * zbar_diag(j, r, p.L, p.k) +
                  p.k * (r.at(j + 1) + (j >= 1 ? r.probs[static_cast<size_t>(j)] : 0.0));
    m.at(j, j) = diag;
    for (int i = 0; i < j; ++i) {
      double off = lf * zbar_offdiag(i, j, r, p.L, p.k);
      if (j == i + 1) off -= p.k * r.probs[static_cast<size_t>(j)];
      m.at(i, j) = off;
      m.at(j, i) = off;
    }
  }
  return m;
}

CovMatrix phi_oracle(const QueuePMF& r, const SystemParams& p) {
  int K = r.K();
  double lf = p.lambda * factorial(p.L);
  CovMatrix m = CovMatrix::zero(K + 1);
  // level K+1 stands for the whole tail; aggregating it is exact because the
  // run weights multiply out to tail_mass^m / m!
  for_each_config(K + 1, p.L, [&](const std::vector<int>& lv) {
    double w = 1.0;
    size_t s = 0;
    while (s < lv.size()) {
      size_t e = s;
      while (e < lv.size() && lv[e] == lv[s]) ++e;
      int cnt = static_cast<int>(e - s);
      double mass = lv[s] <= K ? r.probs[static_cast<size_t>(lv[s])] : r.tail_mass;
      w *= ipow(mass, cnt) / factorial(cnt);
      s = e;
    }
    if (w == 0.0) return;
    Configuration cfg{lv};
    std::vector<int> d = jump_vector(cfg, p.k, K + 1);
    for (int a = 0; a <= K; ++a) {
      if (d[static_cast<size_t>(a)] == 0) continue;
      for (int b = 0; b <= K; ++b) {
        if (d[static_cast<size_t>(b)] == 0) continue;
        m.at(a, b) += lf * w * d[static_cast<size_t>(a)] * d[static_cast<size_t>(b)];
      }
    }
  });
  // departures, as literal outer products of e_{i-1} - e_i
  std::vector<double> v(static_cast<size_t>(K) + 1, 0.0);
  for (int i = 1; i <= K; ++i) {
    std::fill(v.begin(), v.end(), 0.0);
    v[static_cast<size_t>(i) - 1] = 1.0;
    v[static_cast<size_t>(i)] = -1.0;
    double wi = p.k * r.probs[static_cast<size_t>(i)];
    for (int a = 0; a <= K; ++a)
      for (int b = 0; b <= K; ++b)
        m.at(a, b) += wi * v[static_cast<size_t>(a)] * v[static_cast<size_t>(b)];
  }
  return m;
}

CovMatrix phi_powerd(const QueuePMF& r, double lambda, int d) {
  int K = r.K();
  CovMatrix m = CovMatrix::zero(K + 1);
  // suffix masses v[j], j = 0..K+1
  std::vector<double> v(static_cast<size_t>(K) + 2, 0.0);
  v[static_cast<size_t>(K) + 1] = r.tail_mass;
  for (int j = K; j >= 0; --j)
    v[static_cast<size_t>(j)] = v[static_cast<size_t>(j) + 1] + r.probs[static_cast<size_t>(j)];
  for (int j = 0; j <= K; ++j) {
    double wj = lambda * (ipow(v[static_cast<size_t>(j)], d) -
                          ipow(v[static_cast<size_t>(j) + 1], d));
    m.at(j, j) += wj;
    if (j + 1 <= K) {
      m.at(j + 1, j + 1) += wj;
      m.at(j, j + 1) -= wj;
      m.at(j + 1, j) -= wj;
    }
  }
  for (int i = 1; i <= K; ++i) {
    double pi = r.probs[static_cast<size_t>(i)];
    m.at(i - 1, i - 1) += pi;
    m.at(i, i) += pi;
    m.at(i - 1, i) -= pi;
    m.at(i, i - 1) -= pi;
  }
  return m;
}

EigenSym jacobi_eigensym(const CovMatrix& A, double rel_tol, int max_sweeps) {
  int n = A.dim;
  CovMatrix B = A;
  CovMatrix V = CovMatrix::zero(n);
  for (int i = 0; i < n; ++i) V.at(i, i) = 1.0;
  double tol = rel_tol * std::max(1.0, A.frobenius());

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off2 = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off2 += B.at(p, q) * B.at(p, q);
    if (std::sqrt(2.0 * off2) <= tol) {
      EigenSym e;
      e.values.resize(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) e.values[static_cast<size_t>(i)] = B.at(i, i);
      e.vectors = V;
      return e;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = B.at(p, q);
        if (apq == 0.0) continue;
        double theta = (B.at(q, q) - B.at(p, p)) / (2.0 * apq);
        double t =
            (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double cth = 1.0 / std::sqrt(t * t + 1.0);
        double sth = t * cth;
        double bpp = B.at(p, p), bqq = B.at(q, q);
        B.at(p, p) = bpp - t * apq;
        B.at(q, q) = bqq + t * apq;
        B.at(p, q) = 0.0;
        B.at(q, p) = 0.0;
        for (int rr = 0; rr < n; ++rr) {
          if (rr == p || rr == q) continue;
          double brp = B.at(rr, p), brq = B.at(rr, q);
          B.at(rr, p) = cth * brp - sth * brq;
          B.at(p, rr) = B.at(rr, p);
          B.at(rr, q) = sth * brp + cth * brq;
          B.at(q, rr) = B.at(rr, q);
        }
        for (int rr = 0; rr < n; ++rr) {
          double vrp = V.at(rr, p), vrq = V.at(rr, q);
          V.at(rr, p) = cth * vrp - sth * vrq;
          V.at(rr, q) = sth * vrp + cth * vrq;
        }
      }
    }
  }
  throw NumericalError("jacobi eigensolver did not converge");
}

CovMatrix sqrt_psd(const CovMatrix& A) {
  EigenSym e = jacobi_eigensym(A);
  int n = A.dim;
  double lmax = 0.0;
  for (double v : e.values) lmax = std::max(lmax, v);
  double floor = -1e-10 * lmax;
  std::vector<double> s(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double v = e.values[static_cast<size_t>(i)];
    if (v < floor)
      throw NumericalError("covariance matrix is not PSD within tolerance");
    s[static_cast<size_t>(i)] = std::sqrt(std::max(v, 0.0));
  }
  CovMatrix out = CovMatrix::zero(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        acc += e.vectors.at(a, i) * s[static_cast<size_t>(i)] * e.vectors.at(b, i);
      out.at(a, b) = acc;
      out.at(b, a) = acc;
    }
  }
  return out;
}

namespace {

// class counts around level j for integer server counts
struct PrelimitClasses {
  int64_t below2 = 0; // levels <= j-2
  int64_t atm1 = 0;   // level j-1
  int64_t at = 0;     // level j
  int64_t above = 0;  // levels > j
};

PrelimitClasses split_counts(int j, const CountVector& x) {
  PrelimitClasses c;
  for (size_t m = 0; m < x.counts.size(); ++m) {
    int mi = static_cast<int>(m);
    if (mi <= j - 2) c.below2 += x.counts[m];
    else if (mi == j - 1) c.atm1 += x.counts[m];
    else if (mi == j) c.at += x.counts[m];
    else c.above += x.counts[m];
  }
  return c;
}

} // namespace

double z_prelimit_diag(int j, const CountVector& x, int L, int k) {
  PrelimitClasses c = split_counts(j, x);
  double z = 0.0;
  for (int i1 = 0; i1 < k && i1 <= L; ++i1) {
    double t1 = binom_count(c.below2, i1);
    if (t1 == 0.0) continue;
    for (int i2 = 0; i2 <= L - i1; ++i2) {
      double t2 = binom_count(c.atm1, i2);
      if (t2 == 0.0) continue;
      for (int i3 = 0; i3 <= L - i1 - i2; ++i3) {
        int w = std::min(i2, pos(k - i1)) - std::min(i3, pos(k - i1 - i2));
        if (w == 0) continue;
        double t3 = binom_count(c.at, i3);
        if (t3 == 0.0) continue;
        double t4 = binom_count(c.above, L - i1 - i2 - i3);
        z += static_cast<double>(w) * w * t1 * t2 * t3 * t4;
      }
    }
  }
  return z;
}

double z_prelimit_offdiag(int i, int j, const CountVector& x, int L, int k) {
  if (i > j) std::swap(i, j);
  if (i == j) return z_prelimit_diag(i, x, L, k);
  bool adj = (j == i + 1);
  int64_t c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0, c7 = 0;
  for (size_t m = 0; m < x.counts.size(); ++m) {
    int mi = static_cast<int>(m);
    if (mi <= i - 2) c1 += x.counts[m];
    else if (mi == i - 1) c2 += x.counts[m];
    else if (mi == i) c3 += x.counts[m];
    else if (mi <= j - 2) c4 += x.counts[m];
    else if (mi == j - 1 && !adj) c5 += x.counts[m];
    else if (mi == j) c6 += x.counts[m];
    else c7 += x.counts[m];
  }
  double z = 0.0;
  for (int i1 = 0; i1 < k && i1 <= L; ++i1) {
    double t1 = binom_count(c1, i1);
    if (t1 == 0.0) continue;
    for (int i2 = 0; i2 <= L - i1; ++i2) {
      double t2 = binom_count(c2, i2);
      if (t2 == 0.0) continue;
      for (int i3 = 0; i3 <= L - i1 - i2; ++i3) {
        int wA = std::min(i2, pos(k - i1)) - std::min(i3, pos(k - i1 - i2));
        if (wA == 0) continue;
        double t3 = binom_count(c3, i3);
        if (t3 == 0.0) continue;
        for (int i4 = 0; i4 <= L - i1 - i2 - i3; ++i4) {
          double t4 = binom_count(c4, i4);
          if (t4 == 0.0) continue;
          for (int i5 = 0; i5 <= L - i1 - i2 - i3 - i4; ++i5) {
            double t5 = binom_count(c5, i5);
            if (t5 == 0.0) continue;
            for (int i6 = 0; i6 <= L - i1 - i2 - i3 - i4 - i5; ++i6) {
              int wB = adj ? std::min(i3, pos(k - i1 - i2)) -
                                 std::min(i6, pos(k - i1 - i2 - i3))
                           : std::min(i5, pos(k - i1 - i2 - i3 - i4)) -
                                 std::min(i6, pos(k - i1 - i2 - i3 - i4 - i5));
              if (wB == 0) continue;
              double t6 = binom_count(c6, i6);
              if (t6 == 0.0) continue;
              double t7 = binom_count(c7, L - i1 - i2 - i3 - i4 - i5 - i6);
              z += static_cast<double>(wA) * wB * t1 * t2 * t3 * t4 * t5 * t6 * t7;
            }
          }
        }
      }
    }
  }
  return z;
}

} // namespace mdslb

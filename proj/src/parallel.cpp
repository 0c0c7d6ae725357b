#include "commaware/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace commaware {

void parallel_for(int n, const std::function<void(int)>& fn) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    fn(i);
  }
}

namespace {

inline double cov_entry(double dx, double dy, double xi2, double inv_eta) {
  return xi2 * std::exp(-std::sqrt(dx * dx + dy * dy) * inv_eta);
}

}  // namespace

Eigen::MatrixXd exponential_covariance(const std::vector<double>& xs,
                                       const std::vector<double>& ys,
                                       double xi2, double eta, double jitter) {
  const int n = static_cast<int>(xs.size());
  Eigen::MatrixXd m(n, n);
  const double inv_eta = 1.0 / eta;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      m(i, j) = cov_entry(xs[i] - xs[j], ys[i] - ys[j], xi2, inv_eta);
    }
    m(j, j) += jitter;
  }
  return m;
}

Eigen::MatrixXd exponential_covariance_serial(const std::vector<double>& xs,
                                              const std::vector<double>& ys,
                                              double xi2, double eta,
                                              double jitter) {
  const int n = static_cast<int>(xs.size());
  Eigen::MatrixXd m(n, n);
  const double inv_eta = 1.0 / eta;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      m(i, j) = cov_entry(xs[i] - xs[j], ys[i] - ys[j], xi2, inv_eta);
    }
    m(j, j) += jitter;
  }
  return m;
}

bool cholesky_in_place(Eigen::MatrixXd& a, int block) {
  using Eigen::MatrixXd;
  const int n = static_cast<int>(a.rows());
  const int nb = (n + block - 1) / block;
  for (int kb = 0; kb < nb; ++kb) {
    const int k0 = kb * block;
    const int kw = std::min(block, n - k0);
    MatrixXd dk = a.block(k0, k0, kw, kw).selfadjointView<Eigen::Lower>();
    Eigen::LLT<MatrixXd> llt(dk);
    if (llt.info() != Eigen::Success) return false;
    a.block(k0, k0, kw, kw).triangularView<Eigen::Lower>() = llt.matrixL();
#pragma omp parallel for schedule(dynamic)
    for (int ib = kb + 1; ib < nb; ++ib) {
      const int i0 = ib * block;
      const int iw = std::min(block, n - i0);
      auto panel = a.block(i0, k0, iw, kw);
      a.block(k0, k0, kw, kw)
          .triangularView<Eigen::Lower>()
          .transpose()
          .solveInPlace<Eigen::OnTheRight>(panel);
    }
    // Trailing tiles are pairwise disjoint, so each is produced by exactly
    // one task with a fixed operation order and the factor does not depend
    // on the thread count.
    const long nt = nb - kb - 1;
    const long npairs = nt * (nt + 1) / 2;
#pragma omp parallel for schedule(dynamic)
    for (long t = 0; t < npairs; ++t) {
      long r = static_cast<long>((std::sqrt(8.0 * static_cast<double>(t) + 1.0) - 1.0) / 2.0);
      while ((r + 1) * (r + 2) / 2 <= t) ++r;
      while (r * (r + 1) / 2 > t) --r;
      const long c = t - r * (r + 1) / 2;
      const int ib = kb + 1 + static_cast<int>(r);
      const int jb = kb + 1 + static_cast<int>(c);
      const int i0 = ib * block;
      const int iw = std::min(block, n - i0);
      const int j0 = jb * block;
      const int jw = std::min(block, n - j0);
      if (ib == jb) {
        a.block(i0, j0, iw, jw)
            .selfadjointView<Eigen::Lower>()
            .rankUpdate(a.block(i0, k0, iw, kw), -1.0);
      } else {
        a.block(i0, j0, iw, jw).noalias() -=
            a.block(i0, k0, iw, kw) * a.block(j0, k0, jw, kw).transpose();
      }
    }
  }
  return true;
}

bool cholesky_in_place_serial(Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
  return true;
}

Eigen::VectorXd lower_triangular_matvec(const Eigen::MatrixXd& l,
                                        const Eigen::VectorXd& z) {
  const int n = static_cast<int>(l.rows());
  Eigen::VectorXd y(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= i; ++j) acc += l(i, j) * z(j);
    y(i) = acc;
  }
  return y;
}

Eigen::VectorXd lower_triangular_matvec_serial(const Eigen::MatrixXd& l,
                                               const Eigen::VectorXd& z) {
  const int n = static_cast<int>(l.rows());
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= i; ++j) acc += l(i, j) * z(j);
    y(i) = acc;
  }
  return y;
}

}  // namespace commaware

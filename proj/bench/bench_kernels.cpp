// Compares the serial reference kernels against the OpenMP versions on a
// synthetic exponential-covariance problem and prints a timing table.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "commaware/parallel.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void run_case(int side) {
  const int n = side * side;
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = (i % side) * 0.5;
    ys[i] = (i / side) * 0.5;
  }
  const double xi2 = 10.24, eta = 3.09, jitter = 1e-9;

  auto t0 = Clock::now();
  Eigen::MatrixXd cov_serial =
      commaware::exponential_covariance_serial(xs, ys, xi2, eta, jitter);
  const double cov_s = seconds_since(t0);

  t0 = Clock::now();
  Eigen::MatrixXd cov_par =
      commaware::exponential_covariance(xs, ys, xi2, eta, jitter);
  const double cov_p = seconds_since(t0);
  const double cov_diff = (cov_serial - cov_par).cwiseAbs().maxCoeff();

  Eigen::MatrixXd chol_serial = cov_serial;
  t0 = Clock::now();
  const bool ok_s = commaware::cholesky_in_place_serial(chol_serial);
  const double chol_s = seconds_since(t0);

  Eigen::MatrixXd chol_par = cov_par;
  t0 = Clock::now();
  const bool ok_p = commaware::cholesky_in_place(chol_par);
  const double chol_p = seconds_since(t0);
  double chol_diff = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      chol_diff = std::max(chol_diff,
                           std::abs(chol_serial(i, j) - chol_par(i, j)));
    }
  }

  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = std::sin(0.1 * i);
  t0 = Clock::now();
  Eigen::VectorXd y_serial =
      commaware::lower_triangular_matvec_serial(chol_par, z);
  const double mv_s = seconds_since(t0);
  t0 = Clock::now();
  Eigen::VectorXd y_par = commaware::lower_triangular_matvec(chol_par, z);
  const double mv_p = seconds_since(t0);
  const double mv_diff = (y_serial - y_par).cwiseAbs().maxCoeff();

  const double chol_gflops = n / 1e3 * n / 1e3 * n / 1e3 / 3.0 / chol_p;
  std::printf("n=%6d | covariance %7.3fs -> %7.3fs (max diff %.1e)\n", n,
              cov_s, cov_p, cov_diff);
  std::printf("         | cholesky   %7.3fs -> %7.3fs (%.1f GFLOPS, ok=%d/%d, "
              "max diff %.1e)\n",
              chol_s, chol_p, chol_gflops, ok_s, ok_p, chol_diff);
  std::printf("         | L*z        %7.3fs -> %7.3fs (max diff %.1e)\n", mv_s,
              mv_p, mv_diff);
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("kernel benchmark, %d thread(s)\n", threads);
  int side = argc > 1 ? std::atoi(argv[1]) : 40;
  if (side < 2) side = 2;
  run_case(side);
  return 0;
}

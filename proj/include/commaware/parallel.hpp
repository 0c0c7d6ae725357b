#pragma once

#include <Eigen/Dense>
#include <functional>

namespace commaware {

// Deterministic data-parallel kernels. Each output element is produced by
// exactly one thread through a fixed sequence of floating point operations,
// so every kernel returns bit-identical results regardless of thread count.
// The *_serial variants are straightforward reference implementations kept
// for testing and benchmarking; the covariance and matvec kernels match them
// bitwise, the tiled Cholesky matches the textbook reference to rounding.

/// Runs fn(i) for i in [0, n) across the OpenMP thread team.
/// fn must write only to index-i outputs.
void parallel_for(int n, const std::function<void(int)>& fn);

/// xi2 * exp(-dist(i,j)/eta) for all point pairs, plus `jitter` on the
/// diagonal. Points are (xs[i], ys[i]). Fills the full symmetric matrix.
Eigen::MatrixXd exponential_covariance(const std::vector<double>& xs,
                                       const std::vector<double>& ys,
                                       double xi2, double eta, double jitter);
Eigen::MatrixXd exponential_covariance_serial(const std::vector<double>& xs,
                                              const std::vector<double>& ys,
                                              double xi2, double eta,
                                              double jitter);

/// In-place Cholesky A = L L^T, lower triangle. Returns false when a pivot
/// is not strictly positive. The strict upper triangle is left untouched.
/// Tiled right-looking form; tiles are updated by disjoint threads so the
/// result does not depend on the thread count.
bool cholesky_in_place(Eigen::MatrixXd& a, int block = 320);
/// Unblocked textbook reference.
bool cholesky_in_place_serial(Eigen::MatrixXd& a);

/// y = L z for lower-triangular L (strict upper triangle ignored).
Eigen::VectorXd lower_triangular_matvec(const Eigen::MatrixXd& l,
                                        const Eigen::VectorXd& z);
Eigen::VectorXd lower_triangular_matvec_serial(const Eigen::MatrixXd& l,
                                               const Eigen::VectorXd& z);

}  // namespace commaware

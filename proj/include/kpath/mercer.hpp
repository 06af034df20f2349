#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "kpath/grid.hpp"
#include "kpath/kernel.hpp"

namespace kpath {

// Nystrom eigendecomposition of a symmetric grid kernel.  Eigenvalues
// approximate those of the integral operator f -> int R(.,s) f(s) ds;
// eigenfunction columns are orthonormal under the quadrature inner product
// (f,g) = h * sum_i f(t_i) g(t_i).
struct MercerDecomposition {
  Grid grid;
  Eigen::VectorXd eigenvalues;    // sorted non-increasing, all >= 0
  Eigen::MatrixXd eigenfunctions; // n_grid x n_kept
  double trace_residual = 0.0;
  int clipped_count = 0;          // discretization negatives clipped to zero
  double clipped_magnitude = 0.0;
  bool tie_at_cut = false;        // lambda_n == lambda_{n+1} within 1e-10 at the drop cut

  int n_kept() const { return static_cast<int>(eigenvalues.size()); }
};

struct ApproxError {
  std::pair<int, int> rank;
  double err_l1 = 0.0;
  double err_l2 = 0.0;
  std::optional<double> err_sup;
};

MercerDecomposition nystrom_decompose(const GridKernel& gk, double drop_tol = 1e-12);

// Q(n;R) = sum_{k<=n} lambda_k phi_k phi_k, the optimal symmetric rank-n
// approximation.  Factors are bound to the decomposition grid.
DegenerateKernel mercer_truncate(const MercerDecomposition& md, int n);

ApproxError tail_errors(const MercerDecomposition& md, int n,
                        const GridKernel* reference = nullptr);

// Truncated SVD of the weighted kernel matrix: the exact L2(T^2) minimizer
// over degenerate kernels of rank (n1,n2) at grid resolution.
std::pair<DegenerateKernel, ApproxError> svd_degenerate_approx(const GridKernel& gk,
                                                               int n1, int n2);

// Gram-Schmidt (in order) on both factor families under the quadrature inner
// product; the coefficient matrix is transformed so the kernel is unchanged.
DegenerateKernel orthonormalize_factors(const DegenerateKernel& dk, const Grid& grid);

// Pointwise table of a degenerate kernel on a grid.
Eigen::MatrixXd degenerate_table(const DegenerateKernel& dk, const Grid& grid);

}  // namespace kpath

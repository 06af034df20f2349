#include "kpath/mercer.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kpath {

namespace {

// Factor handle bound to grid values: evaluable at grid nodes only.
std::function<double(double)> grid_factor(const Grid& grid, Eigen::VectorXd vals) {
  return [grid, v = std::move(vals)](double t) -> double {
    int i = grid.node_index(t);
    if (i < 0) throw std::domain_error("degenerate factor evaluated off-grid");
    return v(i);
  };
}

}  // namespace

MercerDecomposition nystrom_decompose(const GridKernel& gk, double drop_tol) {
  if (!gk.is_symmetric())
    throw std::invalid_argument("nystrom_decompose: kernel must be symmetric");
  if (drop_tol < 0.0) throw std::invalid_argument("nystrom_decompose: drop_tol < 0");
  const double h = gk.grid.spacing();
  // Constant quadrature weight: h^{1/2} K h^{1/2} = h K, already symmetric.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h * gk.values);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("nystrom_decompose: eigensolver did not converge");

  const int n = gk.grid.size();
  Eigen::VectorXd lam = es.eigenvalues().reverse();       // non-increasing
  Eigen::MatrixXd vec = es.eigenvectors().rowwise().reverse();
  const double lam1 = lam(0);
  if (!(lam1 > 0.0))
    throw std::invalid_argument("nystrom_decompose: kernel has no positive eigenvalue");
  if (lam(n - 1) < -1e-6 * lam1)
    throw std::invalid_argument(
        "nystrom_decompose: kernel is not non-negative definite (min eigenvalue " +
        std::to_string(lam(n - 1)) + ")");

  MercerDecomposition md{gk.grid, {}, {}, 0.0, 0, 0.0, false};
  for (int k = 0; k < n; ++k) {
    if (lam(k) < 0.0) {
      ++md.clipped_count;
      md.clipped_magnitude = std::max(md.clipped_magnitude, -lam(k));
      lam(k) = 0.0;
    }
  }
  int keep = 0;
  while (keep < n && lam(keep) >= drop_tol * lam1 && lam(keep) > 0.0) ++keep;
  if (keep == 0) keep = 1;
  md.tie_at_cut = keep < n && std::abs(lam(keep - 1) - lam(keep)) <= 1e-10 * lam1;
  md.trace_residual = lam.tail(n - keep).sum();
  md.eigenvalues = lam.head(keep);
  // Rescale eigenvectors to quadrature-orthonormal eigenfunction values.
  md.eigenfunctions = vec.leftCols(keep) / std::sqrt(h);
  return md;
}

DegenerateKernel mercer_truncate(const MercerDecomposition& md, int n) {
  if (n < 1 || n > md.n_kept())
    throw std::invalid_argument("mercer_truncate: rank out of range");
  DegenerateKernel dk;
  dk.coeff = md.eigenvalues.head(n).asDiagonal();
  dk.left_factors.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k)
    dk.left_factors.push_back(grid_factor(md.grid, md.eigenfunctions.col(k)));
  dk.right_factors = dk.left_factors;
  dk.symmetric = true;
  dk.orthonormalized = true;
  return dk;
}

ApproxError tail_errors(const MercerDecomposition& md, int n, const GridKernel* reference) {
  if (n < 0 || n > md.n_kept())
    throw std::invalid_argument("tail_errors: rank out of range");
  ApproxError e;
  e.rank = {n, n};
  const int kept = md.n_kept();
  e.err_l1 = md.eigenvalues.tail(kept - n).sum() + md.trace_residual;
  e.err_l2 = std::sqrt(md.eigenvalues.tail(kept - n).squaredNorm());
  if (reference != nullptr) {
    if (reference->grid != md.grid)
      throw std::invalid_argument("tail_errors: reference grid mismatch");
    Eigen::MatrixXd rec = md.eigenfunctions.leftCols(n) *
                          md.eigenvalues.head(n).asDiagonal() *
                          md.eigenfunctions.leftCols(n).transpose();
    e.err_sup = (reference->values - rec).cwiseAbs().maxCoeff();
  }
  return e;
}

std::pair<DegenerateKernel, ApproxError> svd_degenerate_approx(const GridKernel& gk,
                                                               int n1, int n2) {
  if (n1 < 1 || n2 < 1)
    throw std::invalid_argument("svd_degenerate_approx: rank must be >= 1");
  const double h = gk.grid.spacing();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(h * gk.values,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (!svd.computeU() || !svd.computeV())
    throw std::runtime_error("svd_degenerate_approx: SVD failed");
  const int n = gk.grid.size();
  const int r = std::min({n1, n2, n});
  const Eigen::VectorXd& sv = svd.singularValues();

  DegenerateKernel dk;
  dk.coeff = sv.head(r).asDiagonal();
  const double root_h = std::sqrt(h);
  for (int k = 0; k < r; ++k) {
    dk.left_factors.push_back(grid_factor(gk.grid, svd.matrixU().col(k) / root_h));
    dk.right_factors.push_back(grid_factor(gk.grid, svd.matrixV().col(k) / root_h));
  }
  dk.symmetric = false;
  dk.orthonormalized = true;

  ApproxError e;
  e.rank = {n1, n2};
  e.err_l2 = std::sqrt(sv.tail(n - r).squaredNorm());
  e.err_l1 = sv.tail(n - r).sum();  // upper bound in the nuclear sense
  Eigen::MatrixXd rec = svd.matrixU().leftCols(r) * sv.head(r).asDiagonal() *
                        svd.matrixV().leftCols(r).transpose();
  e.err_sup = ((h * gk.values - rec) / h).cwiseAbs().maxCoeff();
  return {std::move(dk), e};
}

Eigen::MatrixXd degenerate_table(const DegenerateKernel& dk, const Grid& grid) {
  const int n = grid.size();
  const int n1 = static_cast<int>(dk.left_factors.size());
  const int n2 = static_cast<int>(dk.right_factors.size());
  Eigen::MatrixXd L(n, n1), R(n, n2);
  for (int k = 0; k < n1; ++k)
    for (int i = 0; i < n; ++i) L(i, k) = dk.left_factors[static_cast<size_t>(k)](grid.point(i));
  for (int l = 0; l < n2; ++l)
    for (int i = 0; i < n; ++i) R(i, l) = dk.right_factors[static_cast<size_t>(l)](grid.point(i));
  return L * dk.coeff * R.transpose();
}

namespace {

// QR with the R diagonal forced positive reproduces in-order Gram-Schmidt.
void positive_qr(const Eigen::MatrixXd& A, Eigen::MatrixXd& Q, Eigen::MatrixXd& R) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  const int m = static_cast<int>(A.cols());
  Q = qr.householderQ() * Eigen::MatrixXd::Identity(A.rows(), m);
  R = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  for (int k = 0; k < m; ++k) {
    if (R(k, k) < 0.0) {
      R.row(k) = -R.row(k);
      Q.col(k) = -Q.col(k);
    }
  }
}

}  // namespace

DegenerateKernel orthonormalize_factors(const DegenerateKernel& dk, const Grid& grid) {
  dk.validate();
  const int n = grid.size();
  const double h = grid.spacing();
  const double root_h = std::sqrt(h);
  const int n1 = static_cast<int>(dk.left_factors.size());
  const int n2 = static_cast<int>(dk.right_factors.size());

  Eigen::MatrixXd L(n, n1), Rt(n, n2);
  for (int k = 0; k < n1; ++k)
    for (int i = 0; i < n; ++i) L(i, k) = dk.left_factors[static_cast<size_t>(k)](grid.point(i));
  for (int l = 0; l < n2; ++l)
    for (int i = 0; i < n; ++i) Rt(i, l) = dk.right_factors[static_cast<size_t>(l)](grid.point(i));

  Eigen::MatrixXd QL, RL, QR_, RR;
  positive_qr(root_h * L, QL, RL);
  positive_qr(root_h * Rt, QR_, RR);
  for (const auto& [R, name] : {std::pair<const Eigen::MatrixXd&, const char*>{RL, "left"},
                                {RR, "right"}}) {
    const double lead = std::abs(R(0, 0));
    for (int k = 0; k < R.rows(); ++k)
      if (std::abs(R(k, k)) < 1e-12 * lead)
        throw std::invalid_argument(std::string("orthonormalize_factors: ") + name +
                                    " factors are numerically dependent (true rank " +
                                    std::to_string(k) + ")");
  }

  DegenerateKernel out;
  out.coeff = RL * dk.coeff * RR.transpose();
  for (int k = 0; k < n1; ++k)
    out.left_factors.push_back(grid_factor(grid, QL.col(k) / root_h));
  for (int l = 0; l < n2; ++l)
    out.right_factors.push_back(grid_factor(grid, QR_.col(l) / root_h));
  out.symmetric = false;
  out.orthonormalized = true;
  return out;
}

}  // namespace kpath

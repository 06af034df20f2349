#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kpath/grid.hpp"
#include "kpath/paths.hpp"

namespace kpath {

// Orthonormal piecewise-linear system: Gram-Schmidt of the periodic Schauder
// hats on dyadic knots under the quadrature inner product (f,g) = h sum f g.
struct FranklinBasis {
  Grid grid;
  Eigen::MatrixXd functions;  // n_grid x m, column k-1 holds f_k
  std::vector<double> knots;  // finest dyadic knot set covered by the basis

  int count() const { return static_cast<int>(functions.cols()); }
};

// f_1 is the constant; f_m for m in (2^l, 2^(l+1)] is built from the hat
// centered at the (m - 2^l)-th odd multiple of period / 2^(l+1).
FranklinBasis franklin_basis(int m, const Grid& grid);

Eigen::MatrixXd gram_matrix(const FranklinBasis& basis);

// zeta_k = (path, f_k) under the quadrature inner product.
std::vector<double> ff_coeffs(const GridFunction& path, const FranklinBasis& basis);

// sum_{k=n+1}^{m} zeta_k f_k (1-based k; pass n = 0 for the full sum).
GridFunction ff_reconstruct(const FranklinBasis& basis, const std::vector<double>& coeffs,
                            int n, int m);

struct BetaEstimate {
  int n = 0;
  int m = 0;
  double mean = 0.0;       // E arctan || block reconstruction ||_inf, in [0, pi/2]
  double std_error = 0.0;
  int n_samples = 0;
};

BetaEstimate beta_estimate(const PathEnsemble& ensemble, const FranklinBasis& basis,
                           int n, int m);

// rho(xi, eta) = E arctan |xi - eta| over paired samples.
double arctan_metric(const std::vector<double>& xs, const std::vector<double>& ys);

// Deterministic random sequence: value depends only on (seed, path, index).
struct SequenceSampler {
  std::string description;
  std::function<double(std::uint64_t path, int index)> sample;  // index >= 1
};

SequenceSampler seq_zero();
// xi(n) = eta / n with one standard normal eta per path.
SequenceSampler seq_inverse_index(std::uint64_t seed);
// xi(n) = eta constant along the path.
SequenceSampler seq_constant_normal(std::uint64_t seed);
// xi(n) = independent standard normals.
SequenceSampler seq_iid_normal(std::uint64_t seed);
// xi(n) = zeta_n / n^power with independent normals zeta_n.
SequenceSampler seq_decaying_normal(std::uint64_t seed, double power);
// xi(n) = eta / log(n + 1).
SequenceSampler seq_log_decay(std::uint64_t seed);

enum class SeqMode { kappa, gamma };

struct SeqEstimate {
  int n = 0;
  int m = 0;
  double mean = 0.0;
  double std_error = 0.0;
  int n_samples = 0;
};

// kappa: E arctan max_{k=n..m} |xi(k)|; gamma: same with |xi(k) - xi(n)|.
SeqEstimate kappa_gamma(const SequenceSampler& sampler, int n, int m, int M,
                        SeqMode mode);

struct MonotoneSupReport {
  std::vector<int> n_values;
  std::vector<double> mean_eta;  // E sup_{m >= n} |arctan xi(m)|, truncated
  int horizon = 0;
  bool truncation_warning = false;  // horizon below 4 * N_max
  bool per_path_monotone = false;
  bool decays = false;  // last mean <= quarter of the first
};

// eta(n) = sup_{m >= n} |arctan xi(m)| with the sup truncated at the horizon
// (an underestimate); horizon <= 0 selects 4 * N_max.
MonotoneSupReport monotone_sup_criterion(const SequenceSampler& sampler, int N_max,
                                         int M, int horizon = 0);

}  // namespace kpath

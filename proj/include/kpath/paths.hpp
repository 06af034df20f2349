#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "kpath/grid.hpp"
#include "kpath/kernel.hpp"
#include "kpath/mercer.hpp"

namespace kpath {

// Monte Carlo ensemble of simulated paths, one per row.  Bit-exactly
// reproducible from (source description, seed): path i draws from the
// counter stream (seed, i), so worker count never changes the result.
struct PathEnsemble {
  Grid grid;
  Eigen::MatrixXd paths;  // M x n_grid
  int n_terms = 0;
  std::uint64_t seed = 0;
  std::string source;

  int n_paths() const { return static_cast<int>(paths.rows()); }
  Eigen::VectorXd sup_norms() const { return paths.cwiseAbs().rowwise().maxCoeff(); }
};

struct TauEstimate {
  int n = 0;
  int m = 0;
  double mean = 0.0;
  double std_error = 0.0;
  int n_samples = 0;
};

enum class ProfileVerdict { consistent, violated, inconclusive };

struct TauProfile {
  std::vector<TauEstimate> estimates;
  double running_sup = 0.0;
  ProfileVerdict verdict = ProfileVerdict::inconclusive;
};

// Karhunen-Loeve partial sum xi_n(t) = sum_{k<=n} sqrt(lambda_k) zeta_k phi_k(t).
PathEnsemble kl_simulate(const MercerDecomposition& md, int n_terms, int M,
                         std::uint64_t seed);

// tau_n^m = E sup_t |sum_{k=n+1}^m sqrt(lambda_k) eta_k phi_k(t)|, Monte Carlo
// over M draws with the grid sup.  Block indices follow the paper's 1-based
// convention: the block covers eigenvalue indices n+1 .. m.
TauEstimate tau_estimate(const MercerDecomposition& md, int n, int m, int M,
                         std::uint64_t seed);

// Same semi-norm for a lacunary process xi = sum b_k eps_k cos(n_k t).  The
// sup over the period is computed by certified branch and bound on the
// frequency-reduced block, so arbitrarily large frequencies are exact.
TauEstimate tau_estimate_lacunar(const LacunarSpec& spec, int n, int m, int M,
                                 std::uint64_t seed, double sup_tol = 1e-4);

// Consecutive (n,m) index blocks.
using BlockList = std::vector<std::pair<int, int>>;

TauProfile tau_profile(const MercerDecomposition& md, const BlockList& blocks,
                       int M, std::uint64_t seed);
TauProfile tau_profile_lacunar(const LacunarSpec& spec, const BlockList& blocks,
                               int M, std::uint64_t seed, double sup_tol = 1e-4);

struct MomentGrowthReport {
  std::vector<double> p_values;
  std::vector<double> moments;  // (E ||xi||^p)^{1/p}
  std::vector<double> ratios;   // moment / (E||xi|| * sqrt(p))
  double bound = 3.0;
  bool bounded = false;
  bool degenerate = false;  // all-zero ensemble
};

MomentGrowthReport sup_moment_growth(const PathEnsemble& ensemble,
                                     const std::vector<double>& p_list,
                                     double bound = 3.0);

struct LilReport {
  std::vector<double> eps;
  std::vector<double> mean_sup;        // E sup_{[eps, e^-4]} |beta|
  std::vector<double> frac_sup_below;  // fraction of paths with sup <= 2.5
  std::vector<double> median_range;    // median over paths of range on [eps, 10 eps]
  int n_paths = 0;
  int n_times = 0;
};

// Brownian motion on (0, e^-4] via cumulative Gaussian increments on a
// geometric time grid refining toward 0; beta(t) = w(t)/sqrt(2 t log|log t|).
LilReport lil_example(int M, const std::vector<double>& eps_list, std::uint64_t seed);

struct Lemma41Report {
  std::vector<int> truncations;    // nu values tested
  std::vector<double> mean_sup;    // E ||eta_n||_inf estimates
  std::vector<double> ratios;      // mean_sup / (sigma(n) sqrt(log n))
  double max_ratio = 0.0;
};

// E ||eta_n||_inf <= C sigma(n) sqrt(log n) for Gaussian trig polynomials:
// ratio profile across lacunary truncations at nu terms (degree n = n_nu).
Lemma41Report lemma41_check(const LacunarSpec& spec, const std::vector<int>& nu_list,
                            int M, std::uint64_t seed, double sup_tol = 1e-4);

}  // namespace kpath

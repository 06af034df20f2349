#pragma once

#include <string>
#include <vector>

#include "kpath/blocks.hpp"
#include "kpath/grid.hpp"
#include "kpath/kernel.hpp"
#include "kpath/mercer.hpp"
#include "kpath/trig.hpp"

namespace kpath {

enum class SeriesVerdict { converges, diverges, inconclusive };

std::string to_string(SeriesVerdict v);

// Numerical evidence about an infinite series, never a theorem.
struct ContinuityReport {
  std::string criterion;
  std::vector<double> terms;
  std::vector<double> partial_sums;
  double tail_estimate = 0.0;  // meaningful when verdict == converges
  SeriesVerdict verdict = SeriesVerdict::inconclusive;
  std::string assumptions;
};

// Classification contract for a finite prefix of a positive series: a
// trailing run of zero terms marks a terminated sum (converges); otherwise
// converges when the trailing term ratios stay below 0.95 (geometric tail) or
// the estimated tail is below 1e-6 of the partial sum; diverges when the last
// ten terms are non-decreasing or a power law fitted to the tail fails the
// integral test; inconclusive otherwise.
SeriesVerdict classify_series(const std::vector<double>& terms, double* tail_estimate);

ContinuityReport make_series_report(std::string criterion, std::vector<double> terms,
                                    std::string assumptions = "");

// Entropy-type series sum_k E^{1/2}([n(k)/2], [n(k)/2]; R) sqrt(log n(k+1)).
// The L2 variant measures E on the sampled kernel via the Parseval tail; the
// lacunary variant uses the exact sup-norm tail sums, so super-dyadic blocks
// far beyond the grid are fine.  `kernel` carries the covariance coefficients
// a_k (square the process coefficients b_k first).
ContinuityReport sigma_e_series(const GridKernel& gk, const BlockSequence& blocks,
                                int K_max);
ContinuityReport sigma_e_series(const LacunarSpec& kernel, const BlockSequence& blocks,
                                int K_max);

// Integral test int_0^inf omega^{1/2}(R, e^{-x^2}) dx by composite midpoint
// quadrature.  The grid variant reads the modulus off the sampled kernel and
// refuses x beyond the resolution limit sqrt(log(1/(2h))); pass x_max <= 0 to
// integrate up to that limit.  The lacunary variant uses the coefficient
// envelope omega(delta) ~ 2 sum a_k min(2, n_k delta), which captures the
// asymptotics no grid can hold.
ContinuityReport fernique_integral(const GridKernel& gk, double x_max = 0.0,
                                   int n_quad = 512);
ContinuityReport fernique_integral(const LacunarSpec& kernel, double x_max = 0.0,
                                   int n_quad = 512);

// Absolute-sum and weighted-tail criteria for a lacunary process with
// coefficients b_k: sum |b_k| and sum sqrt(sum_{m>=k} b_m^2) sqrt(log n(k+1)).
struct LacunarCriteria {
  ContinuityReport abs_sum;   // (4.7)-type
  ContinuityReport tail_sum;  // (4.8)-type
};
LacunarCriteria lacunar_criteria(const LacunarSpec& process);

// Dyadic band masses of the spectral measure (b_k^2 at frequency n_k), their
// minimal non-increasing envelope M(n), and the series sum sqrt(M(n)).
struct WatanabeReport {
  std::vector<double> band_mass;  // s_n, n = 0 .. N
  std::vector<double> envelope;   // M(n) = max_{m >= n} s_m
  ContinuityReport series;
};
WatanabeReport watanabe_check(const LacunarSpec& process);

// Pointwise variance of the block operator (V_m - V_n) applied to the KL
// field of the decomposition, computed through the Fourier multipliers.
GridFunction vp_block_variance(const MercerDecomposition& md, int n, int m);

// log of Psi(lambda) = (1/|T|) int exp(lambda^2 v(t) / 2) dt, via log-sum-exp.
double log_psi(const GridFunction& variance, double lambda);

// Psi itself; throws std::range_error when lambda^2 max(v) / 2 > 700.
double psi_functional(const GridFunction& variance, double lambda);
double psi_functional(const MercerDecomposition& md, int n, int m, double lambda);

struct UResult {
  double value = 0.0;
  double lambda_star = 0.0;
  bool saturated = false;  // minimizer pinned at the log-lambda search bound
};

// U = inf_{lambda > 0} (log_n_points + log Psi(lambda)) / lambda by golden
// section on log lambda in [-12, 12] to 1e-8.
UResult u_functional(const GridFunction& variance, double log_n_points);
UResult u_functional(const MercerDecomposition& md, int n, int m);

// Series sum_k U(n(k), n(k+1)) over a degree block sequence.
ContinuityReport u_series(const MercerDecomposition& md, const BlockSequence& blocks);

struct Lemma61Report {
  int degree = 0;
  double sup = 0.0;
  double signed_measure = 0.0;  // mes{ B >= sup/2 }
  double abs_measure = 0.0;     // mes{ |B| >= sup/2 }
  double bound = 0.0;           // 1/(2n)
  bool signed_ok = false;
  bool abs_ok = false;
  bool degenerate = false;  // zero polynomial: level set is everything
};

// Level-set measure check mes{ B >= 0.5 ||B||_inf } >= 1/(2n), evaluated on a
// grid of at least 2^14 points, in both the signed and the absolute form.
Lemma61Report lemma61_check(const TrigPolynomial& poly, int grid_points = 1 << 14);

}  // namespace kpath

#pragma once

#include <complex>
#include <vector>

#include "kpath/grid.hpp"
#include "kpath/kernel.hpp"

namespace kpath {

// Two-sided Fourier coefficients c_k, |k| <= max_freq, with frequencies in
// cycles per period (the grid's domain is one full period).
struct FourierCoeffs {
  int max_freq = 0;
  std::vector<std::complex<double>> coeffs;  // index k + max_freq

  std::complex<double> at(int k) const {
    if (k < -max_freq || k > max_freq) return {0.0, 0.0};
    return coeffs[static_cast<size_t>(k + max_freq)];
  }
  std::complex<double>& at(int k) { return coeffs[static_cast<size_t>(k + max_freq)]; }

  static FourierCoeffs zeros(int max_freq) {
    return {max_freq, std::vector<std::complex<double>>(
                          static_cast<size_t>(2 * max_freq + 1), {0.0, 0.0})};
  }
};

struct TrigPolynomial {
  int degree = 0;
  FourierCoeffs coeffs;
  double period = two_pi;

  double eval(double t) const;
  GridFunction sample(const Grid& grid) const;
};

// DFT quadrature of c_k = period^{-1} int f(t) e^{-2 pi i k t / period} dt;
// exact for trigonometric polynomials of degree <= max_freq on the grid.
FourierCoeffs fourier_coeffs(const GridFunction& f, int max_freq);

// de la Vallee-Poussin kernel, p = [n/2] convention used throughout:
// K_{n,p}(t) = sin((2n+1-p)t/2) sin((p+1)t/2) / (2(p+1) sin^2(t/2)).
double vp_kernel_eval(int n, int p, double t);

inline int vp_p(int n) { return n / 2; }

// Fourier multiplier of V_{n,p(n)}: 1 on |k| <= n-p, linear decay to 0 at n+1.
double vp_multiplier(int n, int k);

// V_n[f], defined in coefficient space as the average of the partial sums
// S_{n-p},...,S_n.  Result lies in A(n).
TrigPolynomial vp_sum(const GridFunction& f, int n);

// Direct grid convolution (1/pi) int f(s) K_{n,p}(t-s) ds; agrees with the
// coefficient-space route for adequately resolved inputs.  [0,2*pi] only.
GridFunction vp_sum_convolution(const GridFunction& f, int n);

// Exact L2 best-approximation error via the Parseval tail.
double best_error_l2(const GridFunction& f, int n);
double best_error_l2_2d(const GridKernel& gk, int n1, int n2);

// Exact sup-norm best approximation for lacunary series:
// E(n; R)_inf = sum_{k > nu} a_k where nu = #{k : n_k <= n}.  The cutoff n is
// compared in log scale, so super-dyadic block indices far beyond 2^64 work.
double best_error_sup_lacunar(const LacunarSpec& spec, double n);

// Upper estimate of E(n,f)_inf: grid sup |f - V_n[f]|, proportional to
// E([n/2], f).
double best_error_sup_vp(const GridFunction& f, int n);

// (1/n) * sum_{m=0}^{n} E_m for a non-increasing error sequence E_0..E_n;
// the unspecified constant c is reported as 1 by the callers.
double stechkin_modulus_bound(const std::vector<double>& errors);

struct CoeffModulusReport {
  double max_ratio = 0.0;   // max over k of |c_k| / (0.5 * omega(f, pi/k))
  int worst_k = 0;
  bool vacuous = false;     // no nonzero-frequency coefficients to test
  std::vector<double> ratios;  // per k = 1..K
};

// Checks |c_k| <= 0.5 * omega(f, pi/|k|) on all resolvable frequencies.
CoeffModulusReport coeff_modulus_check(const FourierCoeffs& fc, const GridFunction& f);

class CounterRng;

// Real polynomial with standard normal cosine/sine coefficients up to the
// given degree.
TrigPolynomial random_trig_polynomial(int degree, CounterRng& rng,
                                      double period = two_pi);

}  // namespace kpath

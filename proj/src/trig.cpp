#include "kpath/trig.hpp"

#include "kpath/rng.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kpath {

namespace {

std::vector<std::complex<double>> dft_forward(const std::vector<double>& in) {
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> out;
  std::vector<std::complex<double>> cin(in.begin(), in.end());
  fft.fwd(out, cin);
  return out;
}

int bin_frequency(int bin, int n) { return bin <= n / 2 ? bin : bin - n; }

}  // namespace

double TrigPolynomial::eval(double t) const {
  const double x = two_pi * t / period;
  std::complex<double> acc{0.0, 0.0};
  for (int k = -coeffs.max_freq; k <= coeffs.max_freq; ++k)
    acc += coeffs.at(k) * std::polar(1.0, k * x);
  return acc.real();
}

GridFunction TrigPolynomial::sample(const Grid& grid) const {
  return GridFunction::sample(grid, [this](double t) { return eval(t); });
}

FourierCoeffs fourier_coeffs(const GridFunction& f, int max_freq) {
  const int n = f.grid.size();
  if (max_freq < 0) throw std::invalid_argument("fourier_coeffs: negative max_freq");
  if (max_freq >= n / 2)
    throw std::domain_error("fourier_coeffs: max_freq >= n/2 would alias on this grid");
  auto out = dft_forward(f.values);
  FourierCoeffs fc = FourierCoeffs::zeros(max_freq);
  for (int k = -max_freq; k <= max_freq; ++k) {
    int bin = k >= 0 ? k : k + n;
    fc.at(k) = out[static_cast<size_t>(bin)] / static_cast<double>(n);
  }
  return fc;
}

double vp_kernel_eval(int n, int p, double t) {
  if (p < 0 || p > n) throw std::invalid_argument("vp_kernel_eval: need 0 <= p <= n");
  const double s = std::sin(0.5 * t);
  if (std::abs(s) < 1e-8) return 0.5 * static_cast<double>(2 * n + 1 - p);
  return std::sin(0.5 * (2 * n + 1 - p) * t) * std::sin(0.5 * (p + 1) * t) /
         (2.0 * (p + 1) * s * s);
}

double vp_multiplier(int n, int k) {
  const int p = vp_p(n);
  const int a = std::abs(k);
  if (a <= n - p) return 1.0;
  if (a > n) return 0.0;
  return static_cast<double>(n + 1 - a) / static_cast<double>(p + 1);
}

TrigPolynomial vp_sum(const GridFunction& f, int n) {
  if (n < 4) throw std::invalid_argument("vp_sum: degree must be >= 4");
  FourierCoeffs fc = fourier_coeffs(f, n);
  for (int k = -n; k <= n; ++k) fc.at(k) *= vp_multiplier(n, k);
  return TrigPolynomial{n, std::move(fc), f.grid.domain_end()};
}

GridFunction vp_sum_convolution(const GridFunction& f, int n) {
  if (std::abs(f.grid.domain_end() - two_pi) > 1e-12)
    throw std::invalid_argument("vp_sum_convolution: grid must span [0, 2*pi]");
  if (n < 4) throw std::invalid_argument("vp_sum_convolution: degree must be >= 4");
  const int m = f.grid.size();
  const int p = vp_p(n);
  const double h = f.grid.spacing();
  std::vector<double> ker(static_cast<size_t>(m));
  for (int d = 0; d < m; ++d) ker[static_cast<size_t>(d)] = vp_kernel_eval(n, p, h * d);
  std::vector<double> g(static_cast<size_t>(m), 0.0);
  const double pi = two_pi / 2.0;
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j)
      acc += f.values[static_cast<size_t>(j)] * ker[static_cast<size_t>((i - j + m) % m)];
    g[static_cast<size_t>(i)] = acc * h / pi;
  }
  return GridFunction(f.grid, std::move(g));
}

double best_error_l2(const GridFunction& f, int n) {
  const int m = f.grid.size();
  auto out = dft_forward(f.values);
  double tail = 0.0;
  for (int bin = 0; bin < m; ++bin) {
    if (std::abs(bin_frequency(bin, m)) > n)
      tail += std::norm(out[static_cast<size_t>(bin)] / static_cast<double>(m));
  }
  return std::sqrt(f.grid.domain_end() * tail);
}

double best_error_l2_2d(const GridKernel& gk, int n1, int n2) {
  const int m = gk.grid.size();
  Eigen::FFT<double> fft;
  Eigen::MatrixXcd C(m, m);
  std::vector<std::complex<double>> row(static_cast<size_t>(m)), out;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) row[static_cast<size_t>(j)] = gk.values(i, j);
    fft.fwd(out, row);
    for (int j = 0; j < m; ++j) C(i, j) = out[static_cast<size_t>(j)];
  }
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) row[static_cast<size_t>(i)] = C(i, j);
    fft.fwd(out, row);
    for (int i = 0; i < m; ++i) C(i, j) = out[static_cast<size_t>(i)];
  }
  const double scale = static_cast<double>(m) * static_cast<double>(m);
  double tail = 0.0;
  for (int i = 0; i < m; ++i) {
    const int ki = std::abs(bin_frequency(i, m));
    for (int j = 0; j < m; ++j) {
      const int kj = std::abs(bin_frequency(j, m));
      if (ki > n1 || kj > n2) tail += std::norm(C(i, j) / scale);
    }
  }
  const double measure = gk.grid.domain_end();
  return std::sqrt(measure * measure * tail);
}

double best_error_sup_lacunar(const LacunarSpec& spec, double n) {
  if (!(n >= 0.0)) throw std::invalid_argument("best_error_sup_lacunar: negative degree");
  const double log_n = n > 0.0 ? std::log(n) : -std::numeric_limits<double>::infinity();
  int nu = 0;
  for (int k = 1; k <= spec.size(); ++k) {
    if (spec.log_frequency(k) <= log_n + 1e-12)
      nu = k;
    else
      break;
  }
  double tail = 0.0;
  for (int k = nu; k < spec.size(); ++k) tail += spec.coefficients()[static_cast<size_t>(k)];
  return tail;
}

double best_error_sup_vp(const GridFunction& f, int n) {
  GridFunction v = vp_sum(f, n).sample(f.grid);
  double sup = 0.0;
  for (int i = 0; i < f.grid.size(); ++i)
    sup = std::max(sup, std::abs(f.values[static_cast<size_t>(i)] -
                                 v.values[static_cast<size_t>(i)]));
  return sup;
}

double stechkin_modulus_bound(const std::vector<double>& errors) {
  if (errors.size() < 2)
    throw std::invalid_argument("stechkin_modulus_bound: need E_0..E_n with n >= 1");
  double sum = 0.0;
  for (size_t i = 0; i < errors.size(); ++i) {
    if (errors[i] < 0.0)
      throw std::invalid_argument("stechkin_modulus_bound: negative error term");
    if (i > 0 && errors[i] > errors[i - 1] + 1e-15)
      throw std::invalid_argument("stechkin_modulus_bound: error sequence must be non-increasing");
    sum += errors[i];
  }
  const double n = static_cast<double>(errors.size() - 1);
  return sum / n;
}

CoeffModulusReport coeff_modulus_check(const FourierCoeffs& fc, const GridFunction& f) {
  CoeffModulusReport rep;
  const auto profile = modulus_profile(f);
  const double h = f.grid.spacing();
  const int n = f.grid.size();
  const double half_period = 0.5 * f.grid.domain_end();
  double cmax = 0.0;
  for (int k = 1; k <= fc.max_freq; ++k) {
    const double ck = std::abs(fc.at(k));
    cmax = std::max(cmax, ck);
    const double delta = half_period / static_cast<double>(k);
    const int j = std::min(static_cast<int>(std::floor(delta / h)), n / 2);
    if (j < 1) break;  // frequency beyond grid modulus resolution
    const double omega = profile[static_cast<size_t>(j)];
    double ratio;
    if (omega > 0.0)
      ratio = ck / (0.5 * omega);
    else
      ratio = ck <= 1e-14 ? 0.0 : std::numeric_limits<double>::infinity();
    rep.ratios.push_back(ratio);
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.worst_k = k;
    }
  }
  rep.vacuous = cmax < 1e-14;
  return rep;
}

TrigPolynomial random_trig_polynomial(int degree, CounterRng& rng, double period) {
  if (degree < 0) throw std::invalid_argument("random_trig_polynomial: negative degree");
  FourierCoeffs fc = FourierCoeffs::zeros(degree);
  fc.at(0) = rng.normal();
  for (int k = 1; k <= degree; ++k) {
    const double a = rng.normal();
    const double b = rng.normal();
    fc.at(k) = {0.5 * a, -0.5 * b};  // a cos(kx) + b sin(kx)
    fc.at(-k) = std::conj(fc.at(k));
  }
  return TrigPolynomial{degree, std::move(fc), period};
}

}  // namespace kpath

#include "kpath/diag.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kpath {

std::string to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::converges: return "converges";
    case SeriesVerdict::diverges: return "diverges";
    default: return "inconclusive";
  }
}

SeriesVerdict classify_series(const std::vector<double>& terms, double* tail_estimate) {
  if (tail_estimate) *tail_estimate = 0.0;
  for (double t : terms)
    if (!(t >= 0.0)) throw std::invalid_argument("classify_series: negative or NaN term");

  size_t K = terms.size();
  while (K > 0 && terms[K - 1] == 0.0) --K;
  // A trailing run of zeros marks a terminated (finite-rank) sum.
  if (K < terms.size()) return SeriesVerdict::converges;
  if (K < 5) return SeriesVerdict::inconclusive;

  const double partial_sum = std::accumulate(terms.begin(), terms.begin() + K, 0.0);
  const size_t w = std::min<size_t>(10, K - 1);

  bool window_positive = true;
  for (size_t i = K - 1 - w; i < K; ++i)
    if (terms[i] <= 0.0) window_positive = false;

  if (window_positive) {
    double rmax = 0.0;
    bool nondecreasing = true;
    for (size_t i = K - w; i < K; ++i) {
      rmax = std::max(rmax, terms[i] / terms[i - 1]);
      if (terms[i] < terms[i - 1] * (1.0 - 1e-12)) nondecreasing = false;
    }
    if (rmax < 1.0) {
      const double tail = terms[K - 1] * rmax / (1.0 - rmax);
      if (rmax <= 0.95 || tail < 1e-6 * partial_sum) {
        if (tail_estimate) *tail_estimate = tail;
        return SeriesVerdict::converges;
      }
    }
    if (nondecreasing) return SeriesVerdict::diverges;
  }

  // Integral test on a power law fitted to the trailing half.
  std::vector<double> lx, ly;
  for (size_t i = K / 2; i < K; ++i) {
    if (terms[i] > 0.0) {
      lx.push_back(std::log(static_cast<double>(i + 1)));
      ly.push_back(std::log(terms[i]));
    }
  }
  if (lx.size() < 5) return SeriesVerdict::inconclusive;
  const double n = static_cast<double>(lx.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) return SeriesVerdict::inconclusive;
  const double alpha = (n * sxy - sx * sy) / denom;
  if (alpha <= -1.2) {
    if (tail_estimate)
      *tail_estimate = terms[K - 1] * static_cast<double>(K) / (-alpha - 1.0);
    return SeriesVerdict::converges;
  }
  if (alpha >= -1.05) return SeriesVerdict::diverges;
  return SeriesVerdict::inconclusive;
}

ContinuityReport make_series_report(std::string criterion, std::vector<double> terms,
                                    std::string assumptions) {
  ContinuityReport rep;
  rep.criterion = std::move(criterion);
  rep.terms = std::move(terms);
  rep.partial_sums.reserve(rep.terms.size());
  double acc = 0.0;
  for (double t : rep.terms) {
    acc += t;
    rep.partial_sums.push_back(acc);
  }
  rep.verdict = classify_series(rep.terms, &rep.tail_estimate);
  rep.assumptions = std::move(assumptions);
  return rep;
}

namespace {

int checked_term_count(const BlockSequence& blocks, int K_max) {
  if (K_max < 1) throw std::invalid_argument("sigma_e_series: K_max < 1");
  return std::min(blocks.size() - 1, K_max);
}

}  // namespace

ContinuityReport sigma_e_series(const GridKernel& gk, const BlockSequence& blocks,
                                int K_max) {
  const int K = checked_term_count(blocks, K_max);
  std::vector<double> terms;
  for (int k = 0; k < K; ++k) {
    const double nk = blocks.index(k);
    if (nk / 2.0 >= static_cast<double>(gk.grid.size()) / 2.0)
      throw std::domain_error("sigma_e_series: block degree exceeds grid resolution");
    const int deg = static_cast<int>(nk) / 2;
    const double err = best_error_l2_2d(gk, deg, deg);
    terms.push_back(std::sqrt(err) * std::sqrt(blocks.log_index(k + 1)));
  }
  return make_series_report("sigma_e_l2", std::move(terms),
                            "E measured in L2 on the sampled kernel");
}

ContinuityReport sigma_e_series(const LacunarSpec& kernel, const BlockSequence& blocks,
                                int K_max) {
  const int K = checked_term_count(blocks, K_max);
  std::vector<double> terms;
  for (int k = 0; k < K; ++k) {
    const double deg = std::floor(blocks.index(k) / 2.0);
    const double err = best_error_sup_lacunar(kernel, deg);
    terms.push_back(std::sqrt(err) * std::sqrt(blocks.log_index(k + 1)));
  }
  return make_series_report("sigma_e_sup", std::move(terms),
                            "E is the exact lacunary sup-norm tail");
}

ContinuityReport fernique_integral(const GridKernel& gk, double x_max, int n_quad) {
  if (n_quad < 16) throw std::invalid_argument("fernique_integral: n_quad < 16");
  const double h = gk.grid.spacing();
  if (2.0 * h >= 1.0)
    throw std::domain_error("fernique_integral: grid too coarse for any x");
  const double x_trust = std::sqrt(std::log(1.0 / (2.0 * h)));
  if (x_max <= 0.0)
    x_max = x_trust;
  else if (x_max > x_trust + 1e-12)
    throw std::domain_error("fernique_integral: grid resolves only x <= " +
                            std::to_string(x_trust));

  const auto profile = kernel_modulus_profile(gk);
  const int half = gk.grid.size() / 2;
  const double dx = x_max / static_cast<double>(n_quad);
  std::vector<double> terms;
  for (int i = 0; i < n_quad; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * dx;
    const double delta = std::exp(-x * x);
    int j = static_cast<int>(std::floor(delta / h));
    j = std::clamp(j, 1, half);
    terms.push_back(std::sqrt(profile[static_cast<size_t>(j)]) * dx);
  }
  return make_series_report(
      "fernique_grid", std::move(terms),
      "grid modulus; integrated to x_max=" + std::to_string(x_max) +
          ", resolution limit x=" + std::to_string(x_trust));
}

ContinuityReport fernique_integral(const LacunarSpec& kernel, double x_max, int n_quad) {
  if (n_quad < 16) throw std::invalid_argument("fernique_integral: n_quad < 16");
  const double log_n_last = kernel.log_frequency(kernel.size());
  if (x_max <= 0.0) x_max = std::sqrt(std::max(1.0, log_n_last)) + 2.0;

  // omega(delta) <= 2 sum a_k min(2, n_k delta), evaluated in log scale so
  // frequencies beyond double range contribute exactly 2 a_k.
  const double log2v = std::log(2.0);
  auto omega = [&](double neg_log_delta) {
    double acc = 0.0;
    for (int k = 1; k <= kernel.size(); ++k) {
      const double lg = kernel.log_frequency(k) - neg_log_delta;
      acc += kernel.coefficients()[static_cast<size_t>(k - 1)] *
             std::exp(std::min(lg, log2v));
    }
    return 2.0 * acc;
  };

  const double dx = x_max / static_cast<double>(n_quad);
  std::vector<double> terms;
  for (int i = 0; i < n_quad; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * dx;
    terms.push_back(std::sqrt(omega(x * x)) * dx);
  }
  return make_series_report(
      "fernique_lacunar", std::move(terms),
      "coefficient modulus envelope; integrated to x_max=" + std::to_string(x_max));
}

LacunarCriteria lacunar_criteria(const LacunarSpec& process) {
  LacunarCriteria out;
  out.abs_sum = make_series_report("lacunar_abs_sum", process.coefficients(),
                                   "sum |b_k|");

  const int K = process.size();
  std::vector<double> tails(static_cast<size_t>(K) + 1, 0.0);
  for (int k = K; k >= 1; --k) {
    const double b = process.coefficients()[static_cast<size_t>(k - 1)];
    tails[static_cast<size_t>(k - 1)] = tails[static_cast<size_t>(k)] + b * b;
  }
  std::vector<double> terms;
  // Past k ~ K/2 the truncation of the inner tail at K dominates and the
  // computed terms decay artificially fast; emit only the reliable half.
  for (int k = 1; k <= K / 2; ++k)
    terms.push_back(std::sqrt(tails[static_cast<size_t>(k - 1)]) *
                    std::sqrt(process.log_frequency(k + 1)));
  out.tail_sum = make_series_report("lacunar_tail_sum", std::move(terms),
                                    "sum sqrt(sum_{m>=k} b_m^2) sqrt(log n(k+1))");
  return out;
}

WatanabeReport watanabe_check(const LacunarSpec& process) {
  const double log2e = 1.4426950408889634;  // 1/ln2
  const double top = process.log_frequency(process.size()) * log2e;
  if (top > 4.0e6)
    throw std::domain_error("watanabe_check: too many dyadic bands to enumerate");
  const int N = static_cast<int>(std::floor(top));

  WatanabeReport rep;
  rep.band_mass.assign(static_cast<size_t>(N) + 1, 0.0);
  for (int k = 1; k <= process.size(); ++k) {
    double l2 = process.log_frequency(k) * log2e;
    int band = static_cast<int>(std::floor(l2));
    if (std::abs(l2 - std::round(l2)) < 1e-9)  // exact power of two: (2^{n-1}, 2^n]
      band = static_cast<int>(std::round(l2)) - 1;
    band = std::clamp(band, 0, N);
    const double b = process.coefficients()[static_cast<size_t>(k - 1)];
    rep.band_mass[static_cast<size_t>(band)] += b * b;
  }
  rep.envelope = rep.band_mass;
  for (int n = N - 1; n >= 0; --n)
    rep.envelope[static_cast<size_t>(n)] = std::max(
        rep.envelope[static_cast<size_t>(n)], rep.envelope[static_cast<size_t>(n + 1)]);
  std::vector<double> terms;
  terms.reserve(rep.envelope.size());
  for (double m : rep.envelope) terms.push_back(std::sqrt(m));
  rep.series = make_series_report("watanabe", std::move(terms),
                                  "sum sqrt(M(n)), M = monotone band-mass envelope");
  return rep;
}

GridFunction vp_block_variance(const MercerDecomposition& md, int n, int m) {
  if (!(0 <= n && n < m))
    throw std::invalid_argument("vp_block_variance: need 0 <= n < m");
  const int ng = md.grid.size();
  if (m >= ng / 2)
    throw std::domain_error("vp_block_variance: block degree exceeds grid resolution");

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum, filtered(static_cast<size_t>(ng)),
      time(static_cast<size_t>(ng));
  std::vector<std::complex<double>> input(static_cast<size_t>(ng));
  std::vector<double> v(static_cast<size_t>(ng), 0.0);

  for (int j = 0; j < md.n_kept(); ++j) {
    const double lambda = md.eigenvalues(j);
    if (lambda <= 0.0) continue;
    for (int i = 0; i < ng; ++i) input[static_cast<size_t>(i)] = md.eigenfunctions(i, j);
    fft.fwd(spectrum, input);
    for (int bin = 0; bin < ng; ++bin) {
      const int f = bin <= ng / 2 ? bin : bin - ng;
      const double w = vp_multiplier(m, f) - vp_multiplier(n, f);
      filtered[static_cast<size_t>(bin)] = spectrum[static_cast<size_t>(bin)] * w;
    }
    fft.inv(time, filtered);
    for (int i = 0; i < ng; ++i) {
      const double g = time[static_cast<size_t>(i)].real();
      v[static_cast<size_t>(i)] += lambda * g * g;
    }
  }
  return GridFunction(md.grid, std::move(v));
}

double log_psi(const GridFunction& variance, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("log_psi: lambda must be positive");
  double vmax = 0.0;
  for (double v : variance.values) {
    if (!(v >= 0.0)) throw std::invalid_argument("log_psi: negative variance");
    vmax = std::max(vmax, v);
  }
  const double peak = 0.5 * lambda * lambda * vmax;
  double acc = 0.0;
  for (double v : variance.values) acc += std::exp(0.5 * lambda * lambda * v - peak);
  return peak + std::log(acc / static_cast<double>(variance.values.size()));
}

double psi_functional(const GridFunction& variance, double lambda) {
  const double lp = log_psi(variance, lambda);
  if (lp > 700.0)
    throw std::range_error("psi_functional: exponential moment overflows; reduce lambda");
  return std::exp(lp);
}

double psi_functional(const MercerDecomposition& md, int n, int m, double lambda) {
  return psi_functional(vp_block_variance(md, n, m), lambda);
}

UResult u_functional(const GridFunction& variance, double log_n_points) {
  if (!(log_n_points > 0.0))
    throw std::invalid_argument("u_functional: log N must be positive");
  auto g = [&](double y) {
    const double lambda = std::exp(y);
    return (log_n_points + log_psi(variance, lambda)) / lambda;
  };
  const double phi = 0.6180339887498949;
  double a = -12.0, b = 12.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double gc = g(c), gd = g(d);
  while (b - a > 1e-8) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + phi * (b - a);
      gd = g(d);
    }
  }
  UResult r;
  const double y = 0.5 * (a + b);
  r.lambda_star = std::exp(y);
  r.value = g(y);
  r.saturated = y > 12.0 - 1e-3 || y < -12.0 + 1e-3;
  return r;
}

UResult u_functional(const MercerDecomposition& md, int n, int m) {
  if (m < 2) throw std::invalid_argument("u_functional: block end must be >= 2");
  return u_functional(vp_block_variance(md, n, m), std::log(static_cast<double>(m)));
}

ContinuityReport u_series(const MercerDecomposition& md, const BlockSequence& blocks) {
  std::vector<double> terms;
  for (int k = 0; k + 1 < blocks.size(); ++k) {
    const double n = blocks.index(k), m = blocks.index(k + 1);
    if (m >= static_cast<double>(md.grid.size()) / 2.0)
      throw std::domain_error("u_series: block degree exceeds grid resolution");
    terms.push_back(u_functional(md, static_cast<int>(n), static_cast<int>(m)).value);
  }
  return make_series_report("u_series", std::move(terms),
                            "sum U(n(k), n(k+1)) with N = n(k+1)");
}

Lemma61Report lemma61_check(const TrigPolynomial& poly, int grid_points) {
  if (poly.degree < 1) throw std::invalid_argument("lemma61_check: degree must be >= 1");
  if (grid_points < (1 << 14))
    throw std::invalid_argument("lemma61_check: need at least 2^14 grid points");

  const Grid grid(poly.period, grid_points);
  const GridFunction f = poly.sample(grid);
  Lemma61Report rep;
  rep.degree = poly.degree;
  rep.bound = 0.5 / static_cast<double>(poly.degree);
  rep.sup = f.sup_abs();

  if (rep.sup < 1e-300) {
    rep.degenerate = true;
    rep.signed_measure = rep.abs_measure = poly.period;
    rep.signed_ok = rep.abs_ok = true;
    return rep;
  }

  const double level = 0.5 * rep.sup;
  int signed_count = 0, abs_count = 0;
  for (double v : f.values) {
    if (v >= level) ++signed_count;
    if (std::abs(v) >= level) ++abs_count;
  }
  rep.signed_measure = grid.spacing() * static_cast<double>(signed_count);
  rep.abs_measure = grid.spacing() * static_cast<double>(abs_count);
  rep.signed_ok = rep.signed_measure >= rep.bound;
  rep.abs_ok = rep.abs_measure >= rep.bound;
  return rep;
}

}  // namespace kpath

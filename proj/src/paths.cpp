#include "kpath/paths.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kpath/lacunar_sup.hpp"
#include "kpath/rng.hpp"

namespace kpath {

namespace {

struct MeanStd {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanStd mean_and_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

ProfileVerdict classify_profile(const std::vector<TauEstimate>& es) {
  const auto& first = es.front();
  const auto& last = es.back();
  bool decreasing = true;
  for (size_t i = 0; i + 1 < es.size(); ++i) {
    if (es[i + 1].mean > es[i].mean + 3.0 * (es[i].std_error + es[i + 1].std_error))
      decreasing = false;
  }
  if (decreasing && last.mean <= 0.5 * first.mean) return ProfileVerdict::consistent;
  if (last.mean - 3.0 * last.std_error >= 0.5 * first.mean)
    return ProfileVerdict::violated;
  return ProfileVerdict::inconclusive;
}

struct BlockSup {
  double lower = 0.0;
  double upper = 0.0;
};

// Gaps wider than this many digit levels separate scales completely: the
// faster factor sweeps a full period while the slower one moves by less than
// 2*pi*sum|c| / 5^24 ~ 1e-16 of its range, so cluster sups simply add.
constexpr size_t kSplitDigits = 24;

// Certified sup_t |sum_j draw[j] cos(n_{n+1+j} t)| over the period, for the
// block (n, m] of a lacunary spec.  The block is split into clusters at huge
// frequency gaps; each cluster is reduced by its lowest frequency and solved
// by branch and bound over digit cells.
BlockSup block_sup_abs(const LacunarSpec& spec, int n, int m,
                       const std::vector<double>& draw, double tol) {
  std::vector<std::pair<int, int>> clusters;  // [lo, hi] 0-based block offsets
  int lo = 0;
  for (int j = 0; j + 1 < m - n; ++j) {
    const LacunarGap& g = spec.gaps()[static_cast<size_t>(n + j)];
    if (!g.expandable() || g.digits.size() > kSplitDigits) {
      clusters.emplace_back(lo, j);
      lo = j + 1;
    }
  }
  clusters.emplace_back(lo, m - n - 1);

  const double cluster_tol = tol / static_cast<double>(clusters.size());
  double plus_lo = 0.0, plus_up = 0.0, minus_lo = 0.0, minus_up = 0.0;
  double abs_total = 0.0;
  for (double c : draw) abs_total += std::abs(c);

  for (auto [a, b] : clusters) {
    if (a == b) {  // single cosine: both signs reach |c| exactly
      const double c = std::abs(draw[static_cast<size_t>(a)]);
      plus_lo += c;
      plus_up += c;
      minus_lo += c;
      minus_up += c;
      continue;
    }
    LacunarPoly poly;
    poly.coeffs.assign(draw.begin() + a, draw.begin() + b + 1);
    poly.depths.push_back(0);
    for (int j = a; j < b; ++j) {
      const auto& digits = spec.gaps()[static_cast<size_t>(n + j)].digits;
      poly.radices.insert(poly.radices.end(), digits.begin(), digits.end());
      poly.depths.push_back(static_cast<int>(poly.radices.size()));
    }
    SupResult plus = lacunar_sup(poly, cluster_tol);
    for (double& c : poly.coeffs) c = -c;
    SupResult minus = lacunar_sup(poly, cluster_tol);
    plus_lo += plus.lower;
    plus_up += plus.upper;
    minus_lo += minus.lower;
    minus_up += minus.upper;
  }

  const double slack = abs_total * 1e-12;  // cross-cluster alignment error
  BlockSup out;
  out.lower = std::max(plus_lo, minus_lo) - slack;
  out.upper = std::max(plus_up, minus_up) + slack;
  return out;
}

std::vector<double> draw_block_coeffs(const LacunarSpec& spec, int n, int m,
                                      CounterRng& rng) {
  std::vector<double> draw;
  draw.reserve(static_cast<size_t>(m - n));
  for (int k = n + 1; k <= m; ++k)
    draw.push_back(spec.coefficients()[static_cast<size_t>(k - 1)] * rng.normal());
  return draw;
}

}  // namespace

PathEnsemble kl_simulate(const MercerDecomposition& md, int n_terms, int M,
                         std::uint64_t seed) {
  if (n_terms < 1 || n_terms > md.n_kept())
    throw std::invalid_argument("kl_simulate: n_terms out of range");
  if (M < 1) throw std::invalid_argument("kl_simulate: M must be >= 1");
  for (int k = 0; k < n_terms; ++k)
    if (md.eigenvalues(k) < 0.0)
      throw std::invalid_argument("kl_simulate: negative eigenvalue in decomposition");

  Eigen::MatrixXd basis = md.eigenfunctions.leftCols(n_terms);
  for (int k = 0; k < n_terms; ++k) basis.col(k) *= std::sqrt(md.eigenvalues(k));

  PathEnsemble e{md.grid, Eigen::MatrixXd(M, md.grid.size()), n_terms, seed, "kl"};
  Eigen::VectorXd z(n_terms);
  for (int i = 0; i < M; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    for (int k = 0; k < n_terms; ++k) z(k) = rng.normal();
    e.paths.row(i) = (basis * z).transpose();
  }
  return e;
}

TauEstimate tau_estimate(const MercerDecomposition& md, int n, int m, int M,
                         std::uint64_t seed) {
  if (!(0 <= n && n < m && m <= md.n_kept()))
    throw std::invalid_argument("tau_estimate: need 0 <= n < m <= n_kept");
  if (M < 100) throw std::invalid_argument("tau_estimate: need at least 100 samples");

  const int len = m - n;
  Eigen::MatrixXd basis = md.eigenfunctions.middleCols(n, len);
  for (int k = 0; k < len; ++k) basis.col(k) *= std::sqrt(md.eigenvalues(n + k));

  std::vector<double> sups(static_cast<size_t>(M));
  Eigen::VectorXd z(len);
  for (int i = 0; i < M; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    for (int k = 0; k < len; ++k) z(k) = rng.normal();
    sups[static_cast<size_t>(i)] = (basis * z).cwiseAbs().maxCoeff();
  }
  auto [mean, se] = mean_and_se(sups);
  return {n, m, mean, se, M};
}

TauEstimate tau_estimate_lacunar(const LacunarSpec& spec, int n, int m, int M,
                                 std::uint64_t seed, double sup_tol) {
  if (!(0 <= n && n < m && m <= spec.size()))
    throw std::invalid_argument("tau_estimate_lacunar: bad block");
  if (M < 100) throw std::invalid_argument("tau_estimate_lacunar: need at least 100 samples");
  std::vector<double> sups(static_cast<size_t>(M));
  for (int i = 0; i < M; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    std::vector<double> draw = draw_block_coeffs(spec, n, m, rng);
    BlockSup bs = block_sup_abs(spec, n, m, draw, sup_tol);
    sups[static_cast<size_t>(i)] = 0.5 * (bs.lower + bs.upper);
  }
  auto [mean, se] = mean_and_se(sups);
  return {n, m, mean, se, M};
}

namespace {

template <class F>
TauProfile run_profile(const BlockList& blocks, F&& estimate_one) {
  if (blocks.empty()) throw std::invalid_argument("tau_profile: no blocks");
  for (size_t i = 0; i + 1 < blocks.size(); ++i)
    if (blocks[i + 1].first < blocks[i].first)
      throw std::invalid_argument("tau_profile: blocks must be increasing");
  TauProfile p;
  for (const auto& [n, m] : blocks) {
    p.estimates.push_back(estimate_one(n, m));
    p.running_sup = std::max(p.running_sup, p.estimates.back().mean);
  }
  p.verdict = classify_profile(p.estimates);
  return p;
}

}  // namespace

TauProfile tau_profile(const MercerDecomposition& md, const BlockList& blocks,
                       int M, std::uint64_t seed) {
  return run_profile(blocks, [&](int n, int m) { return tau_estimate(md, n, m, M, seed); });
}

TauProfile tau_profile_lacunar(const LacunarSpec& spec, const BlockList& blocks,
                               int M, std::uint64_t seed, double sup_tol) {
  return run_profile(blocks, [&](int n, int m) {
    return tau_estimate_lacunar(spec, n, m, M, seed, sup_tol);
  });
}

MomentGrowthReport sup_moment_growth(const PathEnsemble& ensemble,
                                     const std::vector<double>& p_list, double bound) {
  for (double p : p_list)
    if (p < 1.0 || p > 32.0)
      throw std::invalid_argument("sup_moment_growth: p must lie in [1, 32]");
  MomentGrowthReport rep;
  rep.bound = bound;
  Eigen::VectorXd sups = ensemble.sup_norms();
  const double mean_sup = sups.mean();
  if (mean_sup == 0.0) {
    rep.degenerate = true;
    rep.p_values = p_list;
    rep.moments.assign(p_list.size(), 0.0);
    rep.ratios.assign(p_list.size(), 0.0);
    rep.bounded = true;
    return rep;
  }
  rep.bounded = true;
  for (double p : p_list) {
    double acc = 0.0;
    for (int i = 0; i < sups.size(); ++i) acc += std::pow(sups(i), p);
    acc /= static_cast<double>(sups.size());
    const double moment = std::pow(acc, 1.0 / p);
    const double ratio = moment / (mean_sup * std::sqrt(p));
    rep.p_values.push_back(p);
    rep.moments.push_back(moment);
    rep.ratios.push_back(ratio);
    if (ratio > bound) rep.bounded = false;
  }
  return rep;
}

LilReport lil_example(int M, const std::vector<double>& eps_list, std::uint64_t seed) {
  const double t_max = std::exp(-4.0);
  if (M < 1) throw std::invalid_argument("lil_example: M < 1");
  if (eps_list.empty()) throw std::invalid_argument("lil_example: empty eps list");
  for (size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0) || eps_list[i] > t_max + 1e-15)
      throw std::invalid_argument("lil_example: eps must lie in (0, e^-4]");
    if (i > 0 && eps_list[i] >= eps_list[i - 1])
      throw std::invalid_argument("lil_example: eps list must be decreasing");
  }
  // Geometric time grid accumulating toward 0, one decade below the finest eps.
  const double t_min = eps_list.back() * 0.1;
  const double rho = 0.99;
  std::vector<double> times;  // ascending
  for (double t = t_max; t >= t_min; t *= rho) times.push_back(t);
  std::reverse(times.begin(), times.end());
  const int K = static_cast<int>(times.size());

  LilReport rep;
  rep.eps = eps_list;
  rep.n_paths = M;
  rep.n_times = K;
  const size_t E = eps_list.size();
  std::vector<std::vector<double>> sups(E), ranges(E);

  std::vector<double> beta(static_cast<size_t>(K));
  for (int i = 0; i < M; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    double w = std::sqrt(times[0]) * rng.normal();
    for (int k = 0; k < K; ++k) {
      if (k > 0) w += std::sqrt(times[static_cast<size_t>(k)] -
                                times[static_cast<size_t>(k - 1)]) * rng.normal();
      const double t = times[static_cast<size_t>(k)];
      beta[static_cast<size_t>(k)] = w / std::sqrt(2.0 * t * std::log(std::abs(std::log(t))));
    }
    for (size_t e = 0; e < E; ++e) {
      const double lo = eps_list[e];
      double sup = 0.0, bmin = 0.0, bmax = 0.0;
      bool any_range = false;
      for (int k = 0; k < K; ++k) {
        const double t = times[static_cast<size_t>(k)];
        if (t < lo) continue;
        sup = std::max(sup, std::abs(beta[static_cast<size_t>(k)]));
        if (t <= 10.0 * lo) {
          if (!any_range) {
            bmin = bmax = beta[static_cast<size_t>(k)];
            any_range = true;
          } else {
            bmin = std::min(bmin, beta[static_cast<size_t>(k)]);
            bmax = std::max(bmax, beta[static_cast<size_t>(k)]);
          }
        }
      }
      sups[e].push_back(sup);
      ranges[e].push_back(any_range ? bmax - bmin : 0.0);
    }
  }

  for (size_t e = 0; e < E; ++e) {
    double mean = 0.0;
    int below = 0;
    for (double s : sups[e]) {
      mean += s;
      if (s <= 2.5) ++below;
    }
    rep.mean_sup.push_back(mean / static_cast<double>(M));
    rep.frac_sup_below.push_back(static_cast<double>(below) / static_cast<double>(M));
    std::vector<double> r = ranges[e];
    std::nth_element(r.begin(), r.begin() + M / 2, r.end());
    rep.median_range.push_back(r[static_cast<size_t>(M / 2)]);
  }
  return rep;
}

Lemma41Report lemma41_check(const LacunarSpec& spec, const std::vector<int>& nu_list,
                            int M, std::uint64_t seed, double sup_tol) {
  if (M < 100) throw std::invalid_argument("lemma41_check: need at least 100 samples");
  Lemma41Report rep;
  for (int nu : nu_list) {
    if (nu < 1 || nu > spec.size())
      throw std::invalid_argument("lemma41_check: truncation out of range");
    const double log_n = spec.log_frequency(nu);
    if (log_n < std::log(4.0))
      throw std::invalid_argument("lemma41_check: polynomial degree must be >= 4");
    double sigma2 = 0.0;  // max_t Var = sum b_k^2, attained at t = 0
    for (int k = 1; k <= nu; ++k) {
      const double b = spec.coefficients()[static_cast<size_t>(k - 1)];
      sigma2 += b * b;
    }
    std::vector<double> sups(static_cast<size_t>(M));
    for (int i = 0; i < M; ++i) {
      CounterRng rng(seed, static_cast<std::uint64_t>(i));
      std::vector<double> draw = draw_block_coeffs(spec, 0, nu, rng);
      BlockSup bs = block_sup_abs(spec, 0, nu, draw, sup_tol);
      sups[static_cast<size_t>(i)] = 0.5 * (bs.lower + bs.upper);
    }
    auto [mean, se] = mean_and_se(sups);
    (void)se;
    rep.truncations.push_back(nu);
    rep.mean_sup.push_back(mean);
    const double denom = std::sqrt(sigma2) * std::sqrt(log_n);
    rep.ratios.push_back(denom > 0.0 ? mean / denom : 0.0);
    rep.max_ratio = std::max(rep.max_ratio, rep.ratios.back());
  }
  return rep;
}

}  // namespace kpath

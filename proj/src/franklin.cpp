#include "kpath/franklin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kpath/rng.hpp"

namespace kpath {

namespace {

double periodic_distance(double t, double c, double period) {
  double d = std::fmod(std::abs(t - c), period);
  return std::min(d, period - d);
}

double normal_at(std::uint64_t seed, std::uint64_t path, std::uint64_t index) {
  CounterRng rng(seed, path);
  return CounterRng::inverse_normal_cdf(CounterRng::to_unit(rng.value_at(index)));
}

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

}  // namespace

FranklinBasis franklin_basis(int m, const Grid& grid) {
  if (m < 1) throw std::invalid_argument("franklin_basis: m must be >= 1");
  const double period = grid.domain_end();
  const int ng = grid.size();
  const double h = grid.spacing();

  int finest_level = 0;  // knots are multiples of period / 2^finest_level
  if (m >= 2) {
    int l = 0;
    while ((1 << (l + 1)) < m) ++l;  // f_m sits in level l: m in (2^l, 2^(l+1)]
    finest_level = l + 1;
  }
  if (ng < 8 * (1 << finest_level))
    throw std::domain_error("franklin_basis: grid too coarse for the finest knots");

  Eigen::MatrixXd F(ng, m);
  F.col(0).setOnes();
  for (int k = 2; k <= m; ++k) {
    int l = 0;
    while ((1 << (l + 1)) < k) ++l;
    const int j = k - (1 << l);  // 1 .. 2^l
    const double w = period / static_cast<double>(1 << (l + 1));
    const double c = static_cast<double>(2 * j - 1) * w;
    for (int i = 0; i < ng; ++i) {
      const double d = periodic_distance(grid.point(i), c, period);
      F(i, k - 1) = std::max(0.0, 1.0 - d / w);
    }
  }

  // Modified Gram-Schmidt with a second orthogonalization pass.
  for (int k = 0; k < m; ++k) {
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < k; ++j)
        F.col(k) -= (h * F.col(j).dot(F.col(k))) * F.col(j);
    const double norm = std::sqrt(h * F.col(k).squaredNorm());
    if (norm < 1e-10)
      throw std::runtime_error("franklin_basis: degenerate hat sequence");
    F.col(k) /= norm;
  }

  FranklinBasis basis{grid, std::move(F), {}};
  const int n_knots = 1 << finest_level;
  for (int i = 0; i < n_knots; ++i)
    basis.knots.push_back(period * static_cast<double>(i) / static_cast<double>(n_knots));
  return basis;
}

Eigen::MatrixXd gram_matrix(const FranklinBasis& basis) {
  return basis.grid.spacing() * basis.functions.transpose() * basis.functions;
}

std::vector<double> ff_coeffs(const GridFunction& path, const FranklinBasis& basis) {
  if (path.grid != basis.grid)
    throw std::invalid_argument("ff_coeffs: path and basis grids differ");
  Eigen::Map<const Eigen::VectorXd> p(path.values.data(), path.grid.size());
  Eigen::VectorXd z = basis.grid.spacing() * basis.functions.transpose() * p;
  return std::vector<double>(z.data(), z.data() + z.size());
}

GridFunction ff_reconstruct(const FranklinBasis& basis, const std::vector<double>& coeffs,
                            int n, int m) {
  if (!(0 <= n && n < m && m <= basis.count()))
    throw std::invalid_argument("ff_reconstruct: bad block");
  if (static_cast<int>(coeffs.size()) < m)
    throw std::invalid_argument("ff_reconstruct: coefficient array too short");
  Eigen::Map<const Eigen::VectorXd> z(coeffs.data() + n, m - n);
  Eigen::VectorXd r = basis.functions.middleCols(n, m - n) * z;
  return GridFunction(basis.grid, std::vector<double>(r.data(), r.data() + r.size()));
}

BetaEstimate beta_estimate(const PathEnsemble& ensemble, const FranklinBasis& basis,
                           int n, int m) {
  if (ensemble.grid != basis.grid)
    throw std::invalid_argument("beta_estimate: ensemble and basis grids differ");
  if (!(0 <= n && n < m && m <= basis.count()))
    throw std::invalid_argument("beta_estimate: bad block");
  if (ensemble.n_paths() < 2)
    throw std::invalid_argument("beta_estimate: need at least 2 paths");

  const double h = basis.grid.spacing();
  const auto block = basis.functions.middleCols(n, m - n);
  std::vector<double> vals(static_cast<size_t>(ensemble.n_paths()));
  for (int i = 0; i < ensemble.n_paths(); ++i) {
    Eigen::VectorXd z = h * block.transpose() * ensemble.paths.row(i).transpose();
    const double sup = (block * z).cwiseAbs().maxCoeff();
    vals[static_cast<size_t>(i)] = std::atan(sup);
  }
  auto [mean, se] = mean_and_se(vals);
  return {n, m, mean, se, ensemble.n_paths()};
}

double arctan_metric(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.empty())
    throw std::invalid_argument("arctan_metric: need equal-length non-empty samples");
  double acc = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) acc += std::atan(std::abs(xs[i] - ys[i]));
  return acc / static_cast<double>(xs.size());
}

SequenceSampler seq_zero() {
  return {"zero", [](std::uint64_t, int) { return 0.0; }};
}

SequenceSampler seq_inverse_index(std::uint64_t seed) {
  return {"eta/n", [seed](std::uint64_t path, int index) {
            if (index < 1) throw std::invalid_argument("sequence index must be >= 1");
            return normal_at(seed, path, 0) / static_cast<double>(index);
          }};
}

SequenceSampler seq_constant_normal(std::uint64_t seed) {
  return {"eta constant", [seed](std::uint64_t path, int index) {
            if (index < 1) throw std::invalid_argument("sequence index must be >= 1");
            return normal_at(seed, path, 0);
          }};
}

SequenceSampler seq_iid_normal(std::uint64_t seed) {
  return {"iid normal", [seed](std::uint64_t path, int index) {
            if (index < 1) throw std::invalid_argument("sequence index must be >= 1");
            return normal_at(seed, path, static_cast<std::uint64_t>(index));
          }};
}

SequenceSampler seq_decaying_normal(std::uint64_t seed, double power) {
  return {"normal/n^p", [seed, power](std::uint64_t path, int index) {
            if (index < 1) throw std::invalid_argument("sequence index must be >= 1");
            return normal_at(seed, path, static_cast<std::uint64_t>(index)) /
                   std::pow(static_cast<double>(index), power);
          }};
}

SequenceSampler seq_log_decay(std::uint64_t seed) {
  return {"eta/log(n+1)", [seed](std::uint64_t path, int index) {
            if (index < 1) throw std::invalid_argument("sequence index must be >= 1");
            return normal_at(seed, path, 0) / std::log(static_cast<double>(index) + 1.0);
          }};
}

SeqEstimate kappa_gamma(const SequenceSampler& sampler, int n, int m, int M,
                        SeqMode mode) {
  if (!(1 <= n && n < m)) throw std::invalid_argument("kappa_gamma: need 1 <= n < m");
  if (M < 100) throw std::invalid_argument("kappa_gamma: need at least 100 samples");
  std::vector<double> vals(static_cast<size_t>(M));
  for (int i = 0; i < M; ++i) {
    const auto path = static_cast<std::uint64_t>(i);
    const double base = mode == SeqMode::gamma ? sampler.sample(path, n) : 0.0;
    double mx = 0.0;
    for (int k = n; k <= m; ++k)
      mx = std::max(mx, std::abs(sampler.sample(path, k) - base));
    vals[static_cast<size_t>(i)] = std::atan(mx);
  }
  auto [mean, se] = mean_and_se(vals);
  return {n, m, mean, se, M};
}

MonotoneSupReport monotone_sup_criterion(const SequenceSampler& sampler, int N_max,
                                         int M, int horizon) {
  if (N_max < 1) throw std::invalid_argument("monotone_sup_criterion: N_max < 1");
  if (M < 100) throw std::invalid_argument("monotone_sup_criterion: need >= 100 samples");
  if (horizon <= 0) horizon = 4 * N_max;

  MonotoneSupReport rep;
  rep.horizon = horizon;
  rep.truncation_warning = horizon < 4 * N_max;
  rep.per_path_monotone = true;
  std::vector<double> sums(static_cast<size_t>(N_max), 0.0);
  std::vector<double> eta(static_cast<size_t>(horizon));
  for (int i = 0; i < M; ++i) {
    const auto path = static_cast<std::uint64_t>(i);
    for (int k = horizon; k >= 1; --k) {
      const double v = std::atan(std::abs(sampler.sample(path, k)));
      eta[static_cast<size_t>(k - 1)] =
          k == horizon ? v : std::max(v, eta[static_cast<size_t>(k)]);
    }
    for (int k = 1; k < horizon; ++k)
      if (eta[static_cast<size_t>(k)] > eta[static_cast<size_t>(k - 1)] + 1e-15)
        rep.per_path_monotone = false;
    for (int n = 1; n <= N_max; ++n)
      sums[static_cast<size_t>(n - 1)] += eta[static_cast<size_t>(n - 1)];
  }
  for (int n = 1; n <= N_max; ++n) {
    rep.n_values.push_back(n);
    rep.mean_eta.push_back(sums[static_cast<size_t>(n - 1)] / static_cast<double>(M));
  }
  const double first = rep.mean_eta.front(), last = rep.mean_eta.back();
  rep.decays = first == 0.0 ? last == 0.0 : last <= 0.25 * first;
  return rep;
}

}  // namespace kpath

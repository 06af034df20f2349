#include "kpath/kernel.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace kpath {

namespace {

// Prime factor digits of an odd ratio, smallest first.
std::vector<std::uint32_t> factor_odd_ratio(std::uint64_t r) {
  std::vector<std::uint32_t> digits;
  for (std::uint64_t p = 3; p * p <= r; p += 2)
    while (r % p == 0) {
      digits.push_back(static_cast<std::uint32_t>(p));
      r /= p;
    }
  if (r > 1) {
    if (r > UINT32_MAX) return {};  // huge prime factor: not expandable
    digits.push_back(static_cast<std::uint32_t>(r));
  }
  return digits;
}

double eval_lacunar(const LacunarSpec& l, double t, double s) {
  if (!l.frequencies_representable())
    throw std::domain_error(
        "eval_kernel: lacunar frequencies too large for pointwise evaluation");
  double acc = 0.0;
  double f = static_cast<double>(l.base_frequency());
  for (int k = 1; k <= l.size(); ++k) {
    acc += l.coefficients()[static_cast<size_t>(k - 1)] * std::cos(f * t) * std::cos(f * s);
    if (k < l.size())
      for (std::uint32_t d : l.gaps()[static_cast<size_t>(k - 1)].digits)
        f *= static_cast<double>(d);
  }
  return acc;
}

}  // namespace

LacunarSpec LacunarSpec::from_frequencies(std::vector<double> coefficients,
                                          const std::vector<std::uint64_t>& freqs) {
  if (freqs.size() != coefficients.size())
    throw std::invalid_argument("LacunarSpec: coefficient/frequency size mismatch");
  if (freqs.empty()) throw std::invalid_argument("LacunarSpec: empty");
  std::vector<LacunarGap> gaps;
  for (size_t k = 0; k + 1 < freqs.size(); ++k) {
    if (freqs[k] == 0 || freqs[k + 1] % freqs[k] != 0)
      throw std::invalid_argument("LacunarSpec: ratios must be integers");
    std::uint64_t r = freqs[k + 1] / freqs[k];
    if (r < 5 || r % 2 == 0)
      throw std::invalid_argument("LacunarSpec: frequency gap violated");
    gaps.push_back({std::log(static_cast<double>(r)), factor_odd_ratio(r)});
  }
  return LacunarSpec(std::move(coefficients), freqs[0], std::move(gaps));
}

LacunarSpec LacunarSpec::theta_family(double theta, int count) {
  if (!(theta > 0.5)) throw std::invalid_argument("theta_family: theta must exceed 1/2");
  if (count < 1) throw std::invalid_argument("theta_family: count < 1");
  std::vector<double> c(static_cast<size_t>(count));
  for (int k = 1; k <= count; ++k)
    c[static_cast<size_t>(k - 1)] = std::pow(static_cast<double>(k), -theta);
  std::vector<LacunarGap> gaps(static_cast<size_t>(count - 1),
                               LacunarGap{std::log(5.0), {5u}});
  return LacunarSpec(std::move(c), 5, std::move(gaps), theta);
}

LacunarSpec LacunarSpec::theta_family_super(double theta, int count) {
  if (!(theta > 0.5)) throw std::invalid_argument("theta_family_super: theta must exceed 1/2");
  if (count < 1) throw std::invalid_argument("theta_family_super: count < 1");
  std::vector<double> c(static_cast<size_t>(count));
  for (int k = 1; k <= count; ++k)
    c[static_cast<size_t>(k - 1)] = std::pow(static_cast<double>(k), -theta);
  // n_k = 5^(2^(k-1)): exponent gap 2^(k-1), kept as explicit digits while small.
  std::vector<LacunarGap> gaps;
  for (int k = 1; k < count; ++k) {
    double m = std::exp2(static_cast<double>(k - 1));
    LacunarGap g;
    g.log_ratio = m * std::log(5.0);
    if (m <= 24.0)
      g.digits.assign(static_cast<size_t>(m), 5u);
    gaps.push_back(std::move(g));
  }
  return LacunarSpec(std::move(c), 5, std::move(gaps), theta);
}

double eval_kernel(const KernelSpec& spec, double t, double s) {
  const double end = spec.domain_end();
  if (t < -1e-12 || t > end + 1e-12 || s < -1e-12 || s > end + 1e-12)
    throw std::domain_error("eval_kernel: (t,s) outside [0, domain_end]");
  struct V {
    double t, s;
    double operator()(const BrownianMotionKernel&) const { return std::min(t, s); }
    double operator()(const BrownianBridgeKernel&) const { return std::min(t, s) - t * s; }
    double operator()(const LacunarSpec& l) const { return eval_lacunar(l, t, s); }
    double operator()(const DegenerateKernel& d) const { return d.eval(t, s); }
    double operator()(const GridKernel& g) const {
      int i = g.grid.node_index(t);
      int j = g.grid.node_index(s);
      if (i < 0 || j < 0)
        throw std::domain_error("eval_kernel: tabulated kernel evaluated off-grid");
      return g.values(i, j);
    }
    double operator()(const RankOneKernel& r) const { return r.factor(t) * r.factor(s); }
  };
  return std::visit(V{t, s}, spec.variant());
}

GridKernel sample_grid(const KernelSpec& spec, const Grid& grid) {
  if (std::abs(grid.domain_end() - spec.domain_end()) > 1e-12)
    throw std::invalid_argument("sample_grid: grid domain does not match the kernel domain");
  const int n = grid.size();
  Eigen::MatrixXd vals(n, n);
  const bool sym = spec.is_symmetric();
  for (int i = 0; i < n; ++i) {
    const int jmax = sym ? i : n - 1;
    for (int j = 0; j <= jmax; ++j) {
      double v = eval_kernel(spec, grid.point(i), grid.point(j));
      if (!std::isfinite(v))
        throw std::runtime_error("sample_grid: non-finite kernel value at (" +
                                 std::to_string(i) + "," + std::to_string(j) + ")");
      vals(i, j) = v;
      if (sym) vals(j, i) = v;
    }
  }
  return GridKernel(grid, std::move(vals));
}

PsdReport check_psd(const GridKernel& gk, double rel_tol) {
  if (!gk.is_symmetric())
    throw std::invalid_argument("check_psd: kernel matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gk.values, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("check_psd: eigensolver did not converge");
  PsdReport r;
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.max_eigenvalue = es.eigenvalues().maxCoeff();
  r.is_psd = r.min_eigenvalue >= -rel_tol * std::max(r.max_eigenvalue, 0.0);
  return r;
}

std::vector<double> modulus_profile(const GridFunction& f) {
  const int n = f.grid.size();
  std::vector<double> m(static_cast<size_t>(n / 2 + 1), 0.0);
  for (int j = 1; j <= n / 2; ++j) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = std::abs(f.values[static_cast<size_t>((i + j) % n)] -
                          f.values[static_cast<size_t>(i)]);
      worst = std::max(worst, d);
    }
    m[static_cast<size_t>(j)] = std::max(m[static_cast<size_t>(j - 1)], worst);
  }
  return m;
}

double modulus_of_continuity(const GridFunction& f, double delta) {
  const double h = f.grid.spacing();
  if (!(delta > 0.0) || delta > f.grid.domain_end())
    throw std::invalid_argument("modulus_of_continuity: delta out of range");
  if (delta < h)
    throw std::domain_error("modulus_of_continuity: delta below grid resolution");
  const int n = f.grid.size();
  int jmax = std::min(static_cast<int>(std::floor(delta / h * (1.0 + 1e-12))), n / 2);
  double worst = 0.0;
  for (int j = 1; j <= jmax; ++j)
    for (int i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(f.values[static_cast<size_t>((i + j) % n)] -
                                       f.values[static_cast<size_t>(i)]));
  return worst;
}

std::vector<double> kernel_modulus_profile(const GridKernel& gk) {
  const int n = gk.grid.size();
  std::vector<double> m(static_cast<size_t>(n / 2 + 1), 0.0);
  for (int j = 1; j <= n / 2; ++j) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      int ij = (i + j) % n;
      worst = std::max(worst,
                       (gk.values.row(ij) - gk.values.row(i)).cwiseAbs().maxCoeff());
    }
    m[static_cast<size_t>(j)] = std::max(m[static_cast<size_t>(j - 1)], worst);
  }
  return m;
}

}  // namespace kpath

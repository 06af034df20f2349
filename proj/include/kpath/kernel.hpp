#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kpath/grid.hpp"

namespace kpath {

// One frequency gap n_{k+1}/n_k = 2 p_k + 1, p_k >= 2.  `digits` is a
// factorization of the ratio into small radices (used by the digit-cell sup
// solver); it is left empty for gaps too large to expand, which then act as
// scale separators.
struct LacunarGap {
  double log_ratio = 0.0;
  std::vector<std::uint32_t> digits;  // product == ratio when non-empty

  bool expandable() const { return !digits.empty(); }
};

// Lacunary series data: coefficients b_k (or a_k for kernels) attached to
// frequencies n_k satisfying the gap condition.  Frequencies are kept as a
// base frequency plus per-gap data, so that super-lacunary specs (whose
// frequencies overflow any integer type) remain representable.
class LacunarSpec {
 public:
  LacunarSpec(std::vector<double> coefficients, std::uint64_t base_frequency,
              std::vector<LacunarGap> gaps,
              std::optional<double> theta = std::nullopt)
      : coeffs_(std::move(coefficients)),
        base_(base_frequency),
        gaps_(std::move(gaps)),
        theta_(theta) {
    if (coeffs_.empty()) throw std::invalid_argument("LacunarSpec: empty");
    if (gaps_.size() + 1 != coeffs_.size())
      throw std::invalid_argument("LacunarSpec: need one gap per coefficient pair");
    if (base_ == 0) throw std::invalid_argument("LacunarSpec: base frequency 0");
    for (double c : coeffs_)
      if (!(c > 0.0)) throw std::invalid_argument("LacunarSpec: coefficients must be positive");
    for (const LacunarGap& g : gaps_)
      if (g.log_ratio < std::log(5.0) - 1e-12)
        throw std::invalid_argument("LacunarSpec: frequency ratio below 5");
  }

  // Explicit frequency list, validated against the gap condition
  // (integer odd ratio >= 5).
  static LacunarSpec from_frequencies(std::vector<double> coefficients,
                                      const std::vector<std::uint64_t>& freqs);

  // The family b_k = k^{-theta} with constant ratio 5 (n_k = 5^k).
  static LacunarSpec theta_family(double theta, int count);

  // The super-lacunary family b_k = k^{-theta}, n_k = 5^(2^(k-1)), for which
  // log n_{k+1} / log n_k -> infinity.
  static LacunarSpec theta_family_super(double theta, int count);

  int size() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<double>& coefficients() const { return coeffs_; }
  const std::vector<LacunarGap>& gaps() const { return gaps_; }
  std::optional<double> theta() const { return theta_; }
  std::uint64_t base_frequency() const { return base_; }

  // Exact k-th frequency (1-based); throws once it no longer fits in 64 bits.
  std::uint64_t frequency(int k) const {
    double p = static_cast<double>(base_);
    std::uint64_t f = base_;
    for (int i = 1; i < k; ++i) {
      const LacunarGap& g = gaps_[static_cast<size_t>(i - 1)];
      p *= std::exp(g.log_ratio);
      if (!g.expandable() || p > 9.0e18)
        throw std::overflow_error("LacunarSpec: frequency overflows 64 bits");
      for (std::uint32_t d : g.digits) f *= d;
    }
    return f;
  }

  double log_frequency(int k) const {
    double lf = std::log(static_cast<double>(base_));
    for (int i = 1; i < k; ++i) lf += gaps_[static_cast<size_t>(i - 1)].log_ratio;
    return lf;
  }

  bool frequencies_representable() const {
    for (const LacunarGap& g : gaps_)
      if (!g.expandable()) return false;
    return log_frequency(size()) < std::log(9.0e18);
  }

  double coefficient_sum() const {
    double s = 0.0;
    for (double c : coeffs_) s += c;
    return s;
  }

  // First `count` terms.
  LacunarSpec truncate(int count) const {
    if (count < 1 || count > size())
      throw std::invalid_argument("LacunarSpec::truncate: bad count");
    return LacunarSpec(
        std::vector<double>(coeffs_.begin(), coeffs_.begin() + count), base_,
        std::vector<LacunarGap>(gaps_.begin(), gaps_.begin() + (count - 1)), theta_);
  }

 private:
  std::vector<double> coeffs_;
  std::uint64_t base_;
  std::vector<LacunarGap> gaps_;
  std::optional<double> theta_;
};

// Finite-rank kernel sum_{k,l} a_{k,l} phi_k(t) psi_l(s).
struct DegenerateKernel {
  Eigen::MatrixXd coeff;  // n1 x n2
  std::vector<std::function<double(double)>> left_factors;
  std::vector<std::function<double(double)>> right_factors;
  bool symmetric = false;
  bool orthonormalized = false;

  std::pair<int, int> rank() const {
    return {static_cast<int>(left_factors.size()),
            static_cast<int>(right_factors.size())};
  }

  void validate() const {
    if (coeff.rows() != static_cast<Eigen::Index>(left_factors.size()) ||
        coeff.cols() != static_cast<Eigen::Index>(right_factors.size()))
      throw std::invalid_argument("DegenerateKernel: coeff shape mismatch");
    if (symmetric) {
      if (left_factors.size() != right_factors.size())
        throw std::invalid_argument("DegenerateKernel: symmetric rank mismatch");
      if (!coeff.isDiagonal(1e-14))
        throw std::invalid_argument("DegenerateKernel: symmetric form needs diagonal coeff");
    }
  }

  double eval(double t, double s) const {
    const int n1 = static_cast<int>(left_factors.size());
    const int n2 = static_cast<int>(right_factors.size());
    Eigen::VectorXd lt(n1), rs(n2);
    for (int k = 0; k < n1; ++k) lt(k) = left_factors[static_cast<size_t>(k)](t);
    for (int l = 0; l < n2; ++l) rs(l) = right_factors[static_cast<size_t>(l)](s);
    return lt.dot(coeff * rs);
  }
};

// Kernel values on a grid, values(i,j) = R(t_i, t_j).
struct GridKernel {
  Grid grid;
  Eigen::MatrixXd values;

  GridKernel(const Grid& g, Eigen::MatrixXd v) : grid(g), values(std::move(v)) {
    if (values.rows() != g.size() || values.cols() != g.size())
      throw std::invalid_argument("GridKernel: matrix size mismatch");
    if (!values.allFinite())
      throw std::invalid_argument("GridKernel: non-finite entries");
  }

  bool is_symmetric(double rel_tol = 1e-12) const {
    double scale = values.cwiseAbs().maxCoeff();
    if (scale == 0.0) return true;
    return (values - values.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
  }

  // Quadrature trace h * sum_i R(t_i, t_i), approximating int R(t,t) dt.
  double quadrature_trace() const {
    return grid.spacing() * values.diagonal().sum();
  }
};

struct BrownianMotionKernel {};
struct BrownianBridgeKernel {};
struct RankOneKernel {
  std::function<double(double)> factor;
};

// Symbolic covariance kernel.  Brownian variants live on [0,1]; the
// trigonometric variants on [0,2*pi].  Grids from different domains are
// never mixed (enforced in sample_grid).
class KernelSpec {
 public:
  using Variant = std::variant<BrownianMotionKernel, BrownianBridgeKernel,
                               LacunarSpec, DegenerateKernel, GridKernel,
                               RankOneKernel>;

  KernelSpec(Variant v, double domain_end)
      : variant_(std::move(v)), domain_end_(domain_end) {
    if (!(domain_end_ > 0.0))
      throw std::invalid_argument("KernelSpec: bad domain_end");
  }

  static KernelSpec brownian_motion() { return KernelSpec(BrownianMotionKernel{}, 1.0); }
  static KernelSpec brownian_bridge() { return KernelSpec(BrownianBridgeKernel{}, 1.0); }
  static KernelSpec lacunar(LacunarSpec s) { return KernelSpec(std::move(s), two_pi); }
  static KernelSpec degenerate(DegenerateKernel d, double domain_end = two_pi) {
    d.validate();
    return KernelSpec(std::move(d), domain_end);
  }
  static KernelSpec tabulated(GridKernel g) {
    double end = g.grid.domain_end();
    return KernelSpec(std::move(g), end);
  }
  static KernelSpec rank_one(std::function<double(double)> f, double domain_end = two_pi) {
    return KernelSpec(RankOneKernel{std::move(f)}, domain_end);
  }

  double domain_end() const { return domain_end_; }
  const Variant& variant() const { return variant_; }

  bool is_symmetric() const {
    if (const auto* d = std::get_if<DegenerateKernel>(&variant_)) return d->symmetric;
    if (const auto* g = std::get_if<GridKernel>(&variant_)) return g->is_symmetric();
    return true;
  }

  const LacunarSpec* as_lacunar() const { return std::get_if<LacunarSpec>(&variant_); }

  std::string name() const {
    struct V {
      std::string operator()(const BrownianMotionKernel&) const { return "brownian_motion"; }
      std::string operator()(const BrownianBridgeKernel&) const { return "brownian_bridge"; }
      std::string operator()(const LacunarSpec&) const { return "lacunar"; }
      std::string operator()(const DegenerateKernel&) const { return "degenerate"; }
      std::string operator()(const GridKernel&) const { return "tabulated"; }
      std::string operator()(const RankOneKernel&) const { return "rank_one"; }
    };
    return std::visit(V{}, variant_);
  }

 private:
  Variant variant_;
  double domain_end_;
};

struct PsdReport {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool is_psd = false;
};

double eval_kernel(const KernelSpec& spec, double t, double s);
GridKernel sample_grid(const KernelSpec& spec, const Grid& grid);
PsdReport check_psd(const GridKernel& gk, double rel_tol = 1e-10);

// Grid sup-modulus of continuity with periodic wraparound:
// max over shifts |h| <= delta of sup_t |f(t+h) - f(t)|.
double modulus_of_continuity(const GridFunction& f, double delta);

// m[j] = sup-oscillation of f under shifts of up to j grid steps (prefix max),
// j = 0 .. n/2.  modulus_of_continuity(f, delta) == m[floor(delta/h)].
std::vector<double> modulus_profile(const GridFunction& f);

// Same profile for a bivariate grid kernel, shifting the first argument
// (for symmetric kernels the full bivariate modulus lies within a factor 2).
std::vector<double> kernel_modulus_profile(const GridKernel& gk);

}  // namespace kpath

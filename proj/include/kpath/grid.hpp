#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpath {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Uniform left-closed grid on [0, domain_end).  Power-of-two size keeps the
// DFT quadrature exact for trigonometric polynomials sampled on it.
class Grid {
 public:
  Grid(double domain_end, int n_points) : end_(domain_end), n_(n_points) {
    if (!(domain_end > 0.0))
      throw std::invalid_argument("Grid: domain_end must be positive");
    if (n_points < 8 || (n_points & (n_points - 1)) != 0)
      throw std::invalid_argument(
          "Grid: n_points must be a power of two and >= 8, got " +
          std::to_string(n_points));
    h_ = end_ / static_cast<double>(n_);
  }

  double domain_end() const { return end_; }
  int size() const { return n_; }
  double spacing() const { return h_; }
  double point(int i) const { return h_ * static_cast<double>(i); }

  std::vector<double> points() const {
    std::vector<double> p(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) p[static_cast<size_t>(i)] = point(i);
    return p;
  }

  bool operator==(const Grid& o) const {
    return n_ == o.n_ && end_ == o.end_;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

  // Index of a grid node holding t, or -1 if t is off-grid.
  int node_index(double t, double tol = 1e-9) const {
    double x = t / h_;
    double r = std::round(x);
    if (std::abs(x - r) > tol) return -1;
    long i = static_cast<long>(r) % n_;
    if (i < 0) i += n_;
    return static_cast<int>(i);
  }

 private:
  double end_;
  int n_;
  double h_;
};

// A real function tabulated on a grid.
struct GridFunction {
  Grid grid;
  std::vector<double> values;

  GridFunction(const Grid& g, std::vector<double> v)
      : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.size())
      throw std::invalid_argument("GridFunction: size mismatch");
  }

  template <class F>
  static GridFunction sample(const Grid& g, F&& f) {
    std::vector<double> v(static_cast<size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) v[static_cast<size_t>(i)] = f(g.point(i));
    return GridFunction(g, std::move(v));
  }

  double sup_abs() const {
    double m = 0.0;
    for (double x : values) m = std::max(m, std::abs(x));
    return m;
  }
};

}  // namespace kpath

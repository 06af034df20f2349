#pragma once

#include <cstdint>
#include <vector>

namespace kpath {

// f(u) = sum_{j=0}^{L-1} c_j cos(F_j u), where F_j is the product of the
// first depths[j] radices (so F_0 = 1 requires depths[0] = 0).  This is the
// reduced form of a lacunary block: dividing all block frequencies by the
// lowest one leaves the sup over the period unchanged and keeps every angle
// computable exactly however large the original frequencies are.
struct LacunarPoly {
  std::vector<double> coeffs;           // c_j, signed
  std::vector<std::uint32_t> radices;   // digit radices >= 2, one per tree level
  std::vector<int> depths;              // strictly increasing, depths[0] == 0

  // Convenience for the classic case F_{j+1} = F_j * r_j with one digit per gap.
  static LacunarPoly from_ratios(std::vector<double> c, std::vector<std::uint32_t> ratios) {
    LacunarPoly p;
    p.depths.resize(c.size());
    for (size_t j = 0; j < c.size(); ++j) p.depths[j] = static_cast<int>(j);
    p.coeffs = std::move(c);
    p.radices = std::move(ratios);
    return p;
  }
};

struct SupResult {
  double lower = 0.0;   // value attained at a concrete point
  double upper = 0.0;   // certified bound
  bool converged = false;  // upper - lower <= tol
  long nodes = 0;
};

// Certified global maximum of f over one period, via branch and bound on
// mixed-radix digit cells.  Angles of a cell endpoint are exact functions of
// a bounded digit window, so there is no precision loss at depth.
SupResult lacunar_sup(const LacunarPoly& poly, double tol, long max_nodes = 400000);

// sup |f| = max(sup f, sup -f).
SupResult lacunar_sup_abs(const LacunarPoly& poly, double tol, long max_nodes = 400000);

}  // namespace kpath

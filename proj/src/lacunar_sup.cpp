#include "kpath/lacunar_sup.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace kpath {

namespace {

constexpr int kWindow = 25;  // active digit window; older terms are frozen
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Max / min of cos(2*pi*x) over x in [a, a+w], 0 <= a < 1, w >= 0.
double arc_cos_max(double a, double w) {
  if (w >= 1.0 || a == 0.0 || a + w >= 1.0) return 1.0;
  return std::max(std::cos(kTwoPi * a), std::cos(kTwoPi * (a + w)));
}

double arc_cos_min(double a, double w) {
  if (w >= 1.0 || (a <= 0.5 && a + w >= 0.5)) return -1.0;
  return std::min(std::cos(kTwoPi * a), std::cos(kTwoPi * (a + w)));
}

struct Node {
  int depth = 0;
  int fz = 0;          // terms j < fz contribute through `frozen`
  int active = 0;      // number of live window slots (terms fz .. fz+active-1)
  double frozen = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  std::array<double, kWindow> frac{};
  std::array<double, kWindow> width{};
};

struct ByUpper {
  bool operator()(const Node& a, const Node& b) const { return a.upper < b.upper; }
};

}  // namespace

SupResult lacunar_sup(const LacunarPoly& poly, double tol, long max_nodes) {
  const int L = static_cast<int>(poly.coeffs.size());
  if (L == 0) throw std::invalid_argument("lacunar_sup: empty polynomial");
  if (static_cast<int>(poly.depths.size()) != L || poly.depths[0] != 0)
    throw std::invalid_argument("lacunar_sup: depths must start at 0, one per term");
  for (int j = 1; j < L; ++j)
    if (poly.depths[static_cast<size_t>(j)] <= poly.depths[static_cast<size_t>(j - 1)])
      throw std::invalid_argument("lacunar_sup: depths must be strictly increasing");
  if (static_cast<int>(poly.radices.size()) < poly.depths[static_cast<size_t>(L - 1)])
    throw std::invalid_argument("lacunar_sup: radices do not cover the last term");
  for (std::uint32_t r : poly.radices)
    if (r < 2) throw std::invalid_argument("lacunar_sup: radices must be >= 2");
  if (!(tol > 0.0)) throw std::invalid_argument("lacunar_sup: tol must be positive");

  // suffix sums over unresolved terms: signed (left-endpoint value, angle 0)
  // and absolute (upper bound).
  std::vector<double> suf_signed(static_cast<size_t>(L + 1), 0.0);
  std::vector<double> suf_abs(static_cast<size_t>(L + 1), 0.0);
  for (int j = L - 1; j >= 0; --j) {
    suf_signed[static_cast<size_t>(j)] =
        suf_signed[static_cast<size_t>(j + 1)] + poly.coeffs[static_cast<size_t>(j)];
    suf_abs[static_cast<size_t>(j)] =
        suf_abs[static_cast<size_t>(j + 1)] + std::abs(poly.coeffs[static_cast<size_t>(j)]);
  }

  auto radix = [&](int depth) -> std::uint32_t {
    return depth < static_cast<int>(poly.radices.size())
               ? poly.radices[static_cast<size_t>(depth)]
               : 5u;
  };
  auto term_bound = [&](double c, double a, double w) {
    return c >= 0.0 ? c * arc_cos_max(a, w) : c * arc_cos_min(a, w);
  };
  auto rescore = [&](Node& nd) {
    double up = nd.frozen, lo = nd.frozen;
    for (int s = 0; s < nd.active; ++s) {
      const double c = poly.coeffs[static_cast<size_t>(nd.fz + s)];
      up += term_bound(c, nd.frac[static_cast<size_t>(s)], nd.width[static_cast<size_t>(s)]);
      lo += c * std::cos(kTwoPi * nd.frac[static_cast<size_t>(s)]);
    }
    const int resolved = nd.fz + nd.active;
    nd.upper = up + suf_abs[static_cast<size_t>(resolved)];
    nd.lower = lo + suf_signed[static_cast<size_t>(resolved)];
  };

  std::priority_queue<Node, std::vector<Node>, ByUpper> queue;
  Node root;
  rescore(root);
  double best_lower = root.lower;
  queue.push(root);

  SupResult result;
  result.nodes = 1;
  double top_upper = root.upper;

  while (!queue.empty()) {
    Node parent = queue.top();
    top_upper = parent.upper;
    if (top_upper - best_lower <= tol) {
      result.converged = true;
      break;
    }
    if (result.nodes >= max_nodes) break;
    queue.pop();

    const std::uint32_t R = radix(parent.depth);
    const double inv_r = 1.0 / static_cast<double>(R);
    for (std::uint32_t d = 0; d < R; ++d) {
      Node child;
      child.depth = parent.depth + 1;
      child.fz = parent.fz;
      child.frozen = parent.frozen;
      child.active = parent.active;
      const double dd = static_cast<double>(d);
      for (int s = 0; s < parent.active; ++s) {
        double a = parent.frac[static_cast<size_t>(s)] +
                   dd * parent.width[static_cast<size_t>(s)] * inv_r;
        if (a >= 1.0) a -= 1.0;
        child.frac[static_cast<size_t>(s)] = a;
        child.width[static_cast<size_t>(s)] = parent.width[static_cast<size_t>(s)] * inv_r;
      }
      const int next_term = parent.fz + parent.active;
      if (next_term < L &&
          poly.depths[static_cast<size_t>(next_term)] == parent.depth) {
        // term whose frequency equals the cell scale becomes resolved
        child.frac[static_cast<size_t>(child.active)] = dd * inv_r;
        child.width[static_cast<size_t>(child.active)] = inv_r;
        ++child.active;
      }
      while (child.active == kWindow ||
             (child.active > 0 && child.width[0] < 1e-18)) {
        child.frozen += poly.coeffs[static_cast<size_t>(child.fz)] *
                        std::cos(kTwoPi * child.frac[0]);
        for (int s = 1; s < child.active; ++s) {
          child.frac[static_cast<size_t>(s - 1)] = child.frac[static_cast<size_t>(s)];
          child.width[static_cast<size_t>(s - 1)] = child.width[static_cast<size_t>(s)];
        }
        ++child.fz;
        --child.active;
      }
      rescore(child);
      best_lower = std::max(best_lower, child.lower);
      ++result.nodes;
      // A child whose bound cannot beat the incumbent is dead.
      if (child.upper > best_lower + 0.25 * tol) queue.push(std::move(child));
    }
  }

  result.lower = best_lower;
  // Regions discarded along the way were certified <= best_lower + tol/4.
  if (queue.empty()) top_upper = best_lower;
  result.upper = std::max(top_upper, best_lower + 0.25 * tol);
  if (!result.converged) result.converged = result.upper - result.lower <= tol;
  return result;
}

SupResult lacunar_sup_abs(const LacunarPoly& poly, double tol, long max_nodes) {
  SupResult plus = lacunar_sup(poly, tol, max_nodes);
  LacunarPoly neg = poly;
  for (double& c : neg.coeffs) c = -c;
  SupResult minus = lacunar_sup(neg, tol, max_nodes);
  SupResult out;
  out.lower = std::max(plus.lower, minus.lower);
  out.upper = std::max(plus.upper, minus.upper);
  out.converged = plus.converged && minus.converged;
  out.nodes = plus.nodes + minus.nodes;
  return out;
}

}  // namespace kpath

// Command-line front end: runs named numerical experiments over the library
// and writes CSV/JSON reports plus a manifest stamped with the config hash.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kpath/blocks.hpp"
#include "kpath/diag.hpp"
#include "kpath/franklin.hpp"
#include "kpath/grid.hpp"
#include "kpath/io.hpp"
#include "kpath/kernel.hpp"
#include "kpath/mercer.hpp"
#include "kpath/paths.hpp"
#include "kpath/rng.hpp"
#include "kpath/trig.hpp"

namespace {

using nlohmann::json;
using namespace kpath;

using Files = std::map<std::string, std::string>;

constexpr std::uint64_t kDefaultSeed = 20260823;

std::string out_dir_default() {
  const char* env = std::getenv("KPATH_OUTPUT_DIR");
  return env && *env ? env : ".";
}

json report_json(const ContinuityReport& r) {
  return json{{"criterion", r.criterion},
              {"verdict", to_string(r.verdict)},
              {"tail_estimate", r.tail_estimate},
              {"n_terms", r.terms.size()},
              {"partial_sum", r.partial_sums.empty() ? 0.0 : r.partial_sums.back()},
              {"assumptions", r.assumptions}};
}

std::string report_csv(const ContinuityReport& r) {
  std::vector<double> idx(r.terms.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i + 1);
  return csv_table({"k", "term", "partial_sum"}, {idx, r.terms, r.partial_sums});
}

KernelSpec make_kernel(const std::string& name) {
  if (name == "brownian_bridge") return KernelSpec::brownian_bridge();
  if (name == "brownian_motion") return KernelSpec::brownian_motion();
  if (name.rfind("lacunar_theta:", 0) == 0) {
    const std::string rest = name.substr(14);
    const size_t colon = rest.find(':');
    if (colon == std::string::npos)
      throw ConfigError("kernel '" + name + "': expected lacunar_theta:<theta>:<count>");
    const double theta = std::stod(rest.substr(0, colon));
    const int count = std::stoi(rest.substr(colon + 1));
    return KernelSpec::lacunar(LacunarSpec::theta_family(theta, count));
  }
  if (name.rfind("lacunar_quarters:", 0) == 0) {
    const int count = std::stoi(name.substr(17));
    std::vector<double> a;
    for (int k = 1; k <= count; ++k) a.push_back(std::pow(4.0, -k));
    std::vector<LacunarGap> gaps(static_cast<size_t>(count - 1),
                                 LacunarGap{std::log(5.0), {5u}});
    return KernelSpec::lacunar(LacunarSpec(std::move(a), 5, std::move(gaps)));
  }
  throw ConfigError("unknown kernel '" + name + "'");
}

// ---------------------------------------------------------------- mercer ---

Files run_mercer(const std::string& kernel_name, int grid_n) {
  KernelSpec spec = make_kernel(kernel_name);
  Grid grid(spec.domain_end(), grid_n);
  GridKernel gk = sample_grid(spec, grid);
  MercerDecomposition md = nystrom_decompose(gk);

  std::vector<double> ks, lambdas;
  const int n_out = std::min(md.n_kept(), 64);
  for (int k = 0; k < n_out; ++k) {
    ks.push_back(static_cast<double>(k + 1));
    lambdas.push_back(md.eigenvalues(k));
  }
  json summary{{"kernel", kernel_name},
               {"grid", grid_n},
               {"n_kept", md.n_kept()},
               {"trace", gk.quadrature_trace()},
               {"eigenvalue_sum", md.eigenvalues.sum() + md.trace_residual},
               {"clipped_count", md.clipped_count},
               {"lambda_1", md.eigenvalues(0)}};
  Files files;
  files["mercer_eigenvalues.csv"] = csv_table({"k", "lambda"}, {ks, lambdas});
  files["mercer_summary.json"] = summary.dump(2) + "\n";
  std::cout << "mercer: lambda_1 = " << format_double(md.eigenvalues(0))
            << ", trace = " << format_double(gk.quadrature_trace()) << "\n";
  return files;
}

// ------------------------------------------------------------- degapprox ---

std::vector<std::pair<std::string, KernelSpec>> inequality_suite(int grid_n) {
  std::vector<std::pair<std::string, KernelSpec>> suite;
  suite.emplace_back("brownian_bridge", KernelSpec::brownian_bridge());
  suite.emplace_back("brownian_motion", KernelSpec::brownian_motion());
  suite.emplace_back("lacunar_theta_1.5", make_kernel("lacunar_theta:1.5:3"));
  suite.emplace_back("lacunar_quarters", make_kernel("lacunar_quarters:3"));
  suite.emplace_back("cosine_rank_one",
                     KernelSpec::rank_one([](double t) { return std::cos(t); }));
  {
    // Cosine-product kernel with geometric decay: eigenfunctions are the
    // cos(k .) themselves, so the rank-doubling inequality applies with slack.
    // Note that a full stationary kernel such as exp(cos(t-s) - 1) would NOT
    // qualify: its eigenvalues come in cos/sin pairs and a degree-n polynomial
    // needs rank 2n+1, one more than the inequality budgets.
    Grid g(two_pi, grid_n);
    Eigen::MatrixXd vals = Eigen::MatrixXd::Zero(grid_n, grid_n);
    for (int i = 0; i < grid_n; ++i)
      for (int j = 0; j < grid_n; ++j)
        for (int k = 0; k <= 40; ++k)
          vals(i, j) += std::exp(-static_cast<double>(k)) *
                        std::cos(k * g.point(i)) * std::cos(k * g.point(j));
    suite.emplace_back("cosine_decay", KernelSpec::tabulated(GridKernel(g, vals)));
  }
  return suite;
}

Files run_degapprox(int grid_n, int max_rank) {
  auto suite = inequality_suite(grid_n);
  std::vector<double> col_n1, col_n2, col_svd, col_best, col_margin;
  std::vector<std::string> kernel_names;
  double worst_margin = -1e300;
  std::string worst_case;
  for (const auto& [name, spec] : suite) {
    Grid grid(spec.domain_end(), grid_n);
    GridKernel gk = sample_grid(spec, grid);
    for (int n1 = 1; n1 <= max_rank; ++n1)
      for (int n2 = 1; n2 <= max_rank; ++n2) {
        const double svd_err = svd_degenerate_approx(gk, 2 * n1, 2 * n2).second.err_l2;
        const double best = best_error_l2_2d(gk, n1, n2);
        const double margin = svd_err - best;
        kernel_names.push_back(name);
        col_n1.push_back(n1);
        col_n2.push_back(n2);
        col_svd.push_back(svd_err);
        col_best.push_back(best);
        col_margin.push_back(margin);
        // Relative to the best error, floored at roundoff scale of the kernel
        // norm so that exactly representable kernels (best = 0) do not blow up.
        const double floor = 1e-3 * grid.spacing() * gk.values.norm();
        const double rel = margin / std::max(best, floor);
        if (rel > worst_margin) {
          worst_margin = rel;
          worst_case = name;
        }
      }
  }
  std::string csv = "kernel,n1,n2,svd_err_l2_2n,best_err_l2,margin\n";
  for (size_t i = 0; i < col_n1.size(); ++i)
    csv += kernel_names[i] + "," + format_double(col_n1[i]) + "," +
           format_double(col_n2[i]) + "," + format_double(col_svd[i]) + "," +
           format_double(col_best[i]) + "," + format_double(col_margin[i]) + "\n";
  json summary{{"kernels", suite.size()},
               {"max_rank", max_rank},
               {"worst_relative_margin", worst_margin},
               {"worst_case", worst_case},
               {"inequality_holds", worst_margin <= 1e-9}};
  Files files;
  files["degapprox_inequality.csv"] = csv;
  files["degapprox_summary.json"] = summary.dump(2) + "\n";
  std::cout << "degapprox: worst relative margin = " << format_double(worst_margin)
            << (worst_margin <= 1e-9 ? " (inequality holds)\n" : " (VIOLATION)\n");
  return files;
}

// ----------------------------------------------------------------- vpsum ---

Files run_vpsum(int grid_n, int degree, int trials, std::uint64_t seed) {
  Grid grid(two_pi, grid_n);
  std::vector<double> trial_idx, sup_diffs;
  double max_diff = 0.0;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    TrigPolynomial poly = random_trig_polynomial(2 * degree, rng);
    GridFunction f = poly.sample(grid);
    GridFunction via_coeffs = vp_sum(f, degree).sample(grid);
    GridFunction via_conv = vp_sum_convolution(f, degree);
    double d = 0.0;
    for (int i = 0; i < grid_n; ++i)
      d = std::max(d, std::abs(via_coeffs.values[static_cast<size_t>(i)] -
                               via_conv.values[static_cast<size_t>(i)]));
    trial_idx.push_back(t);
    sup_diffs.push_back(d);
    max_diff = std::max(max_diff, d);
  }
  // Reproduction of polynomials up to degree ceil(n/2) - 1.
  const int repro_degree = (degree + 1) / 2 - 1;
  double repro_err = 0.0;
  for (int t = 0; t < 10; ++t) {
    CounterRng rng(seed ^ 0x5eedULL, static_cast<std::uint64_t>(t));
    TrigPolynomial poly = random_trig_polynomial(repro_degree, rng);
    GridFunction f = poly.sample(grid);
    GridFunction v = vp_sum(f, degree).sample(grid);
    for (int i = 0; i < grid_n; ++i)
      repro_err = std::max(repro_err, std::abs(v.values[static_cast<size_t>(i)] -
                                               f.values[static_cast<size_t>(i)]));
  }
  json summary{{"degree", degree},       {"trials", trials},
               {"max_sup_diff", max_diff}, {"reproduction_degree", repro_degree},
               {"reproduction_error", repro_err}, {"consistent", max_diff <= 1e-8}};
  Files files;
  files["vpsum_consistency.csv"] = csv_table({"trial", "sup_diff"}, {trial_idx, sup_diffs});
  files["vpsum_summary.json"] = summary.dump(2) + "\n";
  std::cout << "vpsum: max coefficient/convolution gap = " << format_double(max_diff)
            << ", reproduction error = " << format_double(repro_err) << "\n";
  return files;
}

// ------------------------------------------------------------------- tau ---

BlockList doubling_blocks(int count) {
  BlockList blocks;
  int n = 1;
  for (int i = 0; i < count; ++i) {
    blocks.emplace_back(n, 2 * n);
    n *= 2;
  }
  return blocks;
}

const char* verdict_name(ProfileVerdict v) {
  switch (v) {
    case ProfileVerdict::consistent: return "consistent";
    case ProfileVerdict::violated: return "violated";
    default: return "inconclusive";
  }
}

Files run_tau(double theta, int n_blocks, int M, std::uint64_t seed) {
  LacunarSpec process = LacunarSpec::theta_family_super(theta, 1 << (n_blocks + 1));
  TauProfile profile = tau_profile_lacunar(process, doubling_blocks(n_blocks), M, seed);
  std::vector<double> ns, ms, means, ses;
  for (const auto& e : profile.estimates) {
    ns.push_back(e.n);
    ms.push_back(e.m);
    means.push_back(e.mean);
    ses.push_back(e.std_error);
  }
  json summary{{"theta", theta},
               {"M", M},
               {"seed", seed},
               {"verdict", verdict_name(profile.verdict)},
               {"first_mean", means.front()},
               {"last_mean", means.back()},
               {"running_sup", profile.running_sup}};
  Files files;
  files["tau_profile.csv"] = csv_table({"n", "m", "mean", "std_error"}, {ns, ms, means, ses});
  files["tau_summary.json"] = summary.dump(2) + "\n";
  std::cout << "tau: theta = " << theta << ", verdict = "
            << verdict_name(profile.verdict) << ", last mean = "
            << format_double(means.back()) << "\n";
  return files;
}

Files run_moments(int grid_n, int M, std::uint64_t seed) {
  KernelSpec spec = KernelSpec::brownian_bridge();
  Grid grid(spec.domain_end(), grid_n);
  MercerDecomposition md = nystrom_decompose(sample_grid(spec, grid));
  PathEnsemble ensemble = kl_simulate(md, md.n_kept(), M, seed);
  MomentGrowthReport rep = sup_moment_growth(ensemble, {2.0, 4.0, 8.0, 16.0});
  json summary{{"M", M},
               {"grid", grid_n},
               {"seed", seed},
               {"p", rep.p_values},
               {"moments", rep.moments},
               {"ratios", rep.ratios},
               {"bounded_by_3", rep.bounded}};
  Files files;
  files["moment_growth.csv"] = csv_table({"p", "moment", "ratio"},
                                         {rep.p_values, rep.moments, rep.ratios});
  files["moment_summary.json"] = summary.dump(2) + "\n";
  std::cout << "moments: max ratio = "
            << format_double(*std::max_element(rep.ratios.begin(), rep.ratios.end()))
            << "\n";
  return files;
}

// -------------------------------------------------------------- diagnose ---

BlockSequence parse_blocks(const std::string& name, int count) {
  if (name == "dyadic") return BlockSequence::dyadic(count);
  if (name == "super_dyadic") return BlockSequence::super_dyadic(count);
  if (name == "squared") return BlockSequence::squared(count);
  throw ConfigError("unknown block sequence '" + name + "'");
}

Files run_diagnose(double theta, const std::string& blocks_name, int M,
                   std::uint64_t seed) {
  // Covariance coefficients are the squared process coefficients.
  LacunarSpec process = LacunarSpec::theta_family(theta, 500);
  LacunarSpec kernel = LacunarSpec::theta_family(2.0 * theta, 500);
  LacunarSpec kernel_super = LacunarSpec::theta_family_super(2.0 * theta, 40);
  LacunarSpec process_super = LacunarSpec::theta_family_super(theta, 512);

  BlockSequence blocks = parse_blocks(blocks_name, 10);
  ContinuityReport sigma = sigma_e_series(kernel, blocks, 9);
  ContinuityReport fern = fernique_integral(kernel_super);
  LacunarCriteria crit = lacunar_criteria(process);
  TauProfile profile = tau_profile_lacunar(process_super, doubling_blocks(8), M, seed);

  json summary{{"theta", theta},
               {"blocks", blocks_name},
               {"sigma_e", to_string(sigma.verdict)},
               {"lacunar_4_7", to_string(crit.abs_sum.verdict)},
               {"lacunar_4_8", to_string(crit.tail_sum.verdict)},
               {"fernique", to_string(fern.verdict)},
               {"tau_profile", verdict_name(profile.verdict)}};
  Files files;
  files["diagnose_sigma_e.csv"] = report_csv(sigma);
  files["diagnose_fernique.csv"] = report_csv(fern);
  files["diagnose_verdicts.json"] = summary.dump(2) + "\n";
  std::cout << "diagnose: theta = " << theta << " -> sigma_e "
            << to_string(sigma.verdict) << ", 4.7 " << to_string(crit.abs_sum.verdict)
            << ", fernique " << to_string(fern.verdict) << ", tau "
            << verdict_name(profile.verdict) << "\n";
  return files;
}

Files run_u_closed_form(int grid_n) {
  Grid grid(two_pi, grid_n);
  std::vector<double> sig2s{0.25, 1.0, 4.0}, ns{16.0, 256.0};
  std::vector<double> c_sig, c_n, c_u, c_ref, c_rel;
  double worst = 0.0;
  for (double s2 : sig2s)
    for (double N : ns) {
      GridFunction v(grid, std::vector<double>(static_cast<size_t>(grid_n), s2));
      UResult u = u_functional(v, std::log(N));
      const double ref = std::sqrt(s2) * std::sqrt(2.0 * std::log(N));
      const double rel = std::abs(u.value - ref) / ref;
      worst = std::max(worst, rel);
      c_sig.push_back(s2);
      c_n.push_back(N);
      c_u.push_back(u.value);
      c_ref.push_back(ref);
      c_rel.push_back(rel);
    }
  json summary{{"max_relative_error", worst}, {"tolerance", 1e-6}, {"ok", worst <= 1e-6}};
  Files files;
  files["u_closed_form.csv"] =
      csv_table({"sigma2", "N", "u", "reference", "rel_err"}, {c_sig, c_n, c_u, c_ref, c_rel});
  files["u_summary.json"] = summary.dump(2) + "\n";
  std::cout << "u functional: max relative error vs closed form = "
            << format_double(worst) << "\n";
  return files;
}

// --------------------------------------------------------------- lacunar ---

Files run_lacunar(double theta, int count) {
  LacunarSpec process = LacunarSpec::theta_family(theta, count);
  LacunarCriteria crit = lacunar_criteria(process);
  WatanabeReport wat = watanabe_check(process);
  json summary{{"theta", theta},
               {"count", count},
               {"coefficient_sum", process.coefficient_sum()},
               {"abs_sum", report_json(crit.abs_sum)},
               {"tail_sum", report_json(crit.tail_sum)},
               {"watanabe", report_json(wat.series)}};
  Files files;
  files["lacunar_abs_sum.csv"] = report_csv(crit.abs_sum);
  files["lacunar_tail_sum.csv"] = report_csv(crit.tail_sum);
  files["lacunar_watanabe.csv"] = report_csv(wat.series);
  files["lacunar_summary.json"] = summary.dump(2) + "\n";
  std::cout << "lacunar: theta = " << theta << " -> |b_k| sum "
            << to_string(crit.abs_sum.verdict) << ", weighted tails "
            << to_string(crit.tail_sum.verdict) << "\n";
  return files;
}

// -------------------------------------------------------------- franklin ---

Files run_franklin(int m, int grid_n, int M, std::uint64_t seed) {
  KernelSpec spec = KernelSpec::brownian_bridge();
  Grid grid(spec.domain_end(), grid_n);
  FranklinBasis basis = franklin_basis(m, grid);
  Eigen::MatrixXd gram = gram_matrix(basis);
  const double gram_dev =
      (gram - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();

  MercerDecomposition md = nystrom_decompose(sample_grid(spec, grid));
  PathEnsemble ensemble = kl_simulate(md, md.n_kept(), M, seed);
  std::vector<double> js, means, ses;
  int max_j = 0;
  while ((2 << (max_j + 1)) <= m) ++max_j;
  for (int j = 1; j <= max_j; ++j) {
    BetaEstimate b = beta_estimate(ensemble, basis, 1 << j, 2 << j);
    js.push_back(j);
    means.push_back(b.mean);
    ses.push_back(b.std_error);
  }
  json summary{{"m", m},
               {"grid", grid_n},
               {"M", M},
               {"seed", seed},
               {"gram_deviation", gram_dev},
               {"beta_first", means.front()},
               {"beta_last", means.back()}};
  Files files;
  files["franklin_beta.csv"] = csv_table({"j", "beta_mean", "std_error"}, {js, means, ses});
  files["franklin_summary.json"] = summary.dump(2) + "\n";
  std::cout << "franklin: gram deviation = " << format_double(gram_dev)
            << ", beta " << format_double(means.front()) << " -> "
            << format_double(means.back()) << "\n";
  return files;
}

// ------------------------------------------------------------- sequences ---

Files run_sequences(int M, std::uint64_t seed) {
  SequenceSampler inv = seq_inverse_index(seed);
  SequenceSampler cst = seq_constant_normal(seed);
  SeqEstimate kappa_inv = kappa_gamma(inv, 200, 400, M, SeqMode::kappa);
  SeqEstimate kappa_cst = kappa_gamma(cst, 200, 400, M, SeqMode::kappa);
  SeqEstimate gamma_cst = kappa_gamma(cst, 200, 400, M, SeqMode::gamma);
  MonotoneSupReport mono_inv = monotone_sup_criterion(inv, 50, M);
  MonotoneSupReport mono_cst = monotone_sup_criterion(cst, 50, M);

  json summary{{"M", M},
               {"seed", seed},
               {"kappa_inverse_index", kappa_inv.mean},
               {"kappa_inverse_index_se", kappa_inv.std_error},
               {"kappa_constant", kappa_cst.mean},
               {"kappa_constant_se", kappa_cst.std_error},
               {"gamma_constant", gamma_cst.mean},
               {"monotone_inverse_decays", mono_inv.decays},
               {"monotone_constant_decays", mono_cst.decays}};
  Files files;
  std::vector<double> nv(mono_inv.n_values.begin(), mono_inv.n_values.end());
  files["sequences_eta_inverse.csv"] = csv_table({"n", "mean_eta"}, {nv, mono_inv.mean_eta});
  files["sequences_eta_constant.csv"] = csv_table({"n", "mean_eta"}, {nv, mono_cst.mean_eta});
  files["sequences_summary.json"] = summary.dump(2) + "\n";
  std::cout << "sequences: kappa(eta/n) = " << format_double(kappa_inv.mean)
            << ", kappa(const) = " << format_double(kappa_cst.mean)
            << ", gamma(const) = " << format_double(gamma_cst.mean) << "\n";
  return files;
}

// --------------------------------------------------------------- lemma61 ---

Files run_lemma61(int sweep, int max_degree, std::uint64_t seed) {
  std::vector<double> degs, sups, abs_meas, bounds;
  int violations = 0, signed_failures = 0;
  for (int t = 0; t < sweep; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    const int degree = 1 + static_cast<int>(rng.uniform() * max_degree) % max_degree;
    TrigPolynomial poly = random_trig_polynomial(degree, rng);
    Lemma61Report rep = lemma61_check(poly);
    degs.push_back(rep.degree);
    sups.push_back(rep.sup);
    abs_meas.push_back(rep.abs_measure);
    bounds.push_back(rep.bound);
    if (!rep.abs_ok) ++violations;
    if (!rep.signed_ok) ++signed_failures;
  }
  json summary{{"sweep", sweep},
               {"max_degree", max_degree},
               {"seed", seed},
               {"absolute_violations", violations},
               {"signed_failures", signed_failures}};
  Files files;
  files["lemma61_sweep.csv"] =
      csv_table({"degree", "sup", "abs_measure", "bound"}, {degs, sups, abs_meas, bounds});
  files["lemma61_summary.json"] = summary.dump(2) + "\n";
  std::cout << "lemma61: " << violations << " absolute-variant violations in "
            << sweep << " polynomials\n";
  return files;
}

// ------------------------------------------------------------------- lil ---

Files run_lil(int M, std::uint64_t seed) {
  std::vector<double> eps{1e-3, 1e-4, 1e-5, 1e-6};
  LilReport rep = lil_example(M, eps, seed);
  json summary{{"M", M},
               {"seed", seed},
               {"eps", rep.eps},
               {"mean_sup", rep.mean_sup},
               {"frac_sup_below_2.5", rep.frac_sup_below},
               {"median_range", rep.median_range},
               {"n_times", rep.n_times}};
  Files files;
  files["lil_profile.csv"] = csv_table({"eps", "mean_sup", "frac_below", "median_range"},
                                       {rep.eps, rep.mean_sup, rep.frac_sup_below,
                                        rep.median_range});
  files["lil_summary.json"] = summary.dump(2) + "\n";
  std::cout << "lil: mean sup at finest eps = " << format_double(rep.mean_sup.back())
            << ", fraction below 2.5 = " << format_double(rep.frac_sup_below.back())
            << "\n";
  return files;
}

// ------------------------------------------------------------- sharpness ---

Files run_sharpness(int nu_max, int count) {
  std::vector<double> a;
  for (int k = 1; k <= count; ++k) a.push_back(std::pow(4.0, -k));
  std::vector<LacunarGap> gaps(static_cast<size_t>(count - 1),
                               LacunarGap{std::log(5.0), {5u}});
  LacunarSpec kernel(std::move(a), 5, std::move(gaps));

  std::vector<double> nus, truncs, bests, refs;
  double worst = 0.0;
  for (int nu = 1; nu <= nu_max; ++nu) {
    double trunc = 0.0;  // sup of the truncation residual, attained at (0,0)
    for (int k = nu + 1; k <= count; ++k)
      trunc += kernel.coefficients()[static_cast<size_t>(k - 1)];
    const double best = best_error_sup_lacunar(kernel, 2.0 * std::pow(5.0, nu));
    const double ref = std::pow(4.0, -nu) / 3.0;
    nus.push_back(nu);
    truncs.push_back(trunc);
    bests.push_back(best);
    refs.push_back(ref);
    worst = std::max({worst, std::abs(trunc - ref), std::abs(best - ref)});
  }
  json summary{{"nu_max", nu_max}, {"terms", count}, {"max_abs_deviation", worst}};
  Files files;
  files["sharpness.csv"] = csv_table({"nu", "truncation_error", "best_error", "reference"},
                                     {nus, truncs, bests, refs});
  files["sharpness_summary.json"] = summary.dump(2) + "\n";
  std::cout << "sharpness: max deviation from 4^-nu/3 = " << format_double(worst) << "\n";
  return files;
}

// ----------------------------------------------------------- determinism ---

Files run_determinism(std::uint64_t seed) {
  Files a = run_sequences(200, seed);
  Files b = run_sequences(200, seed);
  Files c = run_lemma61(50, 8, seed);
  Files d = run_lemma61(50, 8, seed);
  const bool identical = a == b && c == d;
  json summary{{"seed", seed}, {"byte_identical", identical}};
  Files files;
  files["determinism_summary.json"] = summary.dump(2) + "\n";
  std::cout << "determinism: payload reruns byte-identical = "
            << (identical ? "true" : "false") << "\n";
  return files;
}

// ------------------------------------------------------------- plumbing ----

struct Experiment {
  std::string name;
  std::string description;
  std::function<Files(std::uint64_t seed)> runner;
};

std::vector<Experiment> experiment_registry() {
  return {
      {"mercer-recovery", "eigenvalues of the Brownian bridge kernel vs 1/(k pi)^2",
       [](std::uint64_t) { return run_mercer("brownian_bridge", 2048); }},
      {"degenerate-inequality",
       "rank-(2n1,2n2) truncated-SVD error vs best L2 error at (n1,n2), 6 kernels",
       [](std::uint64_t) { return run_degapprox(256, 8); }},
      {"sharpness", "lacunary kernel a_k=4^-k: truncation and best errors equal 4^-nu/3",
       [](std::uint64_t) { return run_sharpness(5, 30); }},
      {"tau-threshold", "block sup semi-norm profile of the lacunary theta family",
       [](std::uint64_t seed) {
         Files f = run_tau(1.5, 8, 2000, seed);
         Files g = run_tau(0.75, 8, 2000, seed);
         for (auto& [k, v] : g) f["theta075_" + k] = v;
         return f;
       }},
      {"lemma61-sweep", "level-set measure >= 1/(2n) for 1000 random polynomials",
       [](std::uint64_t seed) { return run_lemma61(1000, 32, seed); }},
      {"moment-growth", "sup-norm moment ratios of the Brownian bridge ensemble",
       [](std::uint64_t seed) { return run_moments(512, 4000, seed); }},
      {"criterion-concordance",
       "entropy series, coefficient sum, Fernique integral and tau profile verdicts",
       [](std::uint64_t seed) {
         Files f = run_diagnose(1.5, "super_dyadic", 400, seed);
         Files g = run_diagnose(0.75, "super_dyadic", 400, seed);
         for (auto& [k, v] : g) f["theta075_" + k] = v;
         return f;
       }},
      {"u-closed-form", "exponential-moment functional vs sigma sqrt(2 log N)",
       [](std::uint64_t) { return run_u_closed_form(1024); }},
      {"franklin-beta", "orthonormality and block-reconstruction decay of the hat system",
       [](std::uint64_t seed) { return run_franklin(64, 1024, 500, seed); }},
      {"sequence-criteria", "arctan sup functionals for decaying and constant sequences",
       [](std::uint64_t seed) { return run_sequences(4000, seed); }},
      {"determinism", "reruns of seeded experiments produce byte-identical payloads",
       [](std::uint64_t seed) { return run_determinism(seed); }},
      {"vp-consistency", "coefficient-space block averages vs direct kernel convolution",
       [](std::uint64_t seed) { return run_vpsum(1024, 32, 50, seed); }},
  };
}

void write_outputs(const std::string& out_dir, const std::string& experiment,
                   const std::string& config_text, const Files& files) {
  std::filesystem::create_directories(out_dir);
  json manifest;
  manifest["experiment"] = experiment;
  manifest["config_hash"] = fnv1a_hash(config_text);
  std::vector<std::string> names;
  for (const auto& [name, content] : files) {
    write_text_file(out_dir + "/" + name, content);
    names.push_back(name);
  }
  manifest["artifacts"] = names;
  manifest["generated_at"] = static_cast<long long>(std::time(nullptr));
  write_text_file(out_dir + "/manifest_" + experiment + ".json",
                  manifest.dump(2) + "\n");
}

const std::set<std::string> kConfigKeys{"experiment", "seed", "out_dir"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degenerate kernel approximation and path-continuity experiments"};
  app.require_subcommand(1);

  std::string out_dir = out_dir_default();
  std::uint64_t seed = kDefaultSeed;
  app.add_option("--out", out_dir, "output directory (default $KPATH_OUTPUT_DIR or .)");
  app.add_option("--seed", seed, "random seed");

  // mercer
  auto* c_mercer = app.add_subcommand("mercer", "kernel eigendecomposition");
  std::string kernel_name = "brownian_bridge";
  int grid_n = 2048;
  c_mercer->add_option("--kernel", kernel_name, "kernel name");
  c_mercer->add_option("--grid", grid_n, "grid size (power of two)");

  auto* c_deg = app.add_subcommand("degapprox", "low-rank vs best-error inequality table");
  int deg_grid = 256, max_rank = 8;
  c_deg->add_option("--grid", deg_grid, "grid size");
  c_deg->add_option("--max-rank", max_rank, "largest (n1,n2)");

  auto* c_vp = app.add_subcommand("vpsum", "block-average consistency checks");
  int vp_grid = 1024, vp_degree = 32, vp_trials = 50;
  c_vp->add_option("--grid", vp_grid, "grid size");
  c_vp->add_option("--degree", vp_degree, "block degree n");
  c_vp->add_option("--trials", vp_trials, "random inputs");

  auto* c_tau = app.add_subcommand("tau", "block sup semi-norm profile / moment growth");
  double tau_theta = 1.5;
  int tau_blocks = 8, tau_M = 2000;
  std::string tau_mode = "profile";
  c_tau->add_option("--theta", tau_theta, "lacunary decay exponent");
  c_tau->add_option("--blocks", tau_blocks, "number of doubling blocks");
  c_tau->add_option("--M", tau_M, "Monte Carlo samples");
  c_tau->add_option("--mode", tau_mode, "profile | moments");

  auto* c_diag = app.add_subcommand("diagnose", "continuity criteria verdicts");
  double diag_theta = 1.5;
  std::string diag_blocks = "super_dyadic", diag_mode = "criteria";
  int diag_M = 400;
  c_diag->add_option("--lacunar-theta", diag_theta, "lacunary decay exponent");
  c_diag->add_option("--blocks", diag_blocks, "dyadic | super_dyadic | squared");
  c_diag->add_option("--M", diag_M, "Monte Carlo samples for the tau profile");
  c_diag->add_option("--mode", diag_mode, "criteria | u-closed-form");

  auto* c_lac = app.add_subcommand("lacunar", "lacunary coefficient criteria");
  double lac_theta = 1.5;
  int lac_count = 400;
  c_lac->add_option("--theta", lac_theta, "decay exponent");
  c_lac->add_option("--count", lac_count, "number of terms");

  auto* c_fr = app.add_subcommand("franklin", "orthonormal hat system and beta profile");
  int fr_m = 64, fr_grid = 1024, fr_M = 500;
  c_fr->add_option("--m", fr_m, "basis size");
  c_fr->add_option("--grid", fr_grid, "grid size");
  c_fr->add_option("--M", fr_M, "ensemble size");

  auto* c_seq = app.add_subcommand("sequences", "sequence convergence functionals");
  int seq_M = 4000;
  c_seq->add_option("--M", seq_M, "Monte Carlo samples");

  auto* c_l61 = app.add_subcommand("lemma61", "level-set measure sweep");
  int l61_sweep = 1000, l61_degree = 32;
  c_l61->add_option("--sweep", l61_sweep, "number of random polynomials");
  c_l61->add_option("--max-degree", l61_degree, "maximum degree");

  auto* c_lil = app.add_subcommand("lil", "bounded-but-oscillating example near zero");
  int lil_M = 2000;
  c_lil->add_option("--M", lil_M, "number of paths");

  auto* c_sharp = app.add_subcommand("sharpness", "exact lacunary error identity");
  int sharp_nu = 5, sharp_count = 30;
  c_sharp->add_option("--nu-max", sharp_nu, "largest truncation rank");
  c_sharp->add_option("--count", sharp_count, "kernel terms");

  auto* c_run = app.add_subcommand("run", "run a named experiment");
  std::string run_name, run_config;
  c_run->add_option("--experiment", run_name, "experiment name (see `list`)");
  c_run->add_option("--config", run_config, "key-value config file");

  auto* c_list = app.add_subcommand("list", "list the named experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Files files;
    std::string experiment;
    std::string config_text;

    if (c_list->parsed()) {
      auto reg = experiment_registry();
      for (const auto& e : reg)
        std::cout << e.name << " - " << e.description << "\n";
      std::cout << reg.size() << " experiments\n";
      return 0;
    }
    if (c_run->parsed()) {
      if (!run_config.empty()) {
        Config cfg = Config::load(run_config, kConfigKeys);
        run_name = cfg.require("experiment");
        seed = cfg.get_u64("seed", seed);
        out_dir = cfg.get("out_dir", out_dir);
        config_text = read_text_file(run_config);
      }
      if (run_name.empty()) throw ConfigError("run: --experiment or --config required");
      auto reg = experiment_registry();
      auto it = std::find_if(reg.begin(), reg.end(),
                             [&](const Experiment& e) { return e.name == run_name; });
      if (it == reg.end()) throw ConfigError("unknown experiment '" + run_name + "'");
      if (config_text.empty())
        config_text = "experiment = " + run_name + "\nseed = " + std::to_string(seed) + "\n";
      experiment = run_name;
      files = it->runner(seed);
    } else if (c_mercer->parsed()) {
      experiment = "mercer";
      files = run_mercer(kernel_name, grid_n);
    } else if (c_deg->parsed()) {
      experiment = "degapprox";
      files = run_degapprox(deg_grid, max_rank);
    } else if (c_vp->parsed()) {
      experiment = "vpsum";
      files = run_vpsum(vp_grid, vp_degree, vp_trials, seed);
    } else if (c_tau->parsed()) {
      experiment = "tau";
      files = tau_mode == "moments" ? run_moments(512, tau_M, seed)
                                    : run_tau(tau_theta, tau_blocks, tau_M, seed);
    } else if (c_diag->parsed()) {
      experiment = "diagnose";
      files = diag_mode == "u-closed-form"
                  ? run_u_closed_form(1024)
                  : run_diagnose(diag_theta, diag_blocks, diag_M, seed);
    } else if (c_lac->parsed()) {
      experiment = "lacunar";
      files = run_lacunar(lac_theta, lac_count);
    } else if (c_fr->parsed()) {
      experiment = "franklin";
      files = run_franklin(fr_m, fr_grid, fr_M, seed);
    } else if (c_seq->parsed()) {
      experiment = "sequences";
      files = run_sequences(seq_M, seed);
    } else if (c_l61->parsed()) {
      experiment = "lemma61";
      files = run_lemma61(l61_sweep, l61_degree, seed);
    } else if (c_lil->parsed()) {
      experiment = "lil";
      files = run_lil(lil_M, seed);
    } else if (c_sharp->parsed()) {
      experiment = "sharpness";
      files = run_sharpness(sharp_nu, sharp_count);
    }

    if (config_text.empty())
      config_text = "experiment = " + experiment + "\nseed = " + std::to_string(seed) + "\n";
    write_outputs(out_dir, experiment, config_text, files);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  }
}

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <exception>
#include <utility>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "gridbie/errors.hpp"
#include "gridbie/harness.hpp"
#include "gridbie/random.hpp"

namespace gridbie {

namespace {

constexpr double kGreenTol = 1e-11;
constexpr double kSelfAdjointTol = 1e-8;
constexpr double kSpectrumSlack = 1e-8;
constexpr double kRoundOff = 1e-12;
constexpr double kRatioBand = 1.5;
constexpr double kContractionBand = 0.15;
constexpr double kStabilityBand = 2.0;
constexpr double kNorm2Spread = 0.2;

struct Instance {
  DomainSpec spec;
  ImplicitDomain domain;
  int n;
  GridGeometry g;
  std::string label;
};

std::vector<DomainSpec> domains_for(const StudyConfig& cfg) {
  if (!cfg.suite_domains.empty()) return cfg.suite_domains;
  DomainSpec circle;
  circle.family = "circle";
  circle.params["radius"] = 0.7;
  DomainSpec star;
  star.family = "star";
  return {circle, star};
}

std::vector<int> resolutions_for(const StudyConfig& cfg, std::vector<int> defaults) {
  return cfg.suite_resolutions.empty() ? defaults : cfg.suite_resolutions;
}

std::string label(const ImplicitDomain& d, int n) {
  return d.name + " n=" + std::to_string(n);
}

Instance make_instance(const DomainSpec& spec, int n, double delta) {
  auto domain = spec.build();
  auto g = GridGeometry::build(domain, n, delta);
  return {spec, domain, n, std::move(g), label(domain, n)};
}

CgOptions cg_options(const StudyConfig& cfg) {
  CgOptions o;
  o.tol = cfg.solve.cg_tol;
  return o;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// max / min of positive values.
double band(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

// Runs `body` for every suite geometry and resolution, recording stage
// failures as failed checks so the remaining instances still run.
void for_each_instance(const StudyConfig& cfg, Report& rep, const std::string& suite,
                       const std::vector<int>& ns,
                       const std::function<void(const Instance&)>& body) {
  for (const auto& spec : domains_for(cfg)) {
    for (int n : ns) {
      try {
        body(make_instance(spec, n, cfg.solve.delta));
      } catch (const std::exception& e) {
        rep.add_check(suite + ".error[" + label(spec.build(), n) + "]", false, 0.0, 0.0, e.what());
      }
    }
  }
}

// Energy form with free extension values: graph Laplacian over the uncut
// edges of one side. Minus-side box-boundary points are eliminated as zeros.
kernels::CsrMatrix side_laplacian(const GridGeometry& g, Side side, std::vector<int>& slot) {
  const auto& pts = is_plus(side) ? g.plus_points() : g.minus_points();
  slot.assign(g.num_points(), -1);
  for (std::size_t i = 0; i < pts.size(); ++i) slot[pts[i]] = static_cast<int>(i);
  const int n = static_cast<int>(pts.size());
  kernels::CsrBuilder b(n, n);
  for (const auto& e : is_plus(side) ? g.plus_edges() : g.minus_edges()) {
    const int a = slot[e.lower], c = slot[e.upper];
    if (a >= 0) b.add(a, a, 1.0);
    if (c >= 0) b.add(c, c, 1.0);
    if (a >= 0 && c >= 0) {
      b.add(a, c, -1.0);
      b.add(c, a, -1.0);
    }
  }
  return b.build();
}

/// Smallest eigenvalue of an SPD matrix by inverse iteration; with
/// `mean_zero` the iteration runs on the complement of the constants.
double smallest_eigenvalue(const kernels::CsrMatrix& k, bool mean_zero, const CgOptions& cg,
                           Rng& rng) {
  const int n = k.rows;
  std::vector<double> x(n), kx(n);
  auto project = [&](std::vector<double>& v) {
    if (!mean_zero) return;
    double mean = 0.0;
    for (double t : v) mean += t;
    mean /= n;
    for (double& t : v) t -= mean;
  };
  auto normalize = [&](std::vector<double>& v) {
    const double s = norm2(v);
    for (double& t : v) t /= s;
  };
  for (double& t : x) t = rng.symmetric();
  project(x);
  normalize(x);
  double lambda = 0.0;
  for (int it = 0; it < 300; ++it) {
    auto y = cg_solve(k, x, cg, x).x;
    project(y);
    normalize(y);
    x = std::move(y);
    kernels::serial::spmv(k, x, kx);
    const double next = kernels::serial::dot(x, kx);
    if (it > 0 && std::abs(next - lambda) <= 1e-9 * next) return next;
    lambda = next;
  }
  return lambda;
}

// ---------------------------------------------------------------------------

void suite_green(const StudyConfig& cfg, Report& rep) {
  Rng rng(cfg.seed);
  Table t{"green", {"n", "side", "max_relative_residual"}, {}};
  for_each_instance(cfg, rep, "green", resolutions_for(cfg, {24, 40}), [&](const Instance& in) {
    for (Side side : {Side::plus, Side::minus}) {
      double worst = 0.0;
      for (int k = 0; k < cfg.samples; ++k) {
        const auto u = random_field(in.g, side, rng);
        const auto v = random_field(in.g, side, rng);
        worst = std::max(worst, green_residual(in.g, u, v));
      }
      const std::string s = is_plus(side) ? "plus" : "minus";
      rep.add_check("green." + s + "[" + in.label + "]", worst <= kGreenTol, worst, kGreenTol);
      t.rows.push_back({double(in.n), is_plus(side) ? 1.0 : 0.0, worst});
    }
    auto c = ExtendedField::zeros(in.g, Side::plus);
    for (int p : in.g.plus_points()) c.values[p] = 2.5;
    std::fill(c.ext.begin(), c.ext.end(), 2.5);
    const double r = green_residual(in.g, c, random_field(in.g, Side::plus, rng));
    rep.add_check("green.constant_plus[" + in.label + "]", r <= kRoundOff, r, kRoundOff);
  });
  rep.tables.push_back(std::move(t));
}

void suite_minimization(const StudyConfig& cfg, Report& rep) {
  Rng rng(cfg.seed);
  const double slack = 10.0 * cfg.solve.cg_tol;
  const int traces = std::max(1, cfg.samples / 2);
  for_each_instance(cfg, rep, "minimization", resolutions_for(cfg, {24, 32}), [&](const Instance& in) {
    for (Side side : {Side::plus, Side::minus}) {
      SingleLayerSolver solver(in.g, side, cg_options(cfg));
      const auto& pts = is_plus(side) ? in.g.plus_points() : in.g.minus_points();
      double worst_gap = std::numeric_limits<double>::infinity();
      double worst_trace = 0.0;
      for (int i = 0; i < traces; ++i) {
        const auto psi = random_interval_fn(in.g, rng);
        const auto v = solver.solve(psi);
        worst_trace = std::max(worst_trace, max_abs_diff(trace(in.g, v).values, psi.values));
        const double ev = inner(in.g, v, v);
        for (int j = 0; j < cfg.samples; ++j) {
          const double scale = std::pow(10.0, -2.0 * (j % 4));
          auto values = v.values;
          for (int p : pts) values[p] += scale * rng.symmetric();
          const auto z = lift_from_trace(in.g, std::move(values), psi, side);
          worst_gap = std::min(worst_gap, inner(in.g, z, z) - ev);
        }
      }
      const std::string s = is_plus(side) ? "plus" : "minus";
      rep.add_check("minimization." + s + "[" + in.label + "]", worst_gap >= -slack, worst_gap,
                    -slack, "min over competitors of <z,z> - <Spsi,Spsi>");
      rep.add_check("minimization.trace_" + s + "[" + in.label + "]", worst_trace <= kRoundOff,
                    worst_trace, kRoundOff);
    }
  });
}

void suite_identities(const StudyConfig& cfg, Report& rep) {
  Rng rng(cfg.seed);
  const double tol = 10.0 * cfg.solve.cg_tol;
  const int samples = std::max(1, cfg.samples / 2);
  for_each_instance(cfg, rep, "identities", resolutions_for(cfg, {24, 32}), [&](const Instance& in) {
    const auto& g = in.g;
    LayerOperators ops(g, cg_options(cfg));
    double w_split = 0, w_pair = 0, w_energy = 0, w_lap = 0, w_jump = 0, w_diff = 0, w_box = 0;
    double w_adj = 0, w_220 = 0, w_sym = 0, w_swap = 0, w_bound = -1e300;
    for (int k = 0; k < samples; ++k) {
      const auto phi = random_interval_fn(g, rng);
      const auto zeta = random_interval_fn(g, rng);

      const auto a = ops.apply_calA(phi), b = ops.apply_calB(phi);
      for (std::size_t i = 0; i < phi.size(); ++i)
        w_split = std::max(w_split, std::abs(a[i] - phi[i] - b[i]));

      // Bilinear forms are compared on the Cauchy-Schwarz scale.
      const double cs = std::max(1.0, ops.sl_norm(phi) * ops.sl_norm(zeta));
      const double sl = ops.sl_inner(phi, zeta), bd = ops.sl_inner_boundary(phi, zeta);
      w_pair = std::max(w_pair, std::abs(sl - bd) / cs);
      w_sym = std::max(w_sym, std::abs(sl - ops.sl_inner(zeta, phi)) / std::max(1.0, std::abs(sl)));
      const auto layers = ops.single_layers(phi);
      const auto zl = ops.single_layers(zeta);
      const double j1 = jump_pairing(g, layers.plus, layers.minus, zeta);
      const double j2 = jump_pairing(g, zl.plus, zl.minus, phi);
      w_swap = std::max(w_swap, std::abs(j1 - j2) / cs);

      const auto sol = ops.double_layer(phi);
      double flux = 0.0;
      for (int c = 0; c < g.num_cuts(); ++c)
        flux += cut_difference(g, sol.plus, c) * phi[c] * g.cuts()[c].chi_jump() / g.h();
      flux *= g.cell_volume();
      const double ep = inner(g, sol.plus, sol.plus), em = inner(g, sol.minus, sol.minus);
      w_energy = std::max(w_energy, std::abs(ep + em + flux) / std::max(1.0, ep + em));

      const double h2 = g.h() * g.h();
      const double rhs_scale = std::max(1.0, norm2(phi.values));
      w_lap = std::max(w_lap, h2 * max_abs(laplacian(g, sol.plus)) / rhs_scale);
      w_lap = std::max(w_lap, h2 * max_abs(laplacian(g, sol.minus)) / rhs_scale);
      const auto tp = trace(g, sol.plus), tm = trace(g, sol.minus);
      for (int c = 0; c < g.num_cuts(); ++c) {
        w_jump = std::max(w_jump, std::abs(tp[c] - tm[c] - phi[c]));
        const double dp = cut_difference(g, sol.plus, c), dm = cut_difference(g, sol.minus, c);
        w_diff = std::max(w_diff, std::abs(dp - dm) / std::max(1.0, std::abs(dp)));
      }
      for (int p = 0; p < g.num_points(); ++p)
        if (g.on_box_boundary(p)) w_box = std::max(w_box, std::abs(sol.minus.values[p]));

      const auto bphi = ops.apply_calB(phi), bzeta = ops.apply_calB(zeta);
      const double scale = std::max(1.0, ops.sl_norm(phi) * ops.sl_norm(zeta));
      const double lhs = ops.sl_inner(bphi, zeta);
      w_adj = std::max(w_adj, std::abs(lhs - ops.sl_inner(phi, bzeta)) / scale);
      w_220 = std::max(w_220, std::abs(lhs + inner(g, layers.plus, zl.plus)) / scale);

      const auto f = random_crossing_fn(g, rng);
      w_bound = std::max(w_bound, ops.norm2(ops.apply_Ah(f)) - 2.0 * ops.norm1(f));
    }
    const std::string l = "[" + in.label + "]";
    rep.add_check("identities.calA_minus_calB" + l, w_split <= kRoundOff, w_split, kRoundOff);
    rep.add_check("identities.sl_inner_vs_boundary_form" + l, w_pair <= tol, w_pair, tol);
    rep.add_check("identities.sl_inner_symmetric" + l, w_sym <= 1e-10, w_sym, 1e-10);
    rep.add_check("identities.jump_pairing_swap" + l, w_swap <= tol, w_swap, tol);
    rep.add_check("identities.double_layer_energy" + l, w_energy <= tol, w_energy, tol);
    rep.add_check("identities.double_layer_harmonic" + l, w_lap <= tol, w_lap, tol);
    rep.add_check("identities.double_layer_trace_jump" + l, w_jump <= kRoundOff, w_jump, kRoundOff);
    rep.add_check("identities.double_layer_difference_match" + l, w_diff <= kRoundOff, w_diff,
                  kRoundOff);
    rep.add_check("identities.double_layer_box_zero" + l, w_box == 0.0, w_box, 0.0);
    rep.add_check("identities.calB_self_adjoint" + l, w_adj <= kSelfAdjointTol, w_adj,
                  kSelfAdjointTol);
    rep.add_check("identities.calB_plus_energy" + l, w_220 <= tol, w_220, tol);
    rep.add_check("identities.norm2_Ah_bounded" + l, w_bound <= tol, w_bound, tol,
                  "max of ||Ah phi||_2 - 2 ||phi||_1");

    const IntervalFn ones(g.num_cuts(), 1.0);
    const double ca = max_abs_diff(ops.apply_calA(ones).values, ones.values);
    const double cb = max_abs(ops.apply_calB(ones).values);
    const CrossingFn cones(g.num_crossings(), 1.0);
    const double cah = max_abs_diff(ops.apply_Ah(cones).values, cones.values);
    rep.add_check("identities.calA_constant" + l, ca <= tol, ca, tol);
    rep.add_check("identities.calB_constant" + l, cb <= tol, cb, tol);
    rep.add_check("identities.Ah_constant" + l, cah <= tol, cah, tol);
  });
}

void suite_spectrum(const StudyConfig& cfg, Report& rep) {
  Rng rng(cfg.seed);
  const double tol = 10.0 * cfg.solve.cg_tol;
  Table t{"spectrum", {"n", "r_hat", "max_eig_calB", "self_adjoint_defect", "min_eig_Ah",
                       "max_eig_Ah", "max_imag_Ah"}, {}};
  for (const auto& spec : domains_for(cfg)) {
    std::vector<double> rhats;
    for (int n : resolutions_for(cfg, {16, 32})) {
      const std::string l = "[" + label(spec.build(), n) + "]";
      try {
        const auto in = make_instance(spec, n, cfg.solve.delta);
        LayerOperators ops(in.g, cg_options(cfg));
        const auto s = spectrum(ops, cfg.solve.dense_cap);
        rhats.push_back(s.r_hat);
        const double bmax = s.calB.back(), bmin = s.calB.front();
        rep.add_check("spectrum.self_adjoint" + l, s.self_adjoint_defect <= kSelfAdjointTol,
                      s.self_adjoint_defect, kSelfAdjointTol);
        rep.add_check("spectrum.calB_upper" + l, bmax <= kSpectrumSlack, bmax, kSpectrumSlack);
        rep.add_check("spectrum.calB_lower" + l, bmin >= -s.r_hat, bmin, -s.r_hat);
        rep.add_check("spectrum.r_hat_below_one" + l, s.r_hat < 1.0, s.r_hat, 1.0);
        rep.add_check("spectrum.calA_range" + l,
                      s.calA.front() >= 1.0 - s.r_hat - kRoundOff &&
                          s.calA.back() <= 1.0 + kSpectrumSlack,
                      s.calA.back(), 1.0 + kSpectrumSlack);

        const IntervalFn ones(in.g.num_cuts(), 1.0);
        const double dev = max_abs_diff(ops.apply_calA(ones).values, ones.values);
        rep.add_check("spectrum.constant_eigenvector" + l, dev <= tol, dev, tol);

        // Dense entries against matrix-free evaluation.
        double w_gram = 0.0, w_col = 0.0;
        for (int k = 0; k < 3; ++k) {
          const int i = static_cast<int>(rng.unit() * in.g.num_cuts());
          const int j = static_cast<int>(rng.unit() * in.g.num_cuts());
          IntervalFn ei(in.g.num_cuts()), ej(in.g.num_cuts());
          ei[i] = 1.0;
          ej[j] = 1.0;
          w_gram = std::max(w_gram, std::abs(s.gram(i, j) - ops.sl_inner(ei, ej)) /
                                        std::max(1.0, std::abs(s.gram(i, i))));
          const auto col = ops.apply_calB(ej);
          for (int r = 0; r < in.g.num_cuts(); ++r)
            w_col = std::max(w_col, std::abs(s.calB_matrix(r, j) - col[r]));
        }
        rep.add_check("spectrum.gram_entries" + l, w_gram <= 1e-10, w_gram, 1e-10);
        rep.add_check("spectrum.dense_calB_columns" + l, w_col <= kRoundOff, w_col, kRoundOff);

        double w_contract = -1e300;
        for (int k = 0; k < cfg.samples / 4 + 1; ++k) {
          const auto phi = random_interval_fn(in.g, rng);
          w_contract = std::max(w_contract, ops.sl_norm(ops.apply_calB(phi)) /
                                                (s.r_hat * ops.sl_norm(phi)));
        }
        rep.add_check("spectrum.calB_contraction" + l, w_contract <= 1.0 + 1e-6, w_contract,
                      1.0 + 1e-6, "max ||B phi|| / (r_hat ||phi||)");

        const auto ah = ops.assemble_dense(OperatorTag::Ah, cfg.solve.dense_cap);
        const auto ev = general_eigenvalues(ah);
        double imag = 0.0, lo = 1e300, hi = -1e300;
        for (int i = 0; i < ev.size(); ++i) {
          imag = std::max(imag, std::abs(ev[i].imag()));
          lo = std::min(lo, ev[i].real());
          hi = std::max(hi, ev[i].real());
        }
        rep.add_check("spectrum.Ah_real" + l, imag <= kSpectrumSlack, imag, kSpectrumSlack);
        rep.add_check("spectrum.Ah_range" + l, lo > 0.0 && hi <= 1.0 + kSpectrumSlack, lo, 0.0,
                      "min eig " + fmt(lo) + ", max eig " + fmt(hi));
        t.rows.push_back({double(n), s.r_hat, bmax, s.self_adjoint_defect, lo, hi, imag});
      } catch (const std::exception& e) {
        rep.add_check("spectrum.error" + l, false, 0.0, 0.0, e.what());
      }
    }
    if (rhats.size() >= 2) {
      const double ratio = band(rhats);
      rep.add_check("spectrum.r_hat_stable[" + spec.build().name + "]", ratio <= kRatioBand, ratio,
                    kRatioBand);
    }
  }
  rep.tables.push_back(std::move(t));
}

void suite_contraction(const StudyConfig& cfg, Report& rep) {
  Rng rng(cfg.seed);
  Table t{"contraction", {"n", "measured_rate", "r_hat", "one_minus_min_eig_Ah", "evaluations"}, {}};
  for_each_instance(cfg, rep, "contraction", resolutions_for(cfg, {16, 32}), [&](const Instance& in) {
    const std::string l = "[" + in.label + "]";
    LayerOperators ops(in.g, cg_options(cfg));
    const auto f = random_crossing_fn(in.g, rng);
    SolveConfig sc = cfg.solve;
    sc.method = Method::fixed_point;
    SolveReport fp;
    bool converged = true;
    try {
      fp = solve_dirichlet(ops, f, sc);
    } catch (const SolverError& e) {
      converged = false;
      fp.residual_history = e.history();
    }
    const auto rate = measure_contraction(fp);
    const auto s = spectrum(ops, cfg.solve.dense_cap);
    const auto ev = general_eigenvalues(ops.assemble_dense(OperatorTag::Ah, cfg.solve.dense_cap));
    double lmin = 1e300;
    for (int i = 0; i < ev.size(); ++i) lmin = std::min(lmin, ev[i].real());
    const double r = rate.value_or(std::nan(""));
    rep.add_check("contraction.rate_below_one" + l, rate && r < 1.0, r, 1.0);
    rep.add_check("contraction.rate_vs_r_hat" + l, rate && std::abs(r - s.r_hat) <= kContractionBand,
                  r - s.r_hat, kContractionBand,
                  "rate " + fmt(r) + ", r_hat " + fmt(s.r_hat) + ", 1 - min eig(Ah) " +
                      fmt(1.0 - lmin));
    t.rows.push_back({double(in.n), r, s.r_hat, 1.0 - lmin, double(fp.residual_history.size())});

    sc.method = Method::dense_direct;
    const auto direct = solve_dirichlet(ops, f, sc);
    sc.method = Method::gmres;
    const auto krylov = solve_dirichlet(ops, f, sc);
    // Density errors are residuals amplified by 1 / min eig(Ah).
    const double tol = 10.0 * cfg.solve.fp_tol / lmin;
    const double dk = max_abs_diff(krylov.density.values, direct.density.values);
    rep.add_check("contraction.gmres_vs_dense" + l, dk <= tol, dk, tol);
    if (converged) {
      const double df = max_abs_diff(fp.density.values, direct.density.values);
      rep.add_check("contraction.fixed_point_vs_dense" + l, df <= tol, df, tol);
    }

    sc.method = Method::fixed_point;
    const CrossingFn c(in.g.num_crossings(), -0.75);
    const auto cr = solve_dirichlet(ops, c, sc);
    rep.add_check("contraction.constant_data" + l, cr.evaluations <= 2 && !cr.contraction,
                  cr.evaluations, 2.0, "contraction not applicable");
  });
  rep.tables.push_back(std::move(t));
}

/// Sharp constants of the single-layer extension: the largest ratio of plus to
/// minus energy, and of the minus energy of the mean-shifted density to the
/// plus energy. Both are generalized eigenvalues of assembled energy matrices.
std::pair<double, double> extension_constants(const LayerOperators& ops, int cap) {
  const auto& g = ops.geometry();
  const int m = g.num_cuts();
  const Eigen::MatrixXd ep = ops.assemble_energy(Side::plus, cap);
  const Eigen::MatrixXd em = ops.assemble_energy(Side::minus, cap);
  Eigen::VectorXd w(m);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < m; ++j) {
    try {
      IntervalFn e(m);
      e[j] = 1.0;
      const auto v = ops.single_layer(e, Side::plus);
      double sum = 0.0;
      for (int p : g.plus_points()) sum += v.values[p];
      w[j] = sum / static_cast<double>(g.plus_points().size());
    } catch (...) {
#pragma omp critical(gridbie_assembly_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  const Eigen::VectorXd u = em * Eigen::VectorXd::Ones(m);
  const double m11 = u.sum();
  Eigen::MatrixXd shifted = em - u * w.transpose() - w * u.transpose() + m11 * w * w.transpose();
  shifted = 0.5 * (shifted + shifted.transpose()).eval();
  const auto top = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw OperatorError("extension: generalized eigensolver failed");
    return es.eigenvalues().maxCoeff();
  };
  return {top(ep, em), top(shifted, ep)};
}

void suite_extension(const StudyConfig& cfg, Report& rep) {
  Table t{"extension", {"n", "C1_plus_over_minus", "C1_minus_over_plus"}, {}};
  for (const auto& spec : domains_for(cfg)) {
    std::vector<double> forward, backward;
    for (int n : resolutions_for(cfg, {32, 64, 128})) {
      const std::string l = "[" + label(spec.build(), n) + "]";
      try {
        const auto in = make_instance(spec, n, cfg.solve.delta);
        LayerOperators ops(in.g, cg_options(cfg));
        const auto c = extension_constants(ops, cfg.solve.dense_cap);
        const double c1 = c.first, c2 = c.second;
        forward.push_back(c1);
        backward.push_back(c2);
        t.rows.push_back({double(n), c1, c2});
      } catch (const std::exception& e) {
        rep.add_check("extension.error" + l, false, 0.0, 0.0, e.what());
      }
    }
    const std::string d = "[" + spec.build().name + "]";
    if (forward.size() >= 2) {
      rep.add_check("extension.C1_plus_over_minus_stable" + d, band(forward) <= kStabilityBand,
                    band(forward), kStabilityBand);
      rep.add_check("extension.C1_minus_over_plus_stable" + d, band(backward) <= kStabilityBand,
                    band(backward), kStabilityBand);
    }
  }
  rep.tables.push_back(std::move(t));
}

void suite_poincare(const StudyConfig& cfg, Report& rep) {
  Rng rng(cfg.seed);
  Table t{"poincare", {"n", "plus_zero_trace", "plus_mean_zero", "minus_box_zero"}, {}};
  const char* names[3] = {"plus_zero_trace", "plus_mean_zero", "minus_box_zero"};
  for (const auto& spec : domains_for(cfg)) {
    std::vector<double> series[3];
    for (int n : resolutions_for(cfg, {32, 64, 128})) {
      const std::string l = "[" + label(spec.build(), n) + "]";
      try {
        const auto in = make_instance(spec, n, cfg.solve.delta);
        const double h2 = in.g.h() * in.g.h();
        CgOptions cg = cg_options(cfg);
        // Ratios sum u^2 h^d / <u,u> are h^2 / lambda for the matrices below.
        SingleLayerSolver plus(in.g, Side::plus, cg);
        std::vector<int> slot;
        const double a = h2 / smallest_eigenvalue(plus.matrix(), false, cg, rng);
        const double b = h2 / smallest_eigenvalue(side_laplacian(in.g, Side::plus, slot), true, cg, rng);
        const double c = h2 / smallest_eigenvalue(side_laplacian(in.g, Side::minus, slot), false, cg, rng);
        series[0].push_back(a);
        series[1].push_back(b);
        series[2].push_back(c);
        t.rows.push_back({double(n), a, b, c});
      } catch (const std::exception& e) {
        rep.add_check("poincare.error" + l, false, 0.0, 0.0, e.what());
      }
    }
    for (int k = 0; k < 3; ++k)
      if (series[k].size() >= 2)
        rep.add_check(std::string("poincare.") + names[k] + "_stable[" + spec.build().name + "]",
                      band(series[k]) <= kStabilityBand, band(series[k]), kStabilityBand);
  }
  rep.tables.push_back(std::move(t));
}

void suite_norm2(const StudyConfig& cfg, Report& rep) {
  Table t{"norm2", {"n", "norm2_sin_cosh", "norm2_x", "flux_uncut", "flux_weighted"}, {}};
  const auto sc = harmonic::sin_cosh();
  const auto lin = harmonic::linear({1.0, 0.0, 0.0});
  const double tol = 10.0 * cfg.solve.cg_tol;
  for (const auto& spec : domains_for(cfg)) {
    std::vector<double> n2a, n2b, flux_a, flux_b;
    for (int n : resolutions_for(cfg, {32, 64, 128})) {
      const std::string l = "[" + label(spec.build(), n) + "]";
      try {
        const auto in = make_instance(spec, n, cfg.solve.delta);
        const auto& g = in.g;
        LayerOperators ops(g, cg_options(cfg));
        const auto f = sample_on_crossings(g, sc.value);
        n2a.push_back(ops.norm2(f));
        n2b.push_back(ops.norm2(sample_on_crossings(g, lin.value)));
        const auto w = ops.extended_sw(f);
        double uncut = 0.0;
        for (const auto& e : g.plus_edges()) {
          const double d = (w.values[e.upper] - w.values[e.lower]) / g.h();
          uncut += d * d;
        }
        flux_a.push_back(uncut * g.cell_volume());
        flux_b.push_back(inner(g, w, w));
        t.rows.push_back({double(n), n2a.back(), n2b.back(), flux_a.back(), flux_b.back()});

        const auto [fmin, fmax] = std::minmax_element(f.values.begin(), f.values.end());
        double below = 0.0, above = 0.0;
        for (int p : g.plus_points()) {
          below = std::max(below, *fmin - w.values[p]);
          above = std::max(above, w.values[p] - *fmax);
        }
        rep.add_check("norm2.max_principle" + l, std::max(below, above) <= tol,
                      std::max(below, above), tol);
        const double zero = ops.norm2(CrossingFn(g.num_crossings())) + ops.norm1(CrossingFn(g.num_crossings()));
        rep.add_check("norm2.zero_data" + l, zero == 0.0, zero, 0.0);
      } catch (const std::exception& e) {
        rep.add_check("norm2.error" + l, false, 0.0, 0.0, e.what());
      }
    }
    const std::string d = "[" + spec.build().name + "]";
    if (n2a.size() >= 2) {
      rep.add_check("norm2.sin_cosh_spread" + d, band(n2a) - 1.0 <= kNorm2Spread, band(n2a) - 1.0,
                    kNorm2Spread);
      rep.add_check("norm2.linear_spread" + d, band(n2b) - 1.0 <= kNorm2Spread, band(n2b) - 1.0,
                    kNorm2Spread);
      rep.add_check("norm2.flux_uncut_bounded" + d, band(flux_a) <= kStabilityBand, band(flux_a),
                    kStabilityBand);
      rep.add_check("norm2.flux_weighted_bounded" + d, band(flux_b) <= kStabilityBand,
                    band(flux_b), kStabilityBand);
    }
  }
  rep.tables.push_back(std::move(t));
}

void check_sharp_instance(const StudyConfig& cfg, Report& rep, Rng& rng, const GridGeometry& g,
                          const std::string& l, bool expect_shared) {
  const auto shared = g.shared_crossings();
  if (expect_shared)
    rep.add_check("fsharp.shared_present" + l, !shared.empty(), double(shared.size()), 1.0);

  double w_node = 0.0;
  for (int c : shared) {
    const auto& cp = g.crossings()[c];
    bool ok = cp.grid_node.has_value() && !g.in_plus(*cp.grid_node) && cp.intervals.size() >= 2;
    if (ok)
      for (int id : cp.intervals) ok = ok && g.cuts()[id].minus_end() == *cp.grid_node;
    if (!ok) w_node = 1.0;
  }
  rep.add_check("fsharp.shared_at_minus_node" + l, w_node == 0.0, w_node, 0.0);

  LayerOperators ops(g, cg_options(cfg));
  const auto f = random_crossing_fn(g, rng);
  const auto w = ops.extended_sw(f);
  InterfaceSolution sol;
  ops.apply_Ah(f, &sol);
  double spread_w = 0.0, spread_u = 0.0;
  for (int c : shared) {
    const auto& ids = g.crossings()[c].intervals;
    for (int id : ids) {
      spread_w = std::max(spread_w, std::abs(w.ext[id] - w.ext[ids.front()]));
      spread_u = std::max(spread_u, std::abs(sol.plus.ext[id] - sol.plus.ext[ids.front()]));
    }
  }
  rep.add_check("fsharp.sw_extension_single_valued" + l, spread_w <= kSharpTolerance, spread_w,
                kSharpTolerance);
  rep.add_check("fsharp.double_layer_single_valued" + l, spread_u <= kSharpTolerance, spread_u,
                kSharpTolerance);
  const double q = max_abs_diff(interp_Q(g, w).values, f.values);
  rep.add_check("fsharp.Q_inverts_extrapolation" + l, q <= 1e-10, q, 1e-10);

  if (!shared.empty()) {
    auto psi = tilde_lift(g, f);
    psi[g.crossings()[shared.front()].intervals.back()] += 1.0;
    bool threw = false;
    try {
      restrict_sharp(g, psi);
    } catch (const OperatorError&) {
      threw = true;
    }
    rep.add_check("fsharp.rejects_non_sharp" + l, threw, threw ? 1.0 : 0.0, 1.0);
  }
}

void suite_fsharp(const StudyConfig& cfg, Report& rep) {
  Rng rng(cfg.seed);
  // r = 5/8 passes through grid points such as (3/8, 1/2) when 16 divides n.
  for (int n : {16, 32}) {
    const std::string l = "[" + label(domains::circle(0.625), n) + "]";
    try {
      const auto g = GridGeometry::build(domains::circle(0.625), n, cfg.solve.delta);
      check_sharp_instance(cfg, rep, rng, g, l, true);
    } catch (const std::exception& e) {
      rep.add_check("fsharp.error" + l, false, 0.0, 0.0, e.what());
    }
  }
  for_each_instance(cfg, rep, "fsharp", resolutions_for(cfg, {32, 64}), [&](const Instance& in) {
    check_sharp_instance(cfg, rep, rng, in.g, "[" + in.label + "]", false);
  });
}

void suite_roundtrip(const StudyConfig& cfg, Report& rep) {
  Rng rng(cfg.seed);
  for_each_instance(cfg, rep, "roundtrip", resolutions_for(cfg, {32, 64}), [&](const Instance& in) {
    const auto& g = in.g;
    const std::string l = "[" + in.label + "]";
    LayerOperators ops(g, cg_options(cfg));
    double w_q = 0.0, w_q_any = 0.0, w_trace = 0.0;
    bool exact = true;
    for (int k = 0; k < std::max(1, cfg.samples / 4); ++k) {
      const auto f = random_crossing_fn(g, rng);
      w_q = std::max(w_q, max_abs_diff(interp_Q(g, ops.extended_sw(f)).values, f.values));
      std::vector<double> w(g.num_points(), 0.0);
      for (int p : g.plus_points()) w[p] = rng.symmetric();
      w_q_any = std::max(w_q_any,
                         max_abs_diff(interp_Q(g, quadratic_extrapolate(g, w, f)).values, f.values));
      exact = exact && restrict_sharp(g, tilde_lift(g, f)).values == f.values;
      for (Side side : {Side::plus, Side::minus}) {
        const auto psi = random_interval_fn(g, rng);
        const auto u = random_field(g, side, rng);
        const auto lifted = lift_from_trace(g, u.values, psi, side);
        w_trace = std::max(w_trace, max_abs_diff(trace(g, lifted).values, psi.values));
      }
    }
    rep.add_check("roundtrip.Q_after_extrapolation" + l, w_q <= 1e-10, w_q, 1e-10);
    rep.add_check("roundtrip.Q_after_extrapolation_any_w" + l, w_q_any <= 1e-10, w_q_any, 1e-10);
    rep.add_check("roundtrip.sharp_after_lift" + l, exact, exact ? 0.0 : 1.0, 0.0);
    rep.add_check("roundtrip.trace_after_lift" + l, w_trace <= kRoundOff, w_trace, kRoundOff);
  });
}

using SuiteFn = void (*)(const StudyConfig&, Report&);

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"green", suite_green},       {"minimization", suite_minimization},
      {"identities", suite_identities}, {"spectrum", suite_spectrum},
      {"contraction", suite_contraction}, {"extension", suite_extension},
      {"poincare", suite_poincare}, {"norm2", suite_norm2},
      {"fsharp", suite_fsharp},     {"roundtrip", suite_roundtrip},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : suites()) out.push_back(s.first);
    return out;
  }();
  return names;
}

Report run_property_suite(const std::string& suite, const StudyConfig& cfg) {
  const auto it = std::find_if(suites().begin(), suites().end(),
                               [&](const auto& s) { return s.first == suite; });
  if (it == suites().end()) {
    std::string known;
    for (const auto& s : suite_names()) known += (known.empty() ? "" : ", ") + s;
    throw ConfigError("unknown suite '" + suite + "' (known: " + known + ")");
  }
  cfg.validate();
  Report rep;
  rep.kind = "suite:" + suite;
  rep.config = to_json(cfg);
  rep.timing = !cfg.single_thread;
  it->second(cfg, rep);
  return rep;
}

}  // namespace gridbie

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>

#include "gridbie/errors.hpp"
#include "gridbie/harness.hpp"

namespace gridbie {

namespace {

constexpr double kExactFloor = 1e-8;
constexpr double kOrderLow = 1.7;
constexpr double kOrderHigh = 2.3;
constexpr double kRatio3d = 3.0;

CgOptions cg_options(const StudyConfig& cfg) {
  CgOptions o;
  o.tol = cfg.solve.cg_tol;
  return o;
}

Report new_report(const std::string& kind, const StudyConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.kind = kind;
  rep.config = to_json(cfg);
  rep.timing = !cfg.single_thread;
  return rep;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  for (const auto& r : convergence)
    if (!r.error.empty()) return false;
  return true;
}

void Report::add_check(std::string name, bool ok, double value, double threshold,
                       std::string detail) {
  checks.push_back({std::move(name), ok, value, threshold, std::move(detail)});
}

Report run_solve(const StudyConfig& cfg) {
  Report rep = new_report("solve", cfg);
  const auto domain = cfg.domain.build();
  const auto exact = cfg.solution.build();
  const auto g = GridGeometry::build(domain, cfg.solve.n, cfg.solve.delta);
  LayerOperators ops(g, cg_options(cfg));
  const auto f = sample_on_crossings(g, exact.value);

  const auto t0 = std::chrono::steady_clock::now();
  const auto sol = solve_dirichlet(ops, f, cfg.solve);
  const double secs = seconds_since(t0);
  const auto err = node_errors(g, sol.solution.values, exact.value);

  rep.add_check("solve.residual", sol.final_residual <= cfg.solve.fp_tol, sol.final_residual,
                cfg.solve.fp_tol);
  const auto w = ops.shortley_weller().solve(f);
  double gap = 0.0;
  for (int p : g.plus_points()) gap = std::max(gap, std::abs(w[p] - sol.solution.values[p]));
  rep.add_check("solve.matches_shortley_weller", gap <= 10.0 * cfg.solve.fp_tol, gap,
                10.0 * cfg.solve.fp_tol);
  if (cfg.solution.reproduced_exactly())
    rep.add_check("solve.exact_reproduction", err.max <= kExactFloor, err.max, kExactFloor);
  if (!sol.monotone) rep.add_check("solve.monotone_residual", false, 0.0, 0.0, "residual grew");

  Table summary{"solve", {"n", "h", "crossings", "evaluations", "cg_iterations", "final_residual",
                          "err_max", "err_l2", "contraction"}, {}};
  summary.rows.push_back({double(g.n()), g.h(), double(g.num_crossings()), double(sol.evaluations),
                          double(sol.cg_iterations), sol.final_residual, err.max, err.l2,
                          sol.contraction.value_or(std::nan(""))});
  if (rep.timing) {
    summary.columns.push_back("seconds");
    summary.rows.back().push_back(secs);
  }
  rep.tables.push_back(std::move(summary));
  Table hist{"residual_history", {"step", "residual"}, {}};
  for (std::size_t k = 0; k < sol.residual_history.size(); ++k)
    hist.rows.push_back({double(k), sol.residual_history[k]});
  rep.tables.push_back(std::move(hist));
  return rep;
}

Report run_convergence(const StudyConfig& cfg) {
  Report rep = new_report("convergence", cfg);
  const auto domain = cfg.domain.build();
  const auto exact = cfg.solution.build();

  for (int n : cfg.resolutions) {
    ConvergenceRow row;
    row.n = n;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto g = GridGeometry::build(domain, n, cfg.solve.delta);
      row.h = g.h();
      LayerOperators ops(g, cg_options(cfg));
      const auto sol = solve_dirichlet(ops, sample_on_crossings(g, exact.value), cfg.solve);
      const auto err = node_errors(g, sol.solution.values, exact.value);
      row.err_max = err.max;
      row.err_l2 = err.l2;
      row.iters = sol.evaluations;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.seconds = seconds_since(t0);
    rep.convergence.push_back(std::move(row));
  }

  auto& rows = rep.convergence;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    auto& b = rows[i];
    if (!a.error.empty() || !b.error.empty()) continue;
    const double refine = std::log2(b.h > 0 ? a.h / b.h : 2.0);
    if (a.err_max > 0 && b.err_max > 0) b.order_max = std::log2(a.err_max / b.err_max) / refine;
    if (a.err_l2 > 0 && b.err_l2 > 0) b.order_l2 = std::log2(a.err_l2 / b.err_l2) / refine;
  }

  for (const auto& r : rows)
    if (!r.error.empty())
      rep.add_check("convergence.stage[n=" + std::to_string(r.n) + "]", false, 0.0, 0.0, r.error);

  if (cfg.solution.reproduced_exactly()) {
    for (const auto& r : rows)
      if (r.error.empty())
        rep.add_check("convergence.exact[n=" + std::to_string(r.n) + "]", r.err_max <= kExactFloor,
                      r.err_max, kExactFloor);
  } else if (cfg.domain.dim() == 2 && rows.size() >= 3) {
    for (std::size_t i = rows.size() - 2; i < rows.size(); ++i) {
      const auto& r = rows[i];
      const std::string name = "convergence.order_max[n=" + std::to_string(rows[i - 1].n) + "->" +
                               std::to_string(r.n) + "]";
      const double o = r.order_max.value_or(std::nan(""));
      rep.add_check(name, r.order_max && o >= kOrderLow && o <= kOrderHigh, o, kOrderLow,
                    "band [1.7, 2.3]");
    }
  } else {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& a = rows[i - 1];
      const auto& b = rows[i];
      if (!a.error.empty() || !b.error.empty()) continue;
      const double ratio = a.err_max / b.err_max;
      rep.add_check("convergence.error_ratio[n=" + std::to_string(a.n) + "->" +
                        std::to_string(b.n) + "]",
                    ratio >= kRatio3d, ratio, kRatio3d);
    }
  }
  return rep;
}

Report run_spectrum(const StudyConfig& cfg) {
  Report rep = new_report("spectrum", cfg);
  const auto g = GridGeometry::build(cfg.domain.build(), cfg.solve.n, cfg.solve.delta);
  LayerOperators ops(g, cg_options(cfg));
  const auto s = spectrum(ops, cfg.solve.dense_cap);
  const auto ah = ops.assemble_dense(OperatorTag::Ah, cfg.solve.dense_cap);
  const auto ev = general_eigenvalues(ah);

  std::vector<double> ah_re(ev.size()), ah_im(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    ah_re[i] = ev[i].real();
    ah_im[i] = ev[i].imag();
  }
  // Sort by real part so the output does not depend on the eigensolver's order.
  std::vector<int> order(ev.size());
  for (int i = 0; i < ev.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return ah_re[a] != ah_re[b] ? ah_re[a] < ah_re[b] : ah_im[a] < ah_im[b];
  });
  std::vector<double> re_sorted, im_sorted;
  for (int i : order) {
    re_sorted.push_back(ah_re[i]);
    im_sorted.push_back(ah_im[i]);
  }
  double max_imag = 0.0;
  for (double x : im_sorted) max_imag = std::max(max_imag, std::abs(x));

  rep.add_check("spectrum.self_adjoint", s.self_adjoint_defect <= 1e-8, s.self_adjoint_defect, 1e-8);
  rep.add_check("spectrum.calB_upper", s.calB.back() <= 1e-8, s.calB.back(), 1e-8);
  rep.add_check("spectrum.r_hat_below_one", s.r_hat < 1.0, s.r_hat, 1.0);
  rep.add_check("spectrum.Ah_real", max_imag <= 1e-8, max_imag, 1e-8);
  rep.add_check("spectrum.Ah_range", re_sorted.front() > 0.0 && re_sorted.back() <= 1.0 + 1e-8,
                re_sorted.front(), 0.0);

  Table calb{"calB_eigenvalues", {"index", "calB", "calA"}, {}};
  for (std::size_t i = 0; i < s.calB.size(); ++i) calb.rows.push_back({double(i), s.calB[i], s.calA[i]});
  Table aht{"Ah_eigenvalues", {"index", "real", "imag"}, {}};
  for (std::size_t i = 0; i < re_sorted.size(); ++i) aht.rows.push_back({double(i), re_sorted[i], im_sorted[i]});
  rep.tables.push_back(std::move(calb));
  rep.tables.push_back(std::move(aht));

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path dir(cfg.out_dir);
    write_matrix_csv(s.calB_matrix, (dir / "calB_matrix.csv").string());
    write_matrix_csv(s.gram, (dir / "gram_matrix.csv").string());
    write_matrix_csv(ah, (dir / "Ah_matrix.csv").string());
    write_columns_csv({"calB", "calA"}, {s.calB, s.calA}, (dir / "calB_spectrum.csv").string());
    write_columns_csv({"real", "imag"}, {re_sorted, im_sorted}, (dir / "Ah_spectrum.csv").string());
  }
  return rep;
}

Report run_geometry_dump(const StudyConfig& cfg) {
  Report rep = new_report("geometry", cfg);
  const auto g = GridGeometry::build(cfg.domain.build(), cfg.solve.n, cfg.solve.delta);
  const double delta = g.delta();

  Table cuts{"cuts", {"axis", "lower", "upper", "lower_plus", "s_cross", "s1", "xi", "crossing",
                      "x", "y", "z"}, {}};
  double min_s = 1.0, xi_lo = 1.0, xi_hi = 0.0;
  int clamped = 0;
  bool one_plus = true, s1_ok = true;
  for (const auto& c : g.cuts()) {
    const auto& x = g.crossings()[c.crossing].x;
    cuts.rows.push_back({double(c.axis), double(c.lower), double(c.upper), c.lower_plus ? 1.0 : 0.0,
                         c.s_cross, c.s1, c.xi, double(c.crossing), x[0], x[1], x[2]});
    min_s = std::min({min_s, c.s_cross, 1.0 - c.s_cross});
    xi_lo = std::min(xi_lo, c.xi);
    xi_hi = std::max(xi_hi, c.xi);
    if (c.s1 != c.s_cross) ++clamped;
    one_plus = one_plus && (g.in_plus(c.lower) != g.in_plus(c.upper)) &&
               (g.in_plus(c.lower) == c.lower_plus);
    s1_ok = s1_ok && c.s1 >= delta && c.s1 <= 1.0 - delta;
  }
  Table summary{"summary", {"dim", "n", "h", "delta", "plus_points", "minus_points", "cuts",
                            "crossings", "shared_crossings", "min_fraction", "min_xi", "max_xi",
                            "clamped"}, {}};
  summary.rows.push_back({double(g.dim()), double(g.n()), g.h(), delta,
                          double(g.plus_points().size()), double(g.minus_points().size()),
                          double(g.num_cuts()), double(g.num_crossings()),
                          double(g.shared_crossings().size()), min_s, xi_lo, xi_hi,
                          double(clamped)});
  rep.tables.push_back(std::move(summary));
  rep.tables.push_back(std::move(cuts));

  rep.add_check("geometry.one_plus_endpoint", one_plus, one_plus ? 1.0 : 0.0, 1.0);
  rep.add_check("geometry.s1_separated", s1_ok, s1_ok ? 1.0 : 0.0, 1.0);
  rep.add_check("geometry.xi_range", g.num_cuts() == 0 || (xi_lo >= delta && xi_hi <= 1.0 - delta),
                xi_lo, delta);
  return rep;
}

}  // namespace gridbie

#pragma once

// Verification harness: manufactured-solution convergence studies, property
// suites and report serialization.

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridbie/driver.hpp"
#include "json.hpp"

namespace gridbie {

/// Named level-set family plus parameters. Unset parameters take the family
/// defaults listed in docs/config_schema.md.
struct DomainSpec {
  std::string family = "circle";
  std::map<std::string, double> params;
  double half_width = 1.0;

  ImplicitDomain build() const;
  int dim() const;
};

/// Exact harmonic solution used to manufacture boundary data.
struct SolutionSpec {
  std::string kind = "re_power";
  int m = 3;
  Point center{0.0, 0.0, 0.0};
  double value = 1.0;
  Point coeffs{1.0, 0.0, 0.0};

  HarmonicFunction build() const;
  /// True for harmonic polynomials that are at most quadratic along every axis;
  /// the method reproduces these exactly.
  bool reproduced_exactly() const;
};

struct StudyConfig {
  std::string name = "study";
  DomainSpec domain;
  SolutionSpec solution;
  /// Resolution list for convergence studies; strictly increasing.
  std::vector<int> resolutions{32, 64, 128, 256};
  /// Resolution list for property suites; empty selects per-suite defaults.
  std::vector<int> suite_resolutions;
  /// Geometries for property suites; empty selects circle r=0.7 and the star.
  std::vector<DomainSpec> suite_domains;
  /// Solver settings; solve.n is the resolution of single solves.
  SolveConfig solve;
  /// Random samples per property check.
  int samples = 20;
  std::uint64_t seed = 12345;
  std::string out_dir;
  std::string format = "text";
  /// Forces one thread and drops wall-clock fields so reports are byte-stable.
  bool single_thread = false;

  /// Throws ConfigError on invalid settings, including singular points of the
  /// exact solution that are not strictly outside the domain.
  void validate() const;
};

StudyConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StudyConfig& cfg);
/// Reads a JSON config file; throws ConfigError with the path on failure.
StudyConfig load_config(const std::string& path);

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double err_max = 0.0;
  double err_l2 = 0.0;
  std::optional<double> order_max;
  std::optional<double> order_l2;
  int iters = 0;
  double seconds = 0.0;
  /// Non-empty when this resolution failed; the other fields are then unset.
  std::string error;
};

/// Named numeric table, one row per measurement.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string kind;
  nlohmann::json config;
  std::vector<ConvergenceRow> convergence;
  std::vector<Check> checks;
  std::vector<Table> tables;
  /// Wall-clock fields are written only when set.
  bool timing = true;

  bool passed() const;
  void add_check(std::string name, bool passed, double value, double threshold,
                 std::string detail = {});
};

/// One Dirichlet solve at cfg.solve.n, with node errors against the exact solution.
Report run_solve(const StudyConfig& cfg);
Report run_convergence(const StudyConfig& cfg);

const std::vector<std::string>& suite_names();
/// Throws ConfigError for an unknown suite.
Report run_property_suite(const std::string& suite, const StudyConfig& cfg);

/// Spectra of calB, calA and Ah at cfg.solve.n. With an output directory the
/// dense matrices and eigenvalues are written there as CSV.
Report run_spectrum(const StudyConfig& cfg);
/// Point counts, cut list and weight statistics.
Report run_geometry_dump(const StudyConfig& cfg);

/// Writes the report to `out` in json, csv or text form.
void emit_report(const Report& report, const std::string& format, std::ostream& out);
/// Writes `<dir>/<stem>.<ext>`; throws std::runtime_error naming the path on failure.
std::string write_report(const Report& report, const std::string& format, const std::string& dir,
                         const std::string& stem);

/// printf "%.17g": 17 significant digits, enough to round-trip a double.
std::string format_real(double x);
void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);
void write_columns_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns, const std::string& path);

}  // namespace gridbie

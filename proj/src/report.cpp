#include <Eigen/Core>
#include <algorithm>
#include <optional>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gridbie/errors.hpp"
#include "gridbie/harness.hpp"
#include "gridbie/kernels.hpp"

namespace gridbie {

using nlohmann::json;

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

json real_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json environment() {
  std::ostringstream eigen;
  eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
  return json{{"compiler", __VERSION__}, {"eigen", eigen.str()},
              {"threads", kernels::thread_count()}};
}

json to_json(const Report& r) {
  json j;
  j["kind"] = r.kind;
  j["passed"] = r.passed();
  j["environment"] = environment();
  j["config"] = r.config;
  j["checks"] = json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"value", real_or_null(c.value)},
                           {"threshold", real_or_null(c.threshold)}, {"detail", c.detail}});
  j["convergence"] = json::array();
  for (const auto& row : r.convergence) {
    json o{{"n", row.n}, {"h", row.h}, {"err_max", row.err_max}, {"err_l2", row.err_l2},
           {"order_max", row.order_max ? real_or_null(*row.order_max) : json(nullptr)},
           {"order_l2", row.order_l2 ? real_or_null(*row.order_l2) : json(nullptr)},
           {"iters", row.iters}};
    if (r.timing) o["seconds"] = row.seconds;
    if (!row.error.empty()) o["error"] = row.error;
    j["convergence"].push_back(std::move(o));
  }
  j["tables"] = json::object();
  for (const auto& t : r.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json jr = json::array();
      for (double x : row) jr.push_back(real_or_null(x));
      rows.push_back(std::move(jr));
    }
    j["tables"][t.name] = {{"columns", t.columns}, {"rows", std::move(rows)}};
  }
  return j;
}

std::string optional_real(const std::optional<double>& x) { return x ? format_real(*x) : ""; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void emit_convergence_csv(const Report& r, std::ostream& out) {
  out << "n,h,err_max,err_l2,order_max,order_l2,iters,seconds\n";
  for (const auto& row : r.convergence) {
    out << row.n << ',' << format_real(row.h) << ',';
    if (row.error.empty())
      out << format_real(row.err_max) << ',' << format_real(row.err_l2);
    else
      out << "nan,nan";
    out << ',' << optional_real(row.order_max) << ',' << optional_real(row.order_l2) << ','
        << row.iters << ',' << (r.timing ? format_real(row.seconds) : "") << '\n';
  }
}

void emit_checks_csv(const Report& r, std::ostream& out) {
  out << "name,passed,value,threshold,detail\n";
  for (const auto& c : r.checks)
    out << csv_field(c.name) << ',' << (c.passed ? 1 : 0) << ',' << format_real(c.value) << ','
        << format_real(c.threshold) << ',' << csv_field(c.detail) << '\n';
}

void emit_table_csv(const Table& t, std::ostream& out) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_real(row[i]);
    out << '\n';
  }
}

void emit_text(const Report& r, std::ostream& out) {
  out << "report: " << r.kind;
  if (r.config.contains("name")) out << " (" << r.config["name"].get<std::string>() << ")";
  out << '\n';
  if (!r.convergence.empty()) {
    out << '\n'
        << std::setw(6) << "n" << std::setw(12) << "h" << std::setw(13) << "err_max"
        << std::setw(13) << "err_l2" << std::setw(10) << "order_max" << std::setw(10)
        << "order_l2" << std::setw(7) << "iters";
    if (r.timing) out << std::setw(10) << "seconds";
    out << '\n';
    for (const auto& row : r.convergence) {
      out << std::setw(6) << row.n;
      if (!row.error.empty()) {
        out << "  failed: " << row.error << '\n';
        continue;
      }
      out << std::setw(12) << std::setprecision(4) << std::defaultfloat << row.h << std::scientific
          << std::setprecision(4) << std::setw(13) << row.err_max << std::setw(13) << row.err_l2
          << std::fixed << std::setprecision(3);
      auto order = [&](const std::optional<double>& o) {
        if (o)
          out << std::setw(10) << *o;
        else
          out << std::setw(10) << "-";
      };
      order(row.order_max);
      order(row.order_l2);
      out << std::setw(7) << row.iters;
      if (r.timing) out << std::setw(10) << std::setprecision(2) << row.seconds;
      out << std::defaultfloat << '\n';
    }
  }
  for (const auto& t : r.tables) {
    if (t.rows.size() > 40) {
      out << "\n" << t.name << ": " << t.rows.size() << " rows (use --format csv or json)\n";
      continue;
    }
    out << '\n' << t.name << ":\n";
    std::vector<int> widths;
    for (const auto& c : t.columns) widths.push_back(std::max<int>(16, static_cast<int>(c.size()) + 2));
    for (std::size_t j = 0; j < t.columns.size(); ++j) out << std::setw(widths[j]) << t.columns[j];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t j = 0; j < row.size(); ++j)
        out << std::setw(j < widths.size() ? widths[j] : 16) << std::setprecision(8) << row[j];
      out << '\n';
    }
  }
  if (!r.checks.empty()) out << "\nchecks:\n";
  for (const auto& c : r.checks) {
    out << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << "  value=" << std::setprecision(6)
        << c.value << " threshold=" << c.threshold;
    if (!c.detail.empty()) out << "  (" << c.detail << ')';
    out << '\n';
  }
  out << "\nresult: " << (r.passed() ? "PASS" : "FAIL") << '\n';
}

}  // namespace

void emit_report(const Report& report, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << to_json(report).dump(2) << '\n';
  } else if (format == "csv") {
    if (report.kind == "convergence")
      emit_convergence_csv(report, out);
    else
      emit_checks_csv(report, out);
    for (const auto& t : report.tables) {
      out << "\n# " << t.name << '\n';
      emit_table_csv(t, out);
    }
  } else if (format == "text") {
    emit_text(report, out);
  } else {
    throw ConfigError("unknown report format '" + format + "' (expected json, csv or text)");
  }
}

std::string write_report(const Report& report, const std::string& format, const std::string& dir,
                         const std::string& stem) {
  std::filesystem::create_directories(dir);
  const std::string ext = format == "text" ? "txt" : format;
  const auto path = (std::filesystem::path(dir) / (stem + "." + ext)).string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report " + path);
  emit_report(report, format, out);
  if (!out) throw std::runtime_error("error while writing report " + path);
  return path;
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_real(m(i, j));
    out << '\n';
  }
  if (!out) throw std::runtime_error("error while writing " + path);
}

void write_columns_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  std::size_t rows = 0;
  for (const auto& c : columns) rows = std::max(rows, c.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out << ',';
      if (r < columns[i].size()) out << format_real(columns[i][r]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("error while writing " + path);
}

}  // namespace gridbie

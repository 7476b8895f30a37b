// gridbie: command line front end for the Dirichlet solver and its
// verification harness.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gridbie/errors.hpp"
#include "gridbie/harness.hpp"
#include "gridbie/kernels.hpp"

namespace {

struct Options {
  std::string config;
  std::vector<int> n;
  std::optional<double> delta;
  std::optional<std::string> method;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::string> format;
  bool single_thread = false;
  std::string suite;
};

gridbie::StudyConfig make_config(const Options& o, const std::string& verb) {
  gridbie::StudyConfig cfg = o.config.empty() ? gridbie::StudyConfig{} : gridbie::load_config(o.config);
  if (!o.n.empty()) {
    if (verb == "converge")
      cfg.resolutions = o.n;
    else if (verb == "props")
      cfg.suite_resolutions = o.n;
    else
      cfg.solve.n = o.n.back();
  }
  if (o.delta) cfg.solve.delta = *o.delta;
  if (o.method) cfg.solve.method = gridbie::parse_method(*o.method);
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (o.format) cfg.format = *o.format;
  if (o.single_thread) cfg.single_thread = true;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON config file (see docs/config_schema.md)");
  cmd->add_option("--n", o.n,
                  "grid intervals per axis; repeat for converge/props to give a resolution list");
  cmd->add_option("--delta", o.delta, "separation of the theoretical boundary nodes, in (0, 0.5]");
  cmd->add_option("--method", o.method, "fixed_point, gmres or dense_direct");
  cmd->add_option("--seed", o.seed, "seed for random property data");
  cmd->add_option("--out", o.out, "directory for report files");
  cmd->add_option("--format", o.format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_flag("--single-thread", o.single_thread,
                "one thread and no wall-clock fields: byte-identical reports");
}

int emit(const gridbie::Report& rep, const gridbie::StudyConfig& cfg, const std::string& stem) {
  gridbie::emit_report(rep, cfg.format, std::cout);
  if (!cfg.out_dir.empty()) {
    const auto path = gridbie::write_report(rep, cfg.format, cfg.out_dir, stem);
    std::cerr << "wrote " << path << '\n';
  }
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet problem on embedded grids via a discrete double layer"};
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "one Dirichlet solve with node errors");
  auto* converge = app.add_subcommand("converge", "manufactured-solution convergence study");
  auto* props = app.add_subcommand("props", "run a property suite ('all' runs every suite)");
  auto* spectrum = app.add_subcommand("spectrum", "spectra of calB, calA and Ah");
  auto* geom = app.add_subcommand("geom-dump", "grid classification and cut intervals");
  for (auto* cmd : {solve, converge, props, spectrum, geom}) add_common(cmd, o);
  std::vector<std::string> choices = gridbie::suite_names();
  choices.push_back("all");
  props->add_option("suite", o.suite, "suite name")->required()->check(CLI::IsMember(choices));

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string verb = app.get_subcommands().front()->get_name();
    const auto cfg = make_config(o, verb);
    if (cfg.single_thread) gridbie::kernels::set_thread_count(1);

    if (verb == "solve") return emit(gridbie::run_solve(cfg), cfg, "solve");
    if (verb == "converge") return emit(gridbie::run_convergence(cfg), cfg, "convergence");
    if (verb == "spectrum") return emit(gridbie::run_spectrum(cfg), cfg, "spectrum");
    if (verb == "geom-dump") return emit(gridbie::run_geometry_dump(cfg), cfg, "geometry");

    if (o.suite != "all") return emit(gridbie::run_property_suite(o.suite, cfg), cfg, "props_" + o.suite);
    int status = 0;
    for (const auto& name : gridbie::suite_names())
      status |= emit(gridbie::run_property_suite(name, cfg), cfg, "props_" + name);
    return status;
  } catch (const gridbie::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

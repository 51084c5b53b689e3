#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "nmx/checks.hpp"
#include "nmx/config.hpp"
#include "nmx/field_io.hpp"
#include "nmx/report.hpp"
#include "nmx/solver.hpp"

namespace {

int run_solve(const std::string& config_path) {
  const nmx::ParsedConfig parsed = nmx::parse_config_file(config_path);
  for (const std::string& w : parsed.warnings) std::cerr << "warning: " << w << "\n";

  const nmx::GridSpec grid = nmx::make_grid(parsed.run);
  const nmx::NonlinearityModel model = nmx::make_model(parsed.run);
  std::cout << "solving: n = " << grid.n << ", l = " << grid.l
            << ", kind = " << parsed.run.model_kind << ", p = " << parsed.run.p << "\n";

  const nmx::SolveOutput out = nmx::solve_ground_state(grid, model, parsed.run.solver);
  nmx::write_run_outputs(parsed.run.output_dir, parsed.run, out);
  std::cout << nmx::render_report(out.report);
  std::cout << "outputs written to " << parsed.run.output_dir << "\n";
  if (!out.report.converged) {
    std::cerr << "solve failed: " << out.report.failure_reason << "\n";
    return 1;
  }
  return 0;
}

int run_check(const std::string& level) {
  const std::vector<nmx::CheckResult> results = nmx::run_checks(level);
  int failed = 0;
  for (const nmx::CheckResult& r : results) {
    if (r.ok) {
      std::cout << "ok:   " << r.name << " (" << r.detail << ")\n";
    } else {
      std::cout << "FAIL: " << r.name << " (" << r.detail << ")\n";
      ++failed;
    }
  }
  std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
  return failed == 0 ? 0 : 1;
}

int run_export(const std::string& field_path, const std::string& axis, int index,
               const std::string& out_path) {
  const nmx::StoredField stored = nmx::read_field(field_path);
  nmx::export_slice(out_path, stored.field, axis[0], index);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int run_info(const std::string& field_path) {
  const nmx::StoredField stored = nmx::read_field(field_path);
  const char* kind = stored.kind == nmx::FieldKind::generic ? "generic"
                     : stored.kind == nmx::FieldKind::dual  ? "dual"
                                                            : "primal";
  char buf[64];
  std::cout << "n: " << stored.field.grid().n << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", stored.field.grid().l);
  std::cout << "l: " << buf << "\n";
  std::cout << "kind: " << kind << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", nmx::l2_norm(stored.field));
  std::cout << "l2_norm: " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", nmx::linf_norm(stored.field));
  std::cout << "linf_norm: " << buf << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ground states of the quadratic-curl equation with a monotone material law,\n"
               "computed on a periodic box through the dual constrained minimization"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* solve = app.add_subcommand("solve", "run the ground-state solver for a config");
  solve->add_option("config", config_path, "key = value config file")->required();

  std::string level = "quick";
  CLI::App* check = app.add_subcommand("check", "run built-in self checks");
  check->add_option("--level", level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));

  std::string export_field, export_axis = "z", export_out;
  int export_index = 0;
  CLI::App* exp = app.add_subcommand("export", "write one plane of a stored field as CSV");
  exp->add_option("field", export_field, "stored field file")->required();
  exp->add_option("--axis", export_axis, "x, y or z (default z)")
      ->check(CLI::IsMember({"x", "y", "z"}));
  exp->add_option("--index", export_index, "plane index along the axis")->required();
  exp->add_option("--out", export_out, "output CSV path")->required();

  std::string info_field;
  CLI::App* info = app.add_subcommand("info", "print the header and norms of a stored field");
  info->add_option("field", info_field, "stored field file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) return run_solve(config_path);
    if (check->parsed()) return run_check(level);
    if (exp->parsed()) return run_export(export_field, export_axis, export_index, export_out);
    if (info->parsed()) return run_info(info_field);
  } catch (const nmx::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "nmx/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nmx/field_io.hpp"

namespace nmx {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace

std::string render_report(const SolverReport& r) {
  std::ostringstream out;
  out << "converged: " << (r.converged ? "true" : "false") << "\n";
  out << "iterations: " << r.iterations << "\n";
  out << "c_level: " << fmt(r.c_level) << "\n";
  out << "dual_residual: " << fmt(r.dual_residual) << "\n";
  out << "div_residual: " << fmt(r.div_residual) << "\n";
  out << "primal_energy: " << fmt(r.primal_energy) << "\n";
  out << "duality_gap: " << fmt(r.duality_gap) << "\n";
  out << "primal_residual: " << fmt(r.primal.value) << "\n";
  out << "primal_trivial: " << (r.primal.trivial ? "true" : "false") << "\n";
  out << "nehari_norm_p: " << fmt(r.nehari_norms.first) << "\n";
  out << "nehari_norm_q: " << fmt(r.nehari_norms.second) << "\n";
  out << "symmetry_defect: " << fmt(r.symmetry_defect) << "\n";
  out << "seed: " << r.seed << "\n";
  if (!r.failure_reason.empty()) out << "failure_reason: " << r.failure_reason << "\n";
  return out.str();
}

std::string render_trace(const SolverReport& r) {
  std::ostringstream out;
  out << "iter,value,residual\n";
  for (const TracePoint& t : r.trace)
    out << t.iter << "," << fmt(t.value) << "," << fmt(t.residual) << "\n";
  return out.str();
}

void write_run_outputs(const std::string& dir, const RunConfig& rc, const SolveOutput& out) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  write_text((base / "report.txt").string(), render_report(out.report));
  write_text((base / "energy_trace.csv").string(), render_trace(out.report));
  write_text((base / "config_echo.cfg").string(), render_config(rc));
  write_field((base / "P.nmx").string(), out.P, FieldKind::dual);
  write_field((base / "E.nmx").string(), out.E, FieldKind::primal);
}

}  // namespace nmx

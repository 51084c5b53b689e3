#pragma once

#include <string>

#include "nmx/config.hpp"
#include "nmx/solver.hpp"

namespace nmx {

// `key: value` summary, full double precision, fixed key order; identical
// runs must produce identical bytes
std::string render_report(const SolverReport& r);

// iter,value,residual rows, full precision
std::string render_trace(const SolverReport& r);

// Writes into dir (created if needed): report.txt, energy_trace.csv,
// config_echo.cfg, P.nmx (dual minimizer), E.nmx (reconstructed primal).
void write_run_outputs(const std::string& dir, const RunConfig& rc, const SolveOutput& out);

}  // namespace nmx

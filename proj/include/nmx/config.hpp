#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nmx/material.hpp"
#include "nmx/solver.hpp"

namespace nmx {

// Parse or validation failure; line is 1-based, 0 when the error is not
// tied to a single line.
struct ConfigError : std::runtime_error {
  int line;
  ConfigError(const std::string& what, int line_ = 0)
      : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what : what),
        line(line_) {}
};

struct RunConfig {
  int n = 0;
  double l = 0.0;

  std::string model_kind;  // pure_power | double_power | custom_monotone
  double p = 0.0;
  double q = 0.0;          // defaults to p for pure_power
  double alpha = 0.0;
  double gamma_scale = 1.0;
  std::string table_path;  // custom_monotone samples, two columns s f

  SolverConfig solver;

  std::string output_dir = "out";
  std::string check_level = "quick";  // quick | full
};

struct ParsedConfig {
  RunConfig run;
  std::vector<std::string> warnings;
};

// Line-oriented `key = value` text with `#` comments and dotted keys.
// Unknown keys, malformed lines, duplicates and out-of-window values are
// hard errors (ConfigError); the slow-growth exponent window only warns.
ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

GridSpec make_grid(const RunConfig& rc);
NonlinearityModel make_model(const RunConfig& rc);

// canonical `key = value` echo that parses back to the identical config
std::string render_config(const RunConfig& rc);

// two-column monotone samples (s f per line, # comments)
MonotoneTable read_table(const std::string& path);

}  // namespace nmx

#include "nmx/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace nmx {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE || !std::isfinite(d))
    throw ConfigError("expected a finite number, got '" + v + "'", line);
  return d;
}

long long parse_int(const std::string& v, int line) {
  errno = 0;
  char* end = nullptr;
  const long long i = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
    throw ConfigError("expected an integer, got '" + v + "'", line);
  return i;
}

std::uint64_t parse_u64(const std::string& v, int line) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long i = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty() || v.front() == '-' || errno == ERANGE)
    throw ConfigError("expected a nonnegative integer, got '" + v + "'", line);
  return i;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

MonotoneTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file '" + path + "'");
  MonotoneTable t;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    std::istringstream row(s);
    double a, b;
    std::string extra;
    if (!(row >> a >> b) || (row >> extra))
      throw ConfigError("table '" + path + "': expected two numbers per row", line);
    t.s.push_back(a);
    t.f.push_back(b);
  }
  if (t.s.size() < 2) throw ConfigError("table '" + path + "' needs at least two rows");
  return t;
}

ParsedConfig parse_config_text(const std::string& text) {
  RunConfig rc;
  std::set<std::string> seen;
  bool has_n = false, has_l = false, has_kind = false, has_p = false, has_q = false,
       has_alpha = false;

  std::istringstream stream(text);
  std::string raw;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line);
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line);

    if (key == "grid.n") {
      const long long n = parse_int(value, line);
      if (n < 4 || n > 1024) throw ConfigError("grid.n must lie in [4, 1024]", line);
      rc.n = int(n);
      has_n = true;
    } else if (key == "grid.l") {
      rc.l = parse_double(value, line);
      has_l = true;
    } else if (key == "model.kind") {
      if (value != "pure_power" && value != "double_power" && value != "custom_monotone")
        throw ConfigError("model.kind must be pure_power, double_power or custom_monotone",
                          line);
      rc.model_kind = value;
      has_kind = true;
    } else if (key == "model.p") {
      rc.p = parse_double(value, line);
      has_p = true;
    } else if (key == "model.q") {
      rc.q = parse_double(value, line);
      has_q = true;
    } else if (key == "model.alpha") {
      rc.alpha = parse_double(value, line);
      has_alpha = true;
    } else if (key == "model.gamma_scale") {
      rc.gamma_scale = parse_double(value, line);
    } else if (key == "model.table") {
      rc.table_path = value;
    } else if (key == "solver.max_iters") {
      const long long v = parse_int(value, line);
      if (v < 1 || v > 1000000) throw ConfigError("solver.max_iters must lie in [1, 1000000]", line);
      rc.solver.max_iters = int(v);
    } else if (key == "solver.tol") {
      rc.solver.tol = parse_double(value, line);
    } else if (key == "solver.step0") {
      rc.solver.step0 = parse_double(value, line);
    } else if (key == "solver.backtrack") {
      rc.solver.backtrack = parse_double(value, line);
    } else if (key == "solver.armijo") {
      rc.solver.armijo = parse_double(value, line);
    } else if (key == "solver.seed") {
      rc.solver.seed = parse_u64(value, line);
    } else if (key == "solver.seeds") {
      const long long v = parse_int(value, line);
      if (v < 1 || v > 64) throw ConfigError("solver.seeds must lie in [1, 64]", line);
      rc.solver.seeds = int(v);
    } else if (key == "solver.init") {
      if (value == "gaussian")
        rc.solver.init = InitKind::gaussian;
      else if (value == "single_mode")
        rc.solver.init = InitKind::single_mode;
      else if (value == "from_file")
        rc.solver.init = InitKind::from_file;
      else
        throw ConfigError("solver.init must be gaussian, single_mode or from_file", line);
    } else if (key == "solver.init_path") {
      rc.solver.init_path = value;
    } else if (key == "output.dir") {
      rc.output_dir = value;
    } else if (key == "check.level") {
      if (value != "quick" && value != "full")
        throw ConfigError("check.level must be quick or full", line);
      rc.check_level = value;
    } else {
      throw ConfigError("unknown key '" + key + "'", line);
    }
  }

  if (!has_n) throw ConfigError("missing required key grid.n");
  if (!has_l) throw ConfigError("missing required key grid.l");
  if (!has_kind) throw ConfigError("missing required key model.kind");
  if (!has_p) throw ConfigError("missing required key model.p");
  if (!has_alpha) throw ConfigError("missing required key model.alpha");
  if (rc.model_kind != "pure_power" && !has_q)
    throw ConfigError("model.q is required for kind " + rc.model_kind);
  if (rc.model_kind == "custom_monotone" && rc.table_path.empty())
    throw ConfigError("model.table is required for kind custom_monotone");
  if (!has_q) rc.q = rc.p;

  if (rc.n % 2 != 0) throw ConfigError("grid.n must be even");
  if (!(rc.l > 0.0)) throw ConfigError("grid.l must be positive");
  if (!(rc.p > 2.0 && rc.p < 6.0)) throw ConfigError("model.p must lie in (2, 6)");
  if (!(rc.q > 2.0)) throw ConfigError("model.q must exceed 2");
  if (!(rc.alpha > 0.0 && rc.alpha < 3.0)) throw ConfigError("model.alpha must lie in (0, 3)");
  if (!(rc.gamma_scale > 0.0)) throw ConfigError("model.gamma_scale must be positive");
  if (!(rc.solver.tol > 0.0)) throw ConfigError("solver.tol must be positive");
  if (!(rc.solver.step0 > 0.0)) throw ConfigError("solver.step0 must be positive");
  if (!(rc.solver.backtrack > 0.0 && rc.solver.backtrack < 1.0))
    throw ConfigError("solver.backtrack must lie in (0, 1)");
  if (!(rc.solver.armijo > 0.0 && rc.solver.armijo < 1.0))
    throw ConfigError("solver.armijo must lie in (0, 1)");
  if (rc.solver.init == InitKind::from_file && rc.solver.init_path.empty())
    throw ConfigError("solver.init_path is required when solver.init = from_file");

  ParsedConfig out{rc, {}};
  const double bound = std::max(2.0, 6.0 - 2.0 * rc.alpha);
  if (rc.q <= bound) {
    out.warnings.push_back("model.q = " + fmt(rc.q) +
                           " is at or below the slow-growth bound max(2, 6 - 2*alpha) = " +
                           fmt(bound) + "; the constrained minimum may not be attained");
  }
  return out;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

GridSpec make_grid(const RunConfig& rc) { return GridSpec(rc.n, rc.l); }

NonlinearityModel make_model(const RunConfig& rc) {
  const WeightSpec w{rc.alpha, rc.gamma_scale};
  try {
    NonlinearityModel m = [&] {
      if (rc.model_kind == "pure_power") return NonlinearityModel::pure_power(rc.p, w);
      if (rc.model_kind == "double_power")
        return NonlinearityModel::double_power(rc.p, rc.q, w);
      return NonlinearityModel::custom_monotone(read_table(rc.table_path), rc.p, rc.q, w);
    }();
    m.validate();
    return m;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string render_config(const RunConfig& rc) {
  std::ostringstream out;
  out << "grid.n = " << rc.n << "\n";
  out << "grid.l = " << fmt(rc.l) << "\n";
  out << "model.kind = " << rc.model_kind << "\n";
  out << "model.p = " << fmt(rc.p) << "\n";
  out << "model.q = " << fmt(rc.q) << "\n";
  out << "model.alpha = " << fmt(rc.alpha) << "\n";
  out << "model.gamma_scale = " << fmt(rc.gamma_scale) << "\n";
  if (!rc.table_path.empty()) out << "model.table = " << rc.table_path << "\n";
  out << "solver.max_iters = " << rc.solver.max_iters << "\n";
  out << "solver.tol = " << fmt(rc.solver.tol) << "\n";
  out << "solver.step0 = " << fmt(rc.solver.step0) << "\n";
  out << "solver.backtrack = " << fmt(rc.solver.backtrack) << "\n";
  out << "solver.armijo = " << fmt(rc.solver.armijo) << "\n";
  out << "solver.seed = " << rc.solver.seed << "\n";
  out << "solver.seeds = " << rc.solver.seeds << "\n";
  const char* init = rc.solver.init == InitKind::gaussian     ? "gaussian"
                     : rc.solver.init == InitKind::single_mode ? "single_mode"
                                                               : "from_file";
  out << "solver.init = " << init << "\n";
  if (!rc.solver.init_path.empty()) out << "solver.init_path = " << rc.solver.init_path << "\n";
  out << "output.dir = " << rc.output_dir << "\n";
  out << "check.level = " << rc.check_level << "\n";
  return out.str();
}

}  // namespace nmx

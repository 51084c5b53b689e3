#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nmx/config.hpp>
#include <nmx/field_io.hpp>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"

using namespace nmx;
using testutil::noise_field;

namespace {

std::string temp_path(const std::string& stem) {
  return (std::filesystem::temp_directory_path() / stem).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), std::streamsize(bytes.size()));
}

// write a valid field file, apply `mutate` to its bytes, expect rejection
void expect_rejected(const std::string& name, void (*mutate)(std::string&)) {
  const GridSpec g{4, 2.0};
  const std::string path = temp_path("nmx_corrupt_" + name + ".nmx");
  write_field(path, noise_field(g, 1), FieldKind::generic);
  std::string bytes = slurp(path);
  mutate(bytes);
  spit(path, bytes);
  CHECK_THROWS_AS((void)read_field(path), std::runtime_error);
  std::remove(path.c_str());
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

bool same_config(const RunConfig& a, const RunConfig& b) {
  return a.n == b.n && a.l == b.l && a.model_kind == b.model_kind && a.p == b.p && a.q == b.q &&
         a.alpha == b.alpha && a.gamma_scale == b.gamma_scale && a.table_path == b.table_path &&
         a.solver.max_iters == b.solver.max_iters && a.solver.tol == b.solver.tol &&
         a.solver.step0 == b.solver.step0 && a.solver.backtrack == b.solver.backtrack &&
         a.solver.armijo == b.solver.armijo && a.solver.seed == b.solver.seed &&
         a.solver.seeds == b.solver.seeds && a.solver.init == b.solver.init &&
         a.solver.init_path == b.solver.init_path && a.output_dir == b.output_dir &&
         a.check_level == b.check_level;
}

const char* kMinimal =
    "grid.n = 16\n"
    "grid.l = 8\n"
    "model.kind = pure_power\n"
    "model.p = 4\n"
    "model.alpha = 2\n";

}  // namespace

TEST_CASE("field files round trip bitwise for every kind and size") {
  int salt = 0;
  for (int n : {4, 8, 16}) {
    const GridSpec g{n, 1.5 * n};
    for (auto kind : {FieldKind::generic, FieldKind::dual, FieldKind::primal}) {
      const VectorField f = noise_field(g, 70 + salt++);
      const std::string path = temp_path("nmx_rt.nmx");
      write_field(path, f, kind);
      const StoredField back = read_field(path);
      CHECK(back.kind == kind);
      CHECK(back.field.grid() == g);
      CHECK((back.field.data() == f.data()).all());
      std::remove(path.c_str());
    }
  }
}

TEST_CASE("field file size is exactly header plus payload") {
  for (int n : {4, 8}) {
    const GridSpec g{n, 3.0};
    const std::string path = temp_path("nmx_size.nmx");
    write_field(path, noise_field(g, 2), FieldKind::dual);
    CHECK(std::int64_t(std::filesystem::file_size(path)) == 28 + 24ll * n * n * n);
    std::remove(path.c_str());
  }
}

TEST_CASE("reader rejects every corrupted header or payload") {
  expect_rejected("magic", [](std::string& b) { b[0] = 'M'; });
  expect_rejected("version", [](std::string& b) { b[4] = 2; });
  expect_rejected("odd_n", [](std::string& b) { b[8] = 7; });
  expect_rejected("small_n", [](std::string& b) { b[8] = 2; });
  expect_rejected("bad_l", [](std::string& b) {
    const double l = -1.0;
    std::memcpy(&b[12], &l, 8);
  });
  expect_rejected("kind", [](std::string& b) { b[20] = 3; });
  expect_rejected("reserved", [](std::string& b) { b[24] = 1; });
  expect_rejected("truncated", [](std::string& b) { b.resize(b.size() - 8); });
  expect_rejected("trailing", [](std::string& b) { b.push_back('\0'); });
  expect_rejected("nan_payload", [](std::string& b) {
    const double v = std::nan("");
    std::memcpy(&b[28], &v, 8);
  });
  CHECK_THROWS_AS((void)read_field(temp_path("nmx_does_not_exist.nmx")), std::runtime_error);
}

TEST_CASE("slice export writes the documented schema") {
  const GridSpec g{6, 3.0};
  VectorField f = noise_field(g, 5);
  const std::string path = temp_path("nmx_slice.csv");
  export_slice(path, f, 'y', 2);

  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "i,j,c1,c2,c3,magnitude");
  int rows = 0;
  while (std::getline(in, line)) {
    const auto cols = split(line, ',');
    REQUIRE(cols.size() == 6);
    const int jx = std::stoi(cols[0]);
    const int jz = std::stoi(cols[1]);
    const double c1 = std::stod(cols[2]);
    const double c2 = std::stod(cols[3]);
    const double c3 = std::stod(cols[4]);
    const double mag = std::stod(cols[5]);
    CHECK(c1 == f.at(0, jx, 2, jz));
    CHECK(c2 == f.at(1, jx, 2, jz));
    CHECK(c3 == f.at(2, jx, 2, jz));
    CHECK(std::abs(mag - std::sqrt(c1 * c1 + c2 * c2 + c3 * c3)) <= 1e-15 * (1.0 + mag));
    ++rows;
  }
  CHECK(rows == g.n * g.n);
  std::remove(path.c_str());
}

TEST_CASE("slice export flattens a constant field to unit rows") {
  const GridSpec g{4, 2.0};
  VectorField f(g);
  f.comp(0).setConstant(1.0);
  const std::string path = temp_path("nmx_slice_const.csv");
  export_slice(path, f, 'z', 0);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) CHECK(line.substr(line.find(',', line.find(',') + 1) + 1) == "1,0,0,1");
  std::remove(path.c_str());
}

TEST_CASE("slice export validates axis and index") {
  const GridSpec g{4, 2.0};
  const VectorField f = noise_field(g, 6);
  const std::string path = temp_path("nmx_slice_bad.csv");
  CHECK_THROWS_AS(export_slice(path, f, 'w', 0), std::invalid_argument);
  CHECK_THROWS_AS(export_slice(path, f, 'x', -1), std::invalid_argument);
  CHECK_THROWS_AS(export_slice(path, f, 'x', g.n), std::invalid_argument);
}

TEST_CASE("minimal config fills the documented defaults") {
  const ParsedConfig pc = parse_config_text(kMinimal);
  CHECK(pc.warnings.empty());
  const RunConfig& rc = pc.run;
  CHECK(rc.n == 16);
  CHECK(rc.l == 8.0);
  CHECK(rc.model_kind == "pure_power");
  CHECK(rc.q == rc.p);
  CHECK(rc.gamma_scale == 1.0);
  CHECK(rc.solver.max_iters == 2000);
  CHECK(rc.solver.tol == 1e-6);
  CHECK(rc.solver.step0 == 1.0);
  CHECK(rc.solver.backtrack == 0.5);
  CHECK(rc.solver.armijo == 1e-4);
  CHECK(rc.solver.seed == 0);
  CHECK(rc.solver.seeds == 1);
  CHECK(rc.solver.init == InitKind::gaussian);
  CHECK(rc.output_dir == "out");
  CHECK(rc.check_level == "quick");

  CHECK(make_grid(rc) == GridSpec{16, 8.0});
  CHECK_NOTHROW(make_model(rc).validate());
}

TEST_CASE("config accepts comments blank lines and spacing") {
  const std::string text =
      "# header comment\n"
      "\n"
      "grid.n=16   # trailing note\n"
      "  grid.l =\t8\n"
      "model.kind = pure_power\n"
      "model.p = 4\n"
      "model.alpha = 2\n";
  const ParsedConfig pc = parse_config_text(text);
  CHECK(pc.run.n == 16);
  CHECK(pc.run.l == 8.0);
}

TEST_CASE("config errors carry the offending line") {
  const std::string text =
      "grid.n = 16\n"
      "grid.l = 8\n"
      "grid.m = 1\n";
  try {
    (void)parse_config_text(text);
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("grid.m") != std::string::npos);
  }
}

TEST_CASE("config rejects malformed and out-of-window values") {
  auto bad = [](const std::string& extra_or_replacement, bool replace_p = false) {
    std::string text = kMinimal;
    if (replace_p) {
      const auto at = text.find("model.p = 4");
      text.replace(at, 11, extra_or_replacement);
    } else {
      text += extra_or_replacement;
    }
    CHECK_THROWS_AS((void)parse_config_text(text), ConfigError);
  };
  bad("model.p = 7", true);
  bad("model.p = 2", true);
  bad("model.p = nope", true);
  bad("grid.l = 8\n");                       // duplicate
  bad("unknown.key = 1\n");
  bad("just words without equals\n");
  bad("model.q =\n");                        // empty value
  bad(" = 4\n");                             // empty key
  bad("solver.backtrack = 1\n");
  bad("solver.armijo = 0\n");
  bad("solver.tol = -1e-6\n");
  bad("solver.seeds = 65\n");
  bad("solver.seed = -3\n");
  bad("solver.init = sideways\n");
  bad("solver.init = from_file\n");          // missing init_path
  bad("model.alpha = 3", false);             // duplicate key as well as window
  bad("check.level = paranoid\n");

  CHECK_THROWS_AS((void)parse_config_text("grid.n = 15\ngrid.l = 8\n"
                                          "model.kind = pure_power\nmodel.p = 4\nmodel.alpha = 2\n"),
                  ConfigError);  // odd grid
  CHECK_THROWS_AS((void)parse_config_text("grid.l = 8\nmodel.kind = pure_power\n"
                                          "model.p = 4\nmodel.alpha = 2\n"),
                  ConfigError);  // missing grid.n
  CHECK_THROWS_AS((void)parse_config_text("grid.n = 16\ngrid.l = 8\n"
                                          "model.kind = double_power\nmodel.p = 3\nmodel.alpha = 2\n"),
                  ConfigError);  // double_power without q
  CHECK_THROWS_AS((void)parse_config_text("grid.n = 16\ngrid.l = 8\n"
                                          "model.kind = custom_monotone\nmodel.p = 3\n"
                                          "model.q = 4\nmodel.alpha = 2\n"),
                  ConfigError);  // custom without table
}

TEST_CASE("slow growth exponents only warn") {
  const std::string text =
      "grid.n = 16\n"
      "grid.l = 8\n"
      "model.kind = double_power\n"
      "model.p = 3\n"
      "model.q = 4.5\n"
      "model.alpha = 0.5\n";  // bound max(2, 6 - 1) = 5 sits above q
  const ParsedConfig pc = parse_config_text(text);
  REQUIRE(pc.warnings.size() == 1);
  CHECK(pc.warnings[0].find("slow-growth") != std::string::npos);
}

TEST_CASE("rendered configs parse back identically") {
  RunConfig rc;
  rc.n = 24;
  rc.l = 12.5;
  rc.model_kind = "double_power";
  rc.p = 3.25;
  rc.q = 4.75;
  rc.alpha = 1.5;
  rc.gamma_scale = 2.0;
  rc.solver.max_iters = 123;
  rc.solver.tol = 3e-7;
  rc.solver.step0 = 0.75;
  rc.solver.backtrack = 0.4;
  rc.solver.armijo = 2e-4;
  rc.solver.seed = 99;
  rc.solver.seeds = 4;
  rc.solver.init = InitKind::single_mode;
  rc.output_dir = "runs/a";
  rc.check_level = "full";
  const ParsedConfig pc = parse_config_text(render_config(rc));
  CHECK(same_config(pc.run, rc));
}

TEST_CASE("monotone tables load and reject malformed rows") {
  const std::string path = temp_path("nmx_table.txt");
  spit(path,
       "# law samples\n"
       "0.5 0.125\n"
       "1.0 1.0   # knot\n"
       "2.0 8.0\n");
  const MonotoneTable t = read_table(path);
  REQUIRE(t.s.size() == 3);
  CHECK(t.f[2] == 8.0);

  spit(path, "1.0 1.0\n");
  CHECK_THROWS_AS((void)read_table(path), ConfigError);
  spit(path, "1.0 1.0\n2.0 8.0 9.0\n");
  CHECK_THROWS_AS((void)read_table(path), ConfigError);
  spit(path, "1.0 one\n2.0 8.0\n");
  CHECK_THROWS_AS((void)read_table(path), ConfigError);
  std::remove(path.c_str());
  CHECK_THROWS_AS((void)read_table(path), ConfigError);
  CHECK_THROWS_AS((void)parse_config_file(temp_path("nmx_no_such_config.cfg")), ConfigError);
}

TEST_CASE("parser survives junk input with a typed error") {
  const std::vector<std::string> junk = {
      "\x01\x02\x03",
      "=",
      "a=b=c",
      "grid.n",
      "grid.n = 16\x7f\n",
      std::string(1, '\0') + "grid.n = 16",
      "grid.n = 99999999999999999999\n",
  };
  for (const auto& text : junk) {
    try {
      (void)parse_config_text(text);
    } catch (const ConfigError&) {
      // expected shape of failure
    }
  }
  CHECK(true);
}

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef MWINDEX_CLI_PATH
#error "MWINDEX_CLI_PATH must be defined"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string output_file;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() /
             ("mwindex_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = scratch_dir() / name;
  std::ofstream f(p);
  f << body;
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(MWINDEX_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty())
      continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const char* kPaperStyle = R"(
[projectile]
label = Na
mass = 22.98976928 amu
[target]
label = Ar
mass = 39.948 amu
[potential]
model = pure_c6
c6 = 190 au
[gas]
pressure = 1 mTorr
temperature = 300 K
[beam]
v_p = 1000
[formulas]
list = corrected, forrey
[output]
format = csv
)";

} // namespace

TEST_CASE("index command on a paper-style run") {
  const auto cfg = write_config("paper.ini", kPaperStyle);
  const auto out = scratch_dir() / "paper_out.csv";
  const int rc =
      run_cli("--config " + cfg.string() + " index --output " + out.string());
  REQUIRE(rc == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 3); // header + 2 formulas
  CHECK(rows[0] ==
        std::vector<std::string>{"v_p", "formula", "re_n_minus_1",
                                 "im_n_minus_1", "rho", "quad_error",
                                 "lambda_over_spacing", "range_over_spacing",
                                 "mean_field", "validity_pass"});
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double re = std::stod(rows[r][2]);
    const double im = std::stod(rows[r][3]);
    CHECK(re > 1e-11);
    CHECK(re < 1e-9);
    CHECK(im > 1e-11);
    CHECK(im < 1e-9);
    CHECK(rows[r][9] == "true");
  }
}

TEST_CASE("empty formula list is a config error") {
  std::string body = kPaperStyle;
  const auto pos = body.find("list = corrected, forrey");
  body.replace(pos, std::string("list = corrected, forrey").size(),
               "list = ,");
  const auto cfg = write_config("empty_formulas.ini", body);
  CHECK(run_cli("--config " + cfg.string() + " index") == 2);
}

TEST_CASE("missing config file is a config error") {
  CHECK(run_cli("--config /nonexistent/nowhere.ini index") == 2);
}

TEST_CASE("index output is byte-identical across runs") {
  const auto cfg = write_config("paper2.ini", kPaperStyle);
  const auto o1 = scratch_dir() / "det1.csv";
  const auto o2 = scratch_dir() / "det2.csv";
  REQUIRE(run_cli("--config " + cfg.string() + " index --seed 42 --output " +
                  o1.string()) == 0);
  REQUIRE(run_cli("--config " + cfg.string() + " index --seed 42 --output " +
                  o2.string()) == 0);
  const auto b1 = slurp(o1);
  REQUIRE(!b1.empty());
  CHECK(b1 == slurp(o2));
}

TEST_CASE("two-point scan emits exactly two data rows per formula") {
  std::string body = kPaperStyle;
  const auto pos = body.find("v_p = 1000");
  body.replace(pos, std::string("v_p = 1000").size(),
               "scan_min = 500\nscan_max = 2000\nscan_points = 2");
  const auto cfg = write_config("scan2.ini", body);
  const auto out = scratch_dir() / "scan2.csv";
  REQUIRE(run_cli("--config " + cfg.string() + " scan --output " +
                  out.string()) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 5); // header + 2 velocities x 2 formulas
  CHECK(rows[0] == std::vector<std::string>{"v_p", "formula", "re_n_minus_1",
                                            "im_n_minus_1", "sigma_eff"});
  CHECK(rows[1][0] == "500");
  CHECK(rows[3][0] == "2000");
}

TEST_CASE("scan without a scan block is a config error") {
  const auto cfg = write_config("noscan.ini", kPaperStyle);
  CHECK(run_cli("--config " + cfg.string() + " scan") == 2);
}

TEST_CASE("cold C6 scan follows the v^-7/5 law") {
  const char* body = R"(
[projectile]
label = Na
mass = 22.98976928 amu
[target]
label = Na
mass = 22.98976928 amu
[potential]
model = pure_c6
c6 = 1556 au
[gas]
density = 3.2e19 si
temperature = 0.012 K
[beam]
scan_min = 1000
scan_max = 10000
scan_points = 12
scan_spacing = log
[formulas]
list = corrected
[output]
format = csv
)";
  const auto cfg = write_config("c6scan.ini", body);
  const auto out = scratch_dir() / "c6scan.csv";
  REQUIRE(run_cli("--config " + cfg.string() + " scan --output " +
                  out.string()) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 13);
  // Least-squares slope of log Im(n-1) vs log v_p.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = 12;
  for (int i = 1; i <= n; ++i) {
    const double x = std::log(std::stod(rows[i][0]));
    const double y = std::log(std::stod(rows[i][3]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == Catch::Approx(-1.4).margin(0.02));
}

TEST_CASE("Lennard-Jones scan exposes glory oscillations") {
  // Im(n-1) k_p against the v^{-2/5} trend over one decade: the glory
  // interference leaves at least 2 extrema. Rest targets keep each scan
  // point a single solver run.
  const char* body = R"(
[projectile]
label = Na
mass = 22.98976928 amu
[target]
label = Ar
mass = 39.948 amu
# 12-6 well: depth 72.9 K, minimum at 4.99 angstrom (Na-Ar scale)
[potential]
model = lennard_jones
c6 = 3.1079e-77 si
c12 = 2.3989e-133 si
[gas]
density = 3.2e19 si
distribution = delta_rest
[beam]
scan_min = 500
scan_max = 5000
scan_points = 40
scan_spacing = log
[formulas]
list = corrected
[solver]
phase_tol = 1e-5
[output]
format = csv
)";
  const auto cfg = write_config("ljglory.ini", body);
  const auto out = scratch_dir() / "ljglory.csv";
  REQUIRE(run_cli("--config " + cfg.string() + " scan --jobs 2 --output " +
                  out.string()) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 41);
  std::vector<double> detrended;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double v = std::stod(rows[r][0]);
    const double im = std::stod(rows[r][3]);
    // Im(n-1) k_p ~ sigma(v) / v; remove the v^{-2/5} trend of sigma.
    detrended.push_back(im * v * std::pow(v, 0.4));
  }
  int extrema = 0;
  for (std::size_t i = 1; i + 1 < detrended.size(); ++i)
    if ((detrended[i] - detrended[i - 1]) *
            (detrended[i + 1] - detrended[i]) <
        0.0)
      ++extrema;
  CHECK(extrema >= 2);
}

TEST_CASE("validate passes by default and fails under a tightened override") {
  const auto cfg = write_config("paper3.ini", kPaperStyle);
  const auto out = scratch_dir() / "validate.csv";
  CHECK(run_cli("--config " + cfg.string() + " validate --output " +
                out.string()) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] ==
        std::vector<std::string>{"check", "status", "value", "tolerance"});
  for (std::size_t r = 1; r < rows.size(); ++r)
    CHECK(rows[r][1] == "pass");
  // A crushing tolerance override must fail with named checks.
  const std::string cmd = "MWINDEX_TOL_OVERRIDE=1e-9 " +
                          std::string(MWINDEX_CLI_PATH) + " --config " +
                          cfg.string() + " validate --output " +
                          out.string() + " > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 1);
  const auto failed = read_csv(out);
  bool any_fail = false;
  for (std::size_t r = 1; r < failed.size(); ++r)
    any_fail = any_fail || failed[r][1] == "fail";
  CHECK(any_fail);
}

TEST_CASE("estimate command") {
  SECTION("nitrogen optics anchor") {
    std::string body = kPaperStyle;
    body += "\n[estimate]\nalpha_au = 11.9\nc6_au = 190\n";
    const auto cfg = write_config("estimate.ini", body);
    const auto out = scratch_dir() / "estimate.csv";
    REQUIRE(run_cli("--config " + cfg.string() + " estimate --output " +
                    out.string()) == 0);
    const auto rows = read_csv(out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "light");
    CHECK(std::stod(rows[1][2]) == Catch::Approx(1.1e-29).epsilon(0.03));
    CHECK(rows[2][0] == "matter");
    const double m = std::stod(rows[2][2]);
    CHECK(m > 0.4e-30);
    CHECK(m < 8e-30);
  }
  SECTION("zero polarizability gives a zero optics entry") {
    std::string body = kPaperStyle;
    body += "\n[estimate]\nalpha_au = 0\n";
    const auto cfg = write_config("estimate0.ini", body);
    const auto out = scratch_dir() / "estimate0.csv";
    REQUIRE(run_cli("--config " + cfg.string() + " estimate --output " +
                    out.string()) == 0);
    const auto rows = read_csv(out);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][2]) == 0.0);
  }
  SECTION("missing inputs are a config error") {
    const auto cfg = write_config("estimate_missing.ini", kPaperStyle);
    CHECK(run_cli("--config " + cfg.string() + " estimate") == 2);
  }
}

TEST_CASE("numerical failures exit with code 3") {
  // Absurd C6 at high velocity drives the partial-wave count past the
  // hard cap.
  const char* body = R"(
[projectile]
label = X
mass = 23 amu
[target]
label = X
mass = 23 amu
[potential]
model = pure_c6
c6 = 1e7 au
[gas]
density = 1e19 si
distribution = delta_rest
[beam]
v_p = 100000
[formulas]
list = corrected
)";
  const auto cfg = write_config("blowup.ini", body);
  CHECK(run_cli("--config " + cfg.string() + " index") == 3);
}

TEST_CASE("json output mirrors the csv rows") {
  std::string body = kPaperStyle;
  const auto cfg = write_config("json.ini", body);
  const auto out = scratch_dir() / "out.json";
  REQUIRE(run_cli("--config " + cfg.string() + " index --format json "
                  "--output " +
                  out.string()) == 0);
  const auto text = slurp(out);
  CHECK(text.find("\"formula\": \"corrected\"") != std::string::npos);
  CHECK(text.find("\"re_n_minus_1\": ") != std::string::npos);
  CHECK(text.front() == '[');
}

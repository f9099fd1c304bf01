// End-to-end tests of the wprsec command-line tool: exit codes, CSV
// layouts, config-file handling and manifest-based reruns. The binary
// path is injected at compile time as WPRSEC_BIN.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path& scratch_root() {
  static const fs::path root = [] {
    std::string tmpl = (fs::temp_directory_path() / "wprsec-cli-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr)
      throw std::runtime_error("cannot create scratch directory");
    return fs::path(tmpl);
  }();
  return root;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = scratch_root() / name;
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

CmdResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out_file = dir / "_stdout.txt";
  const fs::path err_file = dir / "_stderr.txt";
  const std::string cmd = std::string(WPRSEC_BIN) + " " + args + " >" +
                          out_file.string() + " 2>" + err_file.string();
  const int raw = std::system(cmd.c_str());
  CmdResult r;
  if (raw != -1 && WIFEXITED(raw)) r.code = WEXITSTATUS(raw);
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  return fields;
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream out(p);
  out << body;
}

constexpr const char* kSingleHeader =
    "p_s_dbm,p_d_dbm,algorithm,trial,seed,rho_star,secrecy_rate_bps_hz,"
    "relay_power_mw,objective,iterations,status";
constexpr const char* kSweepHeader =
    "p_s_dbm,p_d_dbm,algorithm,trial,secrecy_rate_bps_hz,relay_power_mw,"
    "rho_star,wall_time_s,status";

}  // namespace

TEST_CASE("usage: help exits 0, bad invocations exit 64") {
  const fs::path dir = fresh_dir("usage");
  CHECK(run_cli("--help", dir).code == 0);
  CHECK(run_cli("", dir).code == 64);                  // subcommand required
  CHECK(run_cli("--no-such-flag single", dir).code == 64);
  CHECK(run_cli("single --alg bogus", dir).code == 64);
  CHECK(run_cli("single --trial -3", dir).code == 64);
  const CmdResult r = run_cli("single --alg bogus", dir);
  CHECK(r.err.find("bogus") != std::string::npos);
}

TEST_CASE("single: exact CSV header, sane values, deterministic output") {
  const fs::path dir = fresh_dir("single");
  const CmdResult r = run_cli("single", dir);
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == kSingleHeader);
  const auto f = fields_of(lines[1]);
  REQUIRE(f.size() == 11);
  CHECK(f[0] == "40");
  CHECK(f[1] == "40");
  CHECK(f[2] == "goa");
  CHECK(f[3] == "0");
  CHECK(f[4] == "1");
  const double rho = std::stod(f[5]);
  CHECK(rho >= 0.0);
  CHECK(rho <= 1.0);
  CHECK(std::stod(f[6]) >= 0.0);
  CHECK(std::stod(f[8]) >= 1.0);  // the optimized objective never dips below 1
  CHECK(f[10] == "ok");
  CHECK(r.err.find("wall_time_s=") != std::string::npos);

  // Same invocation, same bytes on stdout.
  CHECK(run_cli("single", dir).out == r.out);
  // The seed override lands in the seed column and changes the draw.
  const CmdResult r9 = run_cli("--seed 9 single", dir);
  REQUIRE(r9.code == 0);
  CHECK(fields_of(lines_of(r9.out)[1])[4] == "9");
  CHECK(r9.out != r.out);
}

TEST_CASE("single: fixed-power baseline spends its configured budget") {
  const fs::path dir = fresh_dir("single-epr");
  const CmdResult r = run_cli("single --alg epr", dir);
  REQUIRE(r.code == 0);
  const auto f = fields_of(lines_of(r.out)[1]);
  CHECK(std::stod(f[7]) == doctest::Approx(19952.623149688796).epsilon(1e-9));
  CHECK(std::stod(f[5]) == 0.0);
}

TEST_CASE("config file errors map to documented exit codes") {
  const fs::path dir = fresh_dir("config-errors");

  CmdResult r = run_cli("--config " + (dir / "absent.json").string() + " single",
                        dir);
  CHECK(r.code == 1);  // unreadable file is an I/O failure

  write_file(dir / "broken.json", "{ not json");
  r = run_cli("--config " + (dir / "broken.json").string() + " single", dir);
  CHECK(r.code == 64);
  CHECK(r.err.find("invalid JSON") != std::string::npos);

  write_file(dir / "unknown.json", R"({"n_r": 2, "p_s_grid_db": [10]})");
  r = run_cli("--config " + (dir / "unknown.json").string() + " single", dir);
  CHECK(r.code == 64);
  CHECK(r.err.find("p_s_grid_db") != std::string::npos);

  write_file(dir / "badeta.json", R"({"eta": 1.5})");
  r = run_cli("--config " + (dir / "badeta.json").string() + " single", dir);
  CHECK(r.code == 64);
  CHECK(r.err.find("eta") != std::string::npos);

  write_file(dir / "badtype.json", R"({"n_trials": "many"})");
  r = run_cli("--config " + (dir / "badtype.json").string() + " single", dir);
  CHECK(r.code == 64);
  CHECK(r.err.find("n_trials") != std::string::npos);
}

TEST_CASE("sweep: CSV layout and manifest rerun reproduce the numbers") {
  const fs::path dir = fresh_dir("sweep");
  write_file(dir / "cfg.json", R"({
    "p_s_grid_dbm": [20], "p_d_grid_dbm": [40],
    "algorithms": ["goa", "epr"], "n_trials": 2, "seed": 3
  })");
  const fs::path out_a = dir / "a";
  const CmdResult ra = run_cli("--config " + (dir / "cfg.json").string() +
                                   " --out " + out_a.string() + " sweep",
                               dir);
  REQUIRE(ra.code == 0);
  CHECK(ra.out.find("wrote 4 records") != std::string::npos);
  CHECK(ra.out.find("4 ok") != std::string::npos);

  const auto lines_a = lines_of(slurp(out_a / "sweep.csv"));
  REQUIRE(lines_a.size() == 5);
  CHECK(lines_a[0] == kSweepHeader);
  for (size_t i = 1; i < lines_a.size(); ++i) {
    const auto f = fields_of(lines_a[i]);
    REQUIRE(f.size() == 9);
    CHECK(f[0] == "20");
    CHECK(f[1] == "40");
    CHECK(f[8] == "ok");
  }
  REQUIRE(fs::exists(out_a / "manifest.json"));

  // Feeding the manifest back reproduces every value except wall time.
  const fs::path out_b = dir / "b";
  const CmdResult rb = run_cli("--config " + (out_a / "manifest.json").string() +
                                   " --out " + out_b.string() + " sweep",
                               dir);
  REQUIRE(rb.code == 0);
  const auto lines_b = lines_of(slurp(out_b / "sweep.csv"));
  REQUIRE(lines_b.size() == lines_a.size());
  for (size_t i = 1; i < lines_a.size(); ++i) {
    const auto fa = fields_of(lines_a[i]);
    const auto fb = fields_of(lines_b[i]);
    for (size_t j = 0; j < fa.size(); ++j)
      if (j != 7) CHECK(fa[j] == fb[j]);  // column 7 is wall_time_s
  }
}

TEST_CASE("fig2: profile rows plus a final optimum row, single-antenna forced") {
  const fs::path dir = fresh_dir("fig2");
  const fs::path out = dir / "out";
  // Default config has two relay antennas; the subcommand must still work.
  const CmdResult r =
      run_cli("--out " + out.string() + " fig2 --points 101", dir);
  REQUIRE(r.code == 0);
  const auto lines = lines_of(slurp(out / "fig2.csv"));
  REQUIRE(lines.size() == 103);  // header + grid + optimum
  CHECK(lines[0] == "rho,r_sr,dr_sr_drho");
  double prev = -1.0;
  for (size_t i = 1; i + 1 < lines.size(); ++i) {
    const auto f = fields_of(lines[i]);
    REQUIRE(f.size() == 3);
    const double rho = std::stod(f[0]);
    CHECK(rho > prev);
    prev = rho;
  }
  CHECK(prev == 1.0);
  const auto last = fields_of(lines.back());
  const double rho_star = std::stod(last[0]);
  CHECK(rho_star >= 0.0);
  CHECK(rho_star <= 1.0);
  // The optimum's rate is the best of the profile.
  double best = 0.0;
  for (size_t i = 1; i + 1 < lines.size(); ++i)
    best = std::max(best, std::stod(fields_of(lines[i])[1]));
  CHECK(std::stod(last[1]) >= best - 1e-9);
}

TEST_CASE("timing: one row per algorithm per accuracy") {
  const fs::path dir = fresh_dir("timing");
  write_file(dir / "cfg.json",
             R"({"timing_eps_grid": [1e-2], "timing_trials": 1})");
  const fs::path out = dir / "out";
  const CmdResult r = run_cli("--config " + (dir / "cfg.json").string() +
                                  " --out " + out.string() + " timing",
                              dir);
  REQUIRE(r.code == 0);
  const auto lines = lines_of(slurp(out / "timing.csv"));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "algorithm,epsilon,n_trials,mean_wall_s,mean_secrecy");
  CHECK(fields_of(lines[1])[0] == "goa");
  CHECK(fields_of(lines[2])[0] == "loa");
  for (int i : {1, 2}) {
    const auto f = fields_of(lines[i]);
    REQUIRE(f.size() == 5);
    CHECK(std::stod(f[1]) == 0.01);
    CHECK(f[2] == "1");
    CHECK(std::stod(f[3]) > 0.0);
  }
}

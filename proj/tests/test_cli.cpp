#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GENMM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<double> split_row(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("genmm_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("validate: exit codes") {
  CHECK(run_cli("validate") == 0);
  CHECK(run_cli("validate --samples 10 --seed 7") == 0);
  CHECK(run_cli("validate --tol 0") == 1);
  CHECK(run_cli("validate --samples 0") == 2);
  CHECK(run_cli("no-such-command") == 2);
  CHECK(run_cli("simulate") == 2);  // missing required --out
}

TEST_CASE("simulate: MM CSV shape and monotonicity") {
  TempDir tmp;
  const fs::path out = tmp.path / "mm.csv";
  REQUIRE(run_cli("simulate --scheme mm --tau 0.25 --out " + out.string()) == 0);
  const auto lines = read_lines(out);
  REQUIRE(lines.size() == 62);  // header + 61 rows
  CHECK(lines[0] == "t,q,p,theta,E,S");

  const auto first = split_row(lines[1]);
  CHECK(first[0] == 0.0);
  CHECK(first[1] == 1.0);
  CHECK(first[2] == 1.0);
  CHECK(first[3] == 1.0);

  double prev_e = 1e300, prev_s = -1e300;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = split_row(lines[i]);
    REQUIRE(row.size() == 6);
    CHECK(row[4] <= prev_e + 1e-12);
    CHECK(row[5] >= prev_s - 1e-12);
    prev_e = row[4];
    prev_s = row[5];
  }
}

TEST_CASE("simulate: byte-stable output") {
  TempDir tmp;
  const fs::path a = tmp.path / "a.csv", b = tmp.path / "b.csv";
  REQUIRE(run_cli("simulate --scheme euler --tau 0.5 --out " + a.string()) == 0);
  REQUIRE(run_cli("simulate --scheme euler --tau 0.5 --out " + b.string()) == 0);
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().find("\r") == std::string::npos);  // LF endings
}

TEST_CASE("simulate: reference scheme on a dense grid") {
  TempDir tmp;
  const fs::path out = tmp.path / "ref.csv";
  // Short horizon and loose max step keep this quick.
  REQUIRE(run_cli("simulate --scheme reference --T 1 --max-step 1e-3 --grid-dt 0.01 "
                  "--out " +
                  out.string()) == 0);
  const auto lines = read_lines(out);
  REQUIRE(lines.size() == 102);  // header + 101 samples
  const auto last = split_row(lines.back());
  CHECK(last[0] == 1.0);
  // Reference conserves energy.
  CHECK(last[4] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("compare: column layout") {
  TempDir tmp;
  const fs::path out = tmp.path / "cmp.csv";
  REQUIRE(run_cli("compare --tau 0.25 --T 2 --max-step 1e-3 --out " + out.string()) == 0);
  const auto lines = read_lines(out);
  REQUIRE(lines.size() == 10);  // header + 9 nodes (T=2, tau=0.25 -> 8 steps)
  CHECK(lines[0] ==
        "t,q_mm,p_mm,theta_mm,q_eu,p_eu,theta_eu,q_ref,p_ref,theta_ref,E_mm,E_eu,S_mm,"
        "S_eu");
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(split_row(lines[i]).size() == 14);
  // First row: all three trajectories start at the data.
  const auto r0 = split_row(lines[1]);
  for (int k : {1, 4, 7}) CHECK(r0[k] == 1.0);
}

TEST_CASE("converge: rows plus trailing slopes comment") {
  TempDir tmp;
  const fs::path out = tmp.path / "conv.csv";
  REQUIRE(run_cli("converge --nmin 1 --nmax 3 --fit-nmin 1 --fit-nmax 3 --T 2 "
                  "--max-step 1e-3 --out " +
                  out.string()) == 0);
  const auto lines = read_lines(out);
  REQUIRE(lines.size() == 5);  // header + 3 rows + slopes
  CHECK(lines[0] == "tau,err_theta_mm,err_theta_euler,err_E_mm,err_E_euler");
  CHECK(lines.back().rfind("# slopes:", 0) == 0);
  const auto r = split_row(lines[1]);
  REQUIRE(r.size() == 5);
  CHECK(r[0] == 0.5);
}

TEST_CASE("config file provides defaults, flags override") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "tau=0.5\nT=2\n";
  }
  const fs::path a = tmp.path / "a.csv", b = tmp.path / "b.csv";
  REQUIRE(run_cli("simulate --scheme euler --config " + cfg.string() + " --out " +
                  a.string()) == 0);
  CHECK(read_lines(a).size() == 6);  // header + 5 nodes (T=2, tau=0.5)
  REQUIRE(run_cli("simulate --scheme euler --config " + cfg.string() +
                  " --tau 0.25 --out " + b.string()) == 0);
  CHECK(read_lines(b).size() == 10);  // flag overrides config: 8 steps
}

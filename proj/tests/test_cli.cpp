#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("hf_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int counter;
};
int TempDir::counter = 0;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
  fs::path out = dir / "stdout.txt";
  fs::path err = dir / "stderr.txt";
  std::string cmd = std::string(HF_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                    err.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

// Parse one strict CSV line: every cell must consume its full extent as a
// double (the writer emits shortest round-trip forms).
std::vector<double> parse_csv_line(const std::string& line) {
  std::vector<double> vals;
  size_t pos = 0;
  while (pos <= line.size()) {
    size_t comma = line.find(',', pos);
    std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos);
    double v = 0.0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    REQUIRE(res.ec == std::errc());
    REQUIRE(res.ptr == cell.data() + cell.size());
    vals.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return vals;
}

std::vector<std::string> split_lines(const std::string& body) {
  std::vector<std::string> lines;
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("catalog listing names every registered bundle") {
  TempDir tmp;
  RunResult r = run_cli("catalog list", tmp.path);
  CHECK(r.exit_code == 0);
  for (const char* name : {"flat_unitary_r2", "nilpotent_higgs_r2", "conformal_line",
                           "oscillating_line", "split_sum_r2"})
    CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("the first-Chern probe converges to -1 and flags short cutoffs") {
  TempDir tmp;
  RunResult good = run_cli("chern-p1", tmp.path);
  CHECK(good.exit_code == 0);
  double v = std::strtod(good.out.c_str(), nullptr);
  CHECK(std::abs(v + 1.0) < 1e-3);

  RunResult short_cut = run_cli("chern-p1 --radius 1", tmp.path);
  CHECK(short_cut.exit_code == 1);
  double vs = std::strtod(short_cut.out.c_str(), nullptr);
  CHECK(std::abs(vs + 0.5) < 1e-9);

  RunResult coarse = run_cli("chern-p1 --nodes 8", tmp.path);
  CHECK(coarse.err.find("coarse") != std::string::npos);
}

TEST_CASE("flow on the flat bundle converges instantly") {
  TempDir tmp;
  fs::path cfg = tmp.path / "cfg.json";
  fs::path out = tmp.path / "run";
  write_file(cfg, std::string("{\"entry\": \"flat_unitary_r2\", \"grid_size\": 16, "
                              "\"output_dir\": \"") +
                      out.string() + "\"}");
  RunResult r = run_cli("flow --config " + cfg.string(), tmp.path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("converged") != std::string::npos);

  auto lines = split_lines(slurp(out / "series.csv"));
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == "t,L,K_l1,K_l2,K_linf,trS_max,minEigH,superineq_lhs,superineq_rhs");
  auto row = parse_csv_line(lines[1]);
  REQUIRE(row.size() == 9);
  CHECK(row[0] == 0.0);
  CHECK(row[4] == 0.0);  // K_linf

  nlohmann::json summary = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(summary.at("entry") == "flat_unitary_r2");
  CHECK(summary.at("grid_size") == 16);
  CHECK(summary.at("termination") == "residual_target");
  CHECK(summary.at("steps") == 0);
  CHECK(summary.at("final_residual").get<double>() == 0.0);
  CHECK(summary.contains("wall_time_seconds"));
  CHECK(summary.contains("final_t"));
}

TEST_CASE("interrupted runs exit with code 2 and identical reruns are bit-stable") {
  TempDir tmp;
  auto config = [&](const fs::path& out) {
    return std::string("{\"entry\": \"nilpotent_higgs_r2\", \"grid_size\": 16, \"flow\": "
                       "{\"t_max\": 0.1, \"residual_target\": 1e-9}, \"output_dir\": \"") +
           out.string() + "\"}";
  };
  fs::path cfg1 = tmp.path / "cfg1.json";
  fs::path cfg2 = tmp.path / "cfg2.json";
  write_file(cfg1, config(tmp.path / "run1"));
  write_file(cfg2, config(tmp.path / "run2"));

  RunResult r1 = run_cli("flow --config " + cfg1.string(), tmp.path);
  RunResult r2 = run_cli("flow --config " + cfg2.string(), tmp.path);
  CHECK(r1.exit_code == 2);
  CHECK(r2.exit_code == 2);
  CHECK(r1.out.find("hit t_max") != std::string::npos);

  std::string csv1 = slurp(tmp.path / "run1" / "series.csv");
  std::string csv2 = slurp(tmp.path / "run2" / "series.csv");
  REQUIRE_FALSE(csv1.empty());
  CHECK(csv1 == csv2);

  // The series reads back as strictly advancing, descending data.
  auto lines = split_lines(csv1);
  REQUIRE(lines.size() > 10);
  double prev_t = -1.0, prev_l = 1e300;
  for (size_t i = 1; i < lines.size(); ++i) {
    auto row = parse_csv_line(lines[i]);
    REQUIRE(row.size() == 9);
    CHECK(row[0] > prev_t);
    CHECK(row[1] < prev_l);
    prev_t = row[0];
    prev_l = row[1];
  }

  nlohmann::json summary = nlohmann::json::parse(slurp(tmp.path / "run1" / "summary.json"));
  CHECK(summary.at("termination") == "t_max");
  CHECK(summary.at("steps").get<long long>() > 0);
}

TEST_CASE("config schema is strict") {
  TempDir tmp;
  fs::path cfg = tmp.path / "cfg.json";

  write_file(cfg, "{\"entry\": \"flat_unitary_r2\", \"grid\": 16}");
  RunResult unknown_key = run_cli("flow --config " + cfg.string(), tmp.path);
  CHECK(unknown_key.exit_code == 1);
  CHECK(unknown_key.err.find("unknown key 'grid'") != std::string::npos);

  write_file(cfg, "{\"grid_size\": 16}");
  RunResult missing = run_cli("flow --config " + cfg.string(), tmp.path);
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("entry") != std::string::npos);

  write_file(cfg, "{\"entry\": \"no_such_bundle\"}");
  RunResult unknown_entry = run_cli("flow --config " + cfg.string(), tmp.path);
  CHECK(unknown_entry.exit_code == 1);
  CHECK(unknown_entry.err.find("no_such_bundle") != std::string::npos);

  write_file(cfg, "{\"entry\": \"flat_unitary_r2\", \"flow\": {\"dt_initial\": 0}}");
  RunResult bad_dt = run_cli("flow --config " + cfg.string(), tmp.path);
  CHECK(bad_dt.exit_code == 1);

  write_file(cfg, "{\"entry\": \"flat_unitary_r2\", \"functional\": {\"nodes\": 2}}");
  RunResult bad_nodes = run_cli("flow --config " + cfg.string(), tmp.path);
  CHECK(bad_nodes.exit_code == 1);

  write_file(cfg, "not json");
  RunResult malformed = run_cli("flow --config " + cfg.string(), tmp.path);
  CHECK(malformed.exit_code == 1);

  RunResult no_args = run_cli("flow", tmp.path);
  CHECK(no_args.exit_code != 0);
}

TEST_CASE("functional subcommand agrees with itself") {
  TempDir tmp;
  fs::path cfg = tmp.path / "cfg.json";
  write_file(cfg, "{\"entry\": \"conformal_line\", \"grid_size\": 32}");

  RunResult same = run_cli(
      "functional --config " + cfg.string() + " --h base --k base", tmp.path);
  CHECK(same.exit_code == 0);
  CHECK(same.out.find("diff=0\n") != std::string::npos);

  // Overall scaling is invisible at c = 0: both evaluations give zero.
  RunResult scaled = run_cli(
      "functional --config " + cfg.string() + " --h scale:2 --k base", tmp.path);
  CHECK(scaled.exit_code == 0);
  auto lines = split_lines(scaled.out);
  REQUIRE(lines.size() == 3);
  double path_v = std::strtod(lines[0].c_str() + 5, nullptr);       // "path="
  double closed_v = std::strtod(lines[1].c_str() + 12, nullptr);    // "closed_form="
  CHECK(std::abs(path_v) < 1e-9);
  CHECK(std::abs(closed_v) < 1e-9);

  // A short flow leg gives a strictly negative value both ways.
  write_file(cfg, "{\"entry\": \"nilpotent_higgs_r2\", \"grid_size\": 16}");
  RunResult flowed = run_cli(
      "functional --config " + cfg.string() + " --h flow:0.1 --k base", tmp.path);
  CHECK(flowed.exit_code == 0);
  auto flines = split_lines(flowed.out);
  REQUIRE(flines.size() == 3);
  double fp = std::strtod(flines[0].c_str() + 5, nullptr);
  CHECK(fp < -1.0);

  RunResult bad_spec = run_cli(
      "functional --config " + cfg.string() + " --h nonsense --k base", tmp.path);
  CHECK(bad_spec.exit_code == 1);
  CHECK(bad_spec.err.find("not understood") != std::string::npos);
}

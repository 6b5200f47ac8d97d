#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace lrfim;

namespace {

struct Run {
  int rc = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "lrfim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.rc = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("lrfim_test_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& f) {
  std::ifstream in(f, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string meta(const fs::path& f, const std::string& key) {
  std::ifstream in(f);
  std::string line;
  const std::string tag = "# " + key + ": ";
  while (std::getline(in, line))
    if (line.rfind(tag, 0) == 0) return line.substr(tag.size());
  return {};
}

/// Data rows after the header, split on commas.
std::vector<std::vector<std::string>> rows(const fs::path& f) {
  std::ifstream in(f);
  std::string line;
  std::vector<std::vector<std::string>> out;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    out.push_back(cells);
  }
  return out;
}

}  // namespace

TEST_CASE("exit codes") {
  const fs::path d = fresh_dir("codes");
  CHECK(run({"constants", "--d", "2", "--out", d.string()}).rc == cli::kOk);
  CHECK(fs::exists(d / "constants.csv"));
  CHECK(run({}).rc == cli::kUsage);
  CHECK(run({"constants", "--beta", "abc"}).rc == cli::kUsage);
  CHECK(run({"constants", "--d", "2", "--alpha", "1.5", "--out", d.string()}).rc == cli::kUsage);
  CHECK(run({"constants", "--d", "2", "--M", "1", "--out", d.string()}).rc == cli::kOk);
  CHECK(run({"constants", "--d", "2", "--M", "1", "--require-feasible", "--out", d.string()}).rc == cli::kInfeasible);
  CHECK(run({"bogus"}).rc == cli::kUnknown);
  CHECK(run({"verify", "nosuite", "--out", d.string()}).rc == cli::kUnknown);
  CHECK(run({"contours", "nothing", "--d", "2", "--side", "2", "--out", d.string()}).rc == cli::kUnknown);

  Campaign c;
  CheckReport ok;
  ok.status = CheckStatus::Pass;
  c.add(1, "t", ok);
  CHECK(cli::verify_exit_code(c) == cli::kOk);
  CheckReport bad;
  bad.lhs = 2;
  bad.rhs = 1;
  bad.status = CheckStatus::Violation;
  c.add(2, "t", bad);
  CHECK(cli::verify_exit_code(c) == cli::kVerifyFailed);
}

TEST_CASE("verify writes a campaign file") {
  const fs::path d = fresh_dir("verify");
  const Run r = run({"verify", "concentration", "--samples", "200", "--out", d.string()});
  CHECK(r.rc == cli::kOk);
  CHECK(meta(d / "verify_concentration.csv", "command") == "verify concentration");
  CHECK_FALSE(rows(d / "verify_concentration.csv").empty());
}

TEST_CASE("config precedence: defaults < config file < flags") {
  const fs::path d = fresh_dir("config");
  const fs::path cfg = d / "run.ini";
  {
    std::ofstream f(cfg);
    f << "d = 2\nbeta = 2.5\neps = 0.25\n";
  }
  REQUIRE(run({"constants", "--out", d.string()}).rc == 0);
  const std::string dflt = meta(d / "constants.csv", "params");
  CHECK(dflt.find("d=3 ") != std::string::npos);
  CHECK(dflt.find("beta=1 ") != std::string::npos);

  REQUIRE(run({"constants", "--config", cfg.string(), "--out", d.string()}).rc == 0);
  const std::string from_file = meta(d / "constants.csv", "params");
  CHECK(from_file.find("d=2 ") != std::string::npos);
  CHECK(from_file.find("beta=2.5 ") != std::string::npos);
  CHECK(from_file.find("eps=0.25 ") != std::string::npos);

  REQUIRE(run({"constants", "--config", cfg.string(), "--beta", "3", "--out", d.string()}).rc == 0);
  const std::string flagged = meta(d / "constants.csv", "params");
  CHECK(flagged.find("beta=3 ") != std::string::npos);
  CHECK(flagged.find("eps=0.25 ") != std::string::npos);
}

TEST_CASE("output directory from the environment") {
  const fs::path d = fresh_dir("env");
  ::setenv("LRFIM_OUT", d.string().c_str(), 1);
  const Run r = run({"constants", "--d", "2"});
  ::unsetenv("LRFIM_OUT");
  CHECK(r.rc == 0);
  CHECK(fs::exists(d / "constants.csv"));
  const fs::path e = fresh_dir("env_flag");
  ::setenv("LRFIM_OUT", d.string().c_str(), 1);
  CHECK(run({"constants", "--d", "2", "--out", e.string()}).rc == 0);
  ::unsetenv("LRFIM_OUT");
  CHECK(fs::exists(e / "constants.csv"));
}

TEST_CASE("meta header") {
  const fs::path d = fresh_dir("meta");
  REQUIRE(run({"constants", "--d", "2", "--seed", "17", "--out", d.string()}).rc == 0);
  const fs::path f = d / "constants.csv";
  CHECK(meta(f, "tool_version") == cli::kToolVersion);
  CHECK(meta(f, "schema_version") == std::to_string(cli::kSchemaVersion));
  CHECK(meta(f, "command") == "constants");
  CHECK(meta(f, "seed") == "17");
  CHECK(meta(f, "constants_hash").size() == 16);
}

TEST_CASE("animal with unit field") {
  const fs::path d = fresh_dir("animal");
  REQUIRE(run({"animal", "--d", "2", "--k-max", "6", "--field", "ones", "--out", d.string()}).rc == 0);
  const auto r = rows(d / "animal.csv");
  REQUIRE(r.size() == 1);
  CHECK(std::stod(r[0][3]) == doctest::Approx(0.6));
  CHECK(r[0][6] == "6");
  CHECK(run({"animal", "--d", "2", "--variant", "nope", "--out", d.string()}).rc == cli::kUsage);
}

TEST_CASE("extract then coarsen at level zero echoes the minus interior") {
  const fs::path d = fresh_dir("coarsen");
  // 5x5 box, 3x3 minus block in the middle
  std::string spins;
  for (int y = -2; y <= 2; ++y)
    for (int x = -2; x <= 2; ++x) spins += (std::abs(x) <= 1 && std::abs(y) <= 1) ? '-' : '+';
  const Run ex = run({"contours", "extract", "--d", "2", "--side", "5", "--spins", spins, "--out", d.string()});
  REQUIRE(ex.rc == 0);
  const auto er = rows(d / "contours_extract.csv");
  REQUIRE(er.size() == 1);
  const std::string line = ex.out.substr(0, ex.out.find('\n'));
  const fs::path cf = d / "g.txt";
  {
    std::ofstream f(cf);
    f << "# one contour\n" << line << '\n';
  }
  REQUIRE(run({"coarsen", "--d", "2", "--contour-file", cf.string(), "--level", "1", "--out", d.string()}).rc == 0);
  const auto cr = rows(d / "coarsen.csv");
  REQUIRE(cr.size() == 2);
  CHECK(cr[0][0] == "0");
  CHECK(cr[0][5] == "1");
  CHECK(cr[0][4] == "1");
  CHECK(run({"coarsen", "--d", "2", "--out", d.string()}).rc == cli::kUsage);
  CHECK(run({"contours", "extract", "--d", "2", "--side", "5", "--spins", "+-", "--out", d.string()}).rc ==
        cli::kUsage);
}

TEST_CASE("byte-identical reruns") {
  const std::vector<std::vector<std::string>> cmds = {
      {"constants", "--d", "2"},
      {"animal", "--d", "2", "--k-max", "4", "--field", "gaussian", "--seed", "5"},
      {"phase", "--d", "2", "--side", "3", "--beta-grid", "0.5", "--eps-grid", "0,0.5", "--sweeps", "200",
       "--burn-in", "50", "--samples", "2", "--seed", "3"},
      {"contours", "dump", "--d", "2", "--side", "3"},
      {"verify", "partitions", "--d", "2", "--instances", "20", "--seed", "4"},
  };
  for (const auto& c : cmds) {
    const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
    auto ca = c, cb = c;
    ca.insert(ca.end(), {"--out", a.string()});
    cb.insert(cb.end(), {"--out", b.string()});
    REQUIRE(run(ca).rc == 0);
    REQUIRE(run(cb).rc == 0);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
      ++files;
      CAPTURE(e.path().filename().string());
      CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    }
    CHECK(files >= 1);
  }
}

// Integration tests that drive the installed CLI binary. The harness
// passes the binary path in SELFLINK_CLI and the fixtures directory in
// SELFLINK_FIXTURES.
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string temp_path(const std::string& name) {
  return std::string("/tmp/selflink_test_") + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  const char* cli = std::getenv("SELFLINK_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "SELFLINK_CLI must point at the built binary");
  const std::string out_path = temp_path("stdout");
  const std::string err_path = temp_path("stderr");
  const std::string cmd =
      std::string(cli) + " " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

}  // namespace

TEST_CASE("compute reports sl=3 for the thrice-twisted circle") {
  const RunResult r = run_cli("compute circle_twist3.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"sl\":3") != std::string::npos);
  CHECK(r.out.find("\"oracle_sl\":3") != std::string::npos);
  CHECK(r.out.find("\"oracle_agrees\":true") != std::string::npos);
}

TEST_CASE("compute classifies the flat circle framing as nontrivial") {
  const RunResult r = run_cli("compute circle_const.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"sl\":0") != std::string::npos);
  CHECK(r.out.find("\"framing_class\":\"nontrivial\"") != std::string::npos);
}

TEST_CASE("compute emits csv when asked") {
  const RunResult r = run_cli("compute circle_twist1.json --format csv --no-oracle");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("writhe,twist,") == 0);
}

TEST_CASE("truncated JSON exits 1 with a diagnostic") {
  const std::string bad = temp_path("truncated.json");
  std::ofstream(bad) << "{\"schema_version\": 1, \"curve\": {\"kind\": \"cir";
  const RunResult r = run_cli("compute " + bad);
  CHECK(r.exit_code == 1);
  CHECK(!r.err.empty());
  CHECK(r.err.find("line") != std::string::npos);
}

TEST_CASE("missing config exits 1") {
  const RunResult r = run_cli("compute no_such_file.json");
  CHECK(r.exit_code == 1);
  CHECK(!r.err.empty());
}

TEST_CASE("invalid curve parameters are input errors") {
  const std::string bad = temp_path("badgcd.json");
  std::ofstream(bad) << R"({"schema_version":1,
    "curve": {"kind":"torus_knot","params":{"p":2,"q":4,"R":2,"r":0.5}},
    "framing": {"kind":"frenet"}})";
  const RunResult r = run_cli("compute " + bad);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("gcd") != std::string::npos);
}

TEST_CASE("oversized pushoff distance is a computation-quality failure") {
  const RunResult r = run_cli("compute trefoil_frenet.json --epsilon 2.0");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("pushoff") != std::string::npos);
}

TEST_CASE("verify frenet passes on the stock fixtures") {
  const RunResult r = run_cli("verify frenet verify_frenet.json --json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"pass\":true") != std::string::npos);
  CHECK(r.err.find("3/3") != std::string::npos);
}

TEST_CASE("verify twist-shift passes with exact integers") {
  const RunResult r = run_cli("verify twist-shift verify_twist_shift.json");
  CHECK(r.exit_code == 0);
}

TEST_CASE("verify blackboard passes") {
  const RunResult r = run_cli("verify blackboard verify_blackboard.json");
  CHECK(r.exit_code == 0);
}

TEST_CASE("verify invariance passes") {
  const RunResult r = run_cli("verify invariance verify_invariance.json");
  CHECK(r.exit_code == 0);
}

TEST_CASE("verify calugareanu at the stock resolution") {
  const RunResult r = run_cli("verify calugareanu verify_calugareanu.json --json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"suite\":\"calugareanu\"") != std::string::npos);
}

TEST_CASE("verify calugareanu at a deliberately coarse n reports its gaps") {
  const RunResult r = run_cli("verify calugareanu verify_calugareanu.json --n 64 --json");
  // coarse grids may or may not clear the tolerance; the contract is the
  // exit code split between tolerance failures (3) and success (0)
  CHECK((r.exit_code == 0 || r.exit_code == 3));
  CHECK(r.out.find("\"gap\":") != std::string::npos);
}

TEST_CASE("unknown suite exits 1 and lists the valid names") {
  const RunResult r = run_cli("verify bogus verify_frenet.json");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("calugareanu") != std::string::npos);
  CHECK(r.err.find("twist-shift") != std::string::npos);
}

TEST_CASE("converge writhe emits decreasing differences") {
  const RunResult r = run_cli("converge writhe trefoil.json --n-list 128,256,512,1024");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "n,value,diff_prev,observed_order");
  int rows = 0;
  double prev_diff = 0.0;
  std::string line;
  while (std::getline(lines, line)) {
    ++rows;
    std::istringstream cells(line);
    std::string n, value, diff, order;
    std::getline(cells, n, ',');
    std::getline(cells, value, ',');
    std::getline(cells, diff, ',');
    std::getline(cells, order, ',');
    if (rows >= 2) {
      const double d = std::abs(std::stod(diff));
      if (rows >= 3) {
        CHECK(d < prev_diff);
        CHECK(std::stod(order) >= 2.0);
      }
      prev_diff = d;
    }
  }
  CHECK(rows == 4);
}

TEST_CASE("converge twist on the twisted circle gives ones") {
  const RunResult r = run_cli("converge twist circle_twist1.json --n-list 64,128");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string n, value;
    std::getline(cells, n, ',');
    std::getline(cells, value, ',');
    CHECK(std::abs(std::stod(value) - 1.0) < 1e-8);
  }
}

TEST_CASE("converge with an empty n list exits 1") {
  const RunResult r = run_cli("converge writhe trefoil.json --n-list \"\"");
  CHECK(r.exit_code == 1);
}

TEST_CASE("converge linking needs curve2") {
  const RunResult r = run_cli("converge linking trefoil.json --n-list 64,128");
  CHECK(r.exit_code == 1);
  const RunResult ok = run_cli("converge linking hopf_pair.json --n-list 64,128");
  CHECK(ok.exit_code == 0);
}

TEST_CASE("crossings of the trefoil reports writhe -3") {
  const RunResult r = run_cli("crossings trefoil.json --direction 0,0,1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"writhe\":-3") != std::string::npos);
}

TEST_CASE("crossings of the circle is empty") {
  const RunResult r = run_cli("crossings circle.json --direction 0,0,1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"crossings\":[]") != std::string::npos);
  CHECK(r.out.find("\"writhe\":0") != std::string::npos);
}

TEST_CASE("zero direction exits 1") {
  const RunResult r = run_cli("crossings trefoil.json --direction 0,0,0");
  CHECK(r.exit_code == 1);
}

TEST_CASE("single-threaded runs are byte identical") {
  const RunResult a = run_cli("--threads 1 compute trefoil_frenet.json --no-oracle");
  const RunResult b = run_cli("--threads 1 compute trefoil_frenet.json --no-oracle");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  // the parallel path reproduces the reference numerics bit for bit
  // (only the echoed "parallel" flag differs)
  const RunResult c = run_cli("--threads 4 compute trefoil_frenet.json --no-oracle");
  auto field = [](const std::string& s, const std::string& key) {
    const size_t b0 = s.find(key);
    REQUIRE(b0 != std::string::npos);
    return s.substr(b0, s.find(',', b0) - b0);
  };
  CHECK(field(c.out, "\"writhe\":") == field(a.out, "\"writhe\":"));
  CHECK(field(c.out, "\"sl_real\":") == field(a.out, "\"sl_real\":"));
}

TEST_CASE("compute writes to a file when asked") {
  const std::string out_path = temp_path("report.json");
  std::remove(out_path.c_str());
  const RunResult r =
      run_cli("compute circle_twist1.json --no-oracle --output " + out_path);
  CHECK(r.exit_code == 0);
  CHECK(slurp(out_path).find("\"sl\":1") != std::string::npos);
}

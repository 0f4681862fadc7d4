#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef DYNHEAT_CLI_PATH
#error "DYNHEAT_CLI_PATH must point at the built binary"
#endif

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(DYNHEAT_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("cli: eval emits a config-hashed row and is deterministic") {
  REQUIRE(run("eval --dim 1 --rho 0 --a 0 --b 0 --t 1 --out /tmp/dynheat_eval_a.csv") == 0);
  REQUIRE(run("eval --dim 1 --rho 0 --a 0 --b 0 --t 1 --out /tmp/dynheat_eval_b.csv") == 0);
  const std::string a = slurp("/tmp/dynheat_eval_a.csv");
  CHECK(a == slurp("/tmp/dynheat_eval_b.csv"));
  CHECK(a.find("config_hash=") != std::string::npos);
  CHECK(a.find("D1") != std::string::npos);
}

TEST_CASE("cli: batch csv preserves row order") {
  {
    std::ofstream f("/tmp/dynheat_batch.csv");
    f << "dim,rho,a,b,t\n";
    f << "1,0,0,0,1\n1,0,2,0.5,0.25\n1,0,0.1,0.1,4\n";
  }
  REQUIRE(run("eval --csv /tmp/dynheat_batch.csv --cross-check --out /tmp/dynheat_batch_out.csv") ==
          0);
  const std::string out = slurp("/tmp/dynheat_batch_out.csv");
  const auto p1 = out.find("1,0,0,0,1,");
  const auto p2 = out.find("1,0,2,0.5,0.25,");
  const auto p3 = out.find("1,0,0.10000000000000001,0.10000000000000001,4,");
  REQUIRE(p1 != std::string::npos);
  REQUIRE(p2 != std::string::npos);
  REQUIRE(p3 != std::string::npos);
  CHECK(p1 < p2);
  CHECK(p2 < p3);
  CHECK(out.find("cross_defect") != std::string::npos);
}

TEST_CASE("cli: exit-code contract") {
  CHECK(run("eval --dim 1 --t -1 --out /dev/null 2>/dev/null") == 64);  // bad precondition
  CHECK(run("verify no-such-suite 2>/dev/null") == 64);
  CHECK(run("fujita --delta 1e-2 2>/dev/null") == 64);  // empty p list
  CHECK(run("nonsense 2>/dev/null") == 64);
  CHECK(run("verify mass --dim 1 --out /dev/null") == 0);
}

TEST_CASE("cli: verify json reports carry per-assertion detail") {
  REQUIRE(run("verify pde-residual --out /tmp/dynheat_resid.json") == 0);
  const std::string j = slurp("/tmp/dynheat_resid.json");
  CHECK(j.find("\"assertions\"") != std::string::npos);
  CHECK(j.find("\"pass\":true") != std::string::npos);
  CHECK(j.find("config_hash") != std::string::npos);
}

// Exit-code contract of the command-line tool on the canned corpus.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = LOGMEASURE_CLI;
const std::string kData = LOGMEASURE_TEST_DATA;

int run(const std::string& args, const std::string& out = "/dev/null") {
  const std::string cmd = kCli + " " + args + " >" + out + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string data(const std::string& name) { return kData + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("energy exit codes") {
  CHECK(run("energy --measure " + data("uniform.json")) == 0);
  CHECK(run("energy --measure " + data("uniform.json") + " --engine one-sided") == 0);
  CHECK(run("energy --measure " + data("step_counterexample.json") + " --engine density") == 0);
  CHECK(run("energy --measure " + data("table_with_atom.json")) == 0);  // Divergent is conclusive
  CHECK(run("energy --measure " + data("table_with_atom.json") + " --engine one-sided") == 1);
  CHECK(run("energy --measure " + data("malformed.json")) == 1);
  CHECK(run("energy --measure " + data("missing.json")) == 1);
  CHECK(run("energy --measure " + data("uniform.json") + " --engine bogus") == 1);
  CHECK(run("energy") == 1);
  // a two-level schedule cannot settle the bracket
  CHECK(run("energy --measure " + data("cantor3.json") + " --depth 4 --tol 1e-9") == 2);
}

TEST_CASE("classify exit codes") {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "logmeasure_cli_test";
  std::filesystem::create_directories(dir);
  const std::string out = (dir / "verdict.json").string();
  CHECK(run("classify --measure " + data("uniform.json"), out) == 0);
  CHECK(slurp(out).find("\"Lipschitz\"") != std::string::npos);
  CHECK(run("classify --measure " + data("cantor3.json"), out) == 0);
  CHECK(slurp(out).find("\"Holder\"") != std::string::npos);
  CHECK(run("classify --measure " + data("step_counterexample.json"), out) == 0);
  CHECK(slurp(out).find("\"LowerBoundSeries\"") != std::string::npos);
  CHECK(run("classify --measure " + data("malformed.json")) == 1);
}

TEST_CASE("other subcommands") {
  CHECK(run("cantor --K 3 --level 3") == 0);
  CHECK(run("cantor --K 1.5 --level 3") == 1);
  CHECK(run("dimension --beta 2 --n-min 1 --n-max 36") == 0);
  CHECK(run("radial --measure " + data("dirac.json") + " --center 1 0") == 0);
  CHECK(run("radial --measure " + data("uniform.json")) == 1);
  CHECK(run("velocity --measure " + data("dirac.json") + " --cells 64 --extent 1.1") == 0);
  CHECK(run("repro no-such-scenario") == 1);
  CHECK(run("repro dimension-table") == 0);
}

TEST_CASE("outputs are deterministic and written to --out-dir") {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "logmeasure_cli_det";
  std::filesystem::remove_all(dir);
  const std::string a = (dir / "a").string(), b = (dir / "b").string();
  CHECK(run("energy --measure " + data("cantor3.json") + " --out-dir " + a) == 0);
  CHECK(run("energy --measure " + data("cantor3.json") + " --out-dir " + b) == 0);
  const std::string ja = slurp(a + "/energy.json");
  CHECK_FALSE(ja.empty());
  CHECK(ja == slurp(b + "/energy.json"));
  CHECK(slurp(a + "/trace.csv").rfind("n,lower,upper\n", 0) == 0);
}

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

namespace {

std::string temp_path(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "hsblab-cli-tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

struct CliResult {
  int code = -1;
  std::string out;
};

/* Run the installed binary with the given arguments, capturing stdout. */
CliResult run_cli(const std::string& args) {
  const char* bin = std::getenv("HSBLAB_CLI");
  REQUIRE(bin != nullptr);
  CliResult r;
  std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, got);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("catalog to engine to verifier through files") {
  auto mat = temp_path("simplex.json");
  auto cert = temp_path("simplex-cert.json");

  auto zoo = run_cli("zoo simplex:n=2,lambda=2 -o " + mat);
  REQUIRE(zoo.code == 0);

  auto hsb = run_cli("hsb " + mat + " --cert-out " + cert);
  REQUIRE(hsb.code == 0);
  REQUIRE(hsb.out.find("converged") != std::string::npos);
  REQUIRE(hsb.out.find("2") != std::string::npos);  // value 2/2+1 = 2

  auto vf = run_cli("verify " + mat + " " + cert);
  REQUIRE(vf.code == 0);
}

TEST_CASE("symmetry and seed files drive the reduced master") {
  auto mat = temp_path("k4.json");
  auto dec = temp_path("k4-dec.json");
  auto sym = temp_path("k4-sym.json");
  auto cert = temp_path("k4-cert.json");

  auto zoo = run_cli("zoo sptree:graph=K4 -o " + mat + " --decomposition " + dec +
                     " --symmetry " + sym);
  REQUIRE(zoo.code == 0);
  REQUIRE(std::filesystem::exists(sym));

  auto hsb = run_cli("--mode float hsb " + mat + " --symmetry " + sym + " --seeds " +
                     dec + " --seed-rects 0 --cert-out " + cert);
  REQUIRE(hsb.code == 0);
  REQUIRE(hsb.out.find("converged") != std::string::npos);
  REQUIRE(hsb.out.find("5.66666") != std::string::npos);

  /* The expanded certificate must verify against the plain matrix. */
  auto vf = run_cli("--mode float verify " + mat + " " + cert);
  REQUIRE(vf.code == 0);
}

TEST_CASE("json mode emits machine-readable fields") {
  auto mat = temp_path("cube.json");
  REQUIRE(run_cli("zoo hypercube:n=2 -o " + mat).code == 0);
  auto r = run_cli("--json hsb " + mat);
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("\"value\"") != std::string::npos);
  REQUIRE(r.out.find("\"upper\"") != std::string::npos);
}

TEST_CASE("failure paths use distinct exit codes") {
  /* Bad invocation. */
  REQUIRE(run_cli("no-such-subcommand").code == 2);
  REQUIRE(run_cli("hsb /no/such/file.json").code == 2);

  /* Time limit produces the bracket code. */
  auto mat = temp_path("slow.json");
  REQUIRE(run_cli("zoo sptree:graph=K5 -o " + mat).code == 0);
  REQUIRE(run_cli("--mode float hsb " + mat + " --time-limit 0.01").code == 3);

  /* A certificate checked against the wrong matrix is rejected, whether the
     shapes disagree or only the entries do. */
  auto cert = temp_path("mismatch-cert.json");
  auto other = temp_path("other.json");
  auto sibling = temp_path("sibling.json");
  REQUIRE(run_cli("zoo simplex:n=2,lambda=2 -o " + mat).code == 0);
  REQUIRE(run_cli("hsb " + mat + " --cert-out " + cert).code == 0);
  REQUIRE(run_cli("zoo simplex:n=3,lambda=1 -o " + other).code == 0);
  REQUIRE(run_cli("verify " + other + " " + cert).code == 4);
  REQUIRE(run_cli("zoo simplex:n=2,lambda=1 -o " + sibling).code == 0);
  REQUIRE(run_cli("verify " + sibling + " " + cert).code == 4);
}

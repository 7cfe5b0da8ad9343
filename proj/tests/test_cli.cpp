#include "mudecay/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mudecay;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const char* kSmallGrid = R"(
[grid.e]
p1_nodes = 1
p3_nodes = 1
[grid.mu-]
p1_nodes = 1
p3_nodes = 1
[grid.mu+]
p1_nodes = 1
p3_nodes = 1
[grid.nubar-e]
nodes = 2, 1, 1
[grid.nu-mu]
nodes = 1, 1, 1
[run]
samples = 50
)";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mudecay-cli-test-" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

int run_in_process(const std::string& command, const fs::path& cfg, const fs::path& out, std::uint64_t seed = 1) {
  CliOptions o;
  o.command = command;
  o.config_path = cfg.string();
  o.out_dir = out.string();
  o.seed = seed;
  std::ostringstream log;
  return run(o, log);
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("selftest passes and writes a manifest") {
  const fs::path dir = scratch("selftest");
  const fs::path cfg = write_config(dir, kSmallGrid);
  CHECK(run_in_process("selftest", cfg, dir / "out") == kExitOk);
  const json doc = read_json(dir / "out" / "selftest.json");
  CHECK(doc["schema_version"] == kReportSchemaVersion);
  CHECK(doc["command"] == "selftest");
  CHECK(doc["config_digest"].get<std::string>().size() == 16);
  CHECK(doc["report"]["passed"] == true);
  const json manifest = read_json(dir / "out" / "run_manifest.json");
  CHECK(manifest["config_digest"] == doc["config_digest"]);
  CHECK(manifest["outputs"].size() >= 2);
  const std::string csv = slurp(dir / "out" / "selftest.csv");
  CHECK(csv.rfind("name,max_error,tolerance,passed", 0) == 0);
}

TEST_CASE("zero kernels: g0 is infinite and reported as null") {
  const fs::path dir = scratch("zero");
  const fs::path cfg = write_config(dir, std::string(kSmallGrid) + "[kernel.F]\nscale = 0\n[kernel.G]\nscale = 0\n");
  CHECK(run_in_process("bounds", cfg, dir / "out") == kExitOk);
  const json b = read_json(dir / "out" / "bounds.json")["report"]["bounds"];
  CHECK(b["g0"].is_null());
  CHECK(b["g0_infinite"] == true);
}

TEST_CASE("ground state at g = 0 is the vacuum") {
  const fs::path dir = scratch("free");
  const fs::path cfg = write_config(dir, std::string(kSmallGrid) + "[model]\ng = 0\n");
  CHECK(run_in_process("ground-state", cfg, dir / "out") == kExitOk);
  const json r = read_json(dir / "out" / "ground-state.json")["report"];
  CHECK(r["E"].get<double>() == 0.0);
  CHECK(r["vacuum_overlap"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(r.contains("perturbation"));
  CHECK(slurp(dir / "out" / "low_spectrum.csv").rfind("index,eigenvalue,Q,L_e,L_mu,vacuum_overlap", 0) == 0);
}

TEST_CASE("assemble exports triplets that match the reported dimension") {
  const fs::path dir = scratch("assemble");
  const fs::path cfg = write_config(dir, std::string(kSmallGrid) + "[model]\ng_over_g0 = 0.1\n");
  CHECK(run_in_process("assemble", cfg, dir / "out") == kExitOk);
  const json r = read_json(dir / "out" / "assemble.json")["report"];
  CHECK(r["dim"] == 64);
  std::ifstream in(dir / "out" / "h.triplets");
  CHECK(in.good());
}

TEST_CASE("config errors map to exit code 2") {
  const fs::path dir = scratch("bad");
  const fs::path cfg = write_config(dir, "[model]\nm_e = banana\n");
  CHECK(run_in_process("selftest", cfg, dir / "out") == kExitConfig);
  const fs::path cfg2 = write_config(dir, "[model]\nm_e = 3\n");
  CHECK(run_in_process("bounds", cfg2, dir / "out") == kExitConfig);
  CHECK(run_in_process("no-such-command", fs::path(), dir / "out") == kExitConfig);
}

TEST_CASE("unreachable quadrature tolerance maps to exit code 3") {
  const fs::path dir = scratch("convergence");
  const fs::path cfg =
      write_config(dir, std::string(kSmallGrid) + "[quadrature]\nhermite_nodes = 8\nvertex_rel_tol = 1e-300\n");
  CHECK(run_in_process("assemble", cfg, dir / "out") == kExitConvergence);
}

TEST_CASE("same seed gives byte-identical reports") {
  const fs::path dir = scratch("determinism");
  const fs::path cfg = write_config(dir, std::string(kSmallGrid) + "[model]\ng_over_g0 = 0.1\n");
  for (const char* cmd : {"bounds", "commutators"}) {
    CHECK(run_in_process(cmd, cfg, dir / "a", 9) == kExitOk);
    CHECK(run_in_process(cmd, cfg, dir / "b", 9) == kExitOk);
    const std::string name = std::string(cmd) + ".json";
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
  }
}

TEST_CASE("executable: flags and exit codes") {
  const std::string exe = MUDECAY_CLI_PATH;
  const fs::path dir = scratch("exe");
  const fs::path cfg = write_config(dir, kSmallGrid);
  const std::string common = " --config " + cfg.string() + " --out " + (dir / "out").string();
  CHECK(shell(exe + " selftest" + common + " --seed 3 --threads 1") == 0);
  CHECK(shell(exe + common + " selftest") == 0);
  CHECK(shell(exe + " selftest --config /nonexistent.cfg") == 2);
  CHECK(shell(exe + " selftest" + common + " --threads 0") == 2);
  CHECK(shell(exe) == 2);
  CHECK(shell(exe + " --help") == 0);
  const fs::path bad = write_config(dir, "[quadrature]\nhermite_nodes = 2\n");
  CHECK(shell(exe + " bounds --config " + bad.string() + " --out " + (dir / "out").string()) == 2);
}

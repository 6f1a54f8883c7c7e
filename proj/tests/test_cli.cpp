#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "relfid/cli.hpp"

using namespace relfid;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("scalar commands") {
  auto r = run({"fcon", "--family", "pauli_x", "--p", "0.0975"});
  CHECK(r.code == 0);
  CHECK(r.out == "0.950000\n");
  r = run({"relfid-min", "--family", "pauli_x", "--p", "1", "--f", "0.5"});
  CHECK(r.code == 0);
  CHECK(r.out == "0.000000\n");
}

TEST_CASE("exit codes") {
  CHECK(run({"fcon", "--family", "pauli_x", "--p", "2"}).code == kExitValidation);
  CHECK(run({"fcon", "--family", "pauli_x"}).code == kExitValidation);
  CHECK(run({"bogus"}).code == kExitValidation);
  CHECK(run({"relfid-min", "--family", "pauli_x", "--p", "0.1", "--f", "1e-6"}).code == kExitValidation);
  CHECK(run({"qfi", "--family", "unitary_power_x", "--at", "0.3", "--dtheta", "0.8"}).code == kExitNumerical);
  const std::string bad = (std::filesystem::temp_directory_path() / "relfid_bad_spec.json").string();
  std::ofstream(bad) << "{\"family\": \"pauli_x\",\n\"params\": {\"p\": 0.1,}}";
  const auto r = run({"fcon", "--spec", bad});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("curve csv and determinism") {
  const std::vector<std::string> args{"curve", "--family", "unitary_power_x", "--theta", "0.2", "--grid-points", "6",
                                      "--restarts", "4"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("# seed=42 restarts=4") == 0);
  CHECK(a.out.find("\nf,analytic,heuristic_upper,certified_lower,envelope\n") != std::string::npos);
}

TEST_CASE("figure2 file output") {
  const std::string path = (std::filesystem::temp_directory_path() / "relfid_fig2.csv").string();
  std::filesystem::remove(path);
  const auto r = run({"figure2", "--out", path, "--grid-points", "8", "--restarts", "4"});
  CHECK(r.code == 0);
  const std::string text = slurp(path);
  CHECK(text.find("f,pauli,unitary,eb,envelope\n") != std::string::npos);
  CHECK(text.find("eb_delta_theta=") != std::string::npos);
}

TEST_CASE("other subcommands run") {
  CHECK(run({"nuse", "--family", "unitary_power_x", "--theta", "0.2", "--n", "5"}).out.find("5,0,") !=
        std::string::npos);
  CHECK(run({"classify", "--family", "pauli_x", "--p", "0.0975", "--grid-points", "8", "--restarts", "4"}).out ==
        "constant_no_adaptivity\n");
  CHECK(run({"protosim", "--family", "pauli_x", "--p", "0.0975", "--kind", "product", "--n", "2", "--restarts",
             "2"}).code == 0);
  const auto c = run({"certify", "--family", "eb_measure_rotate", "--delta-theta", "0.5235987755982988", "--f", "0.5",
                      "--budget", "2"});
  CHECK(c.code == 0);
  CHECK(c.out.find("\"trace\"") != std::string::npos);
  CHECK(run({"concavity", "--family", "amplitude_damping", "--gamma1", "0.2", "--gamma2", "0.6", "--samples", "2000",
             "--restarts", "2"}).code == 0);
}

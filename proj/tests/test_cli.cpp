#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "seqlab/constructions.hpp"
#include "seqlab/json_io.hpp"

using namespace seqlab;

namespace {

struct CommandResult {
  int exit_code;
  std::string output;
};

// Runs a shell command, capturing stdout (stderr discarded).
CommandResult run(const std::string& command) {
  const std::string wrapped = command + " 2>/dev/null";
  FILE* pipe = popen(wrapped.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  std::array<char, 4096> buffer;
  std::size_t got;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    output.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  return CommandResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

const std::string cli = SEQLAB_CLI_PATH;

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = std::string("/tmp/seqlab_test_") + name;
  std::ofstream out(path);
  out << body;
  return path;
}

std::string strip(std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) {
    text.pop_back();
  }
  return text;
}

}  // namespace

TEST_CASE("piped generation into bounds") {
  const auto result =
      run(cli + " gen char-multiples --j 4 | " + cli + " bounds --seq - --nmax 8");
  CHECK(result.exit_code == 0);
  CHECK(strip(result.output) == "[1/4, 1/4]");
}

TEST_CASE("piped block sequence into running averages") {
  const auto result =
      run(cli + " gen thm41 | " + cli + " cesaro --seq - --at 1023");
  CHECK(result.exit_code == 0);
  CHECK(strip(result.output) == "1/3");
}

TEST_CASE("eval, witness sets and set generators") {
  const auto values = run(cli + " gen thm41 | " + cli + " eval --seq - --at 1,7,8,16");
  CHECK(values.exit_code == 0);
  CHECK(values.output == "1\n1\n0\n1\n");

  const auto jset = run(cli + " gen j-set --n 3");
  CHECK(jset.exit_code == 0);
  CHECK(jset.output.find("253") != std::string::npos);

  const auto jnk = run(cli + " gen j-set --n 3 --k 2 | " + cli +
                       " eval --seq - --at 126,127,128,129");
  CHECK(jnk.exit_code == 0);
  CHECK(jnk.output == "0\n1\n1\n0\n");

  const auto iset = run(cli + " gen i-set --n 1 | " + cli + " eval --seq - --at 3,4");
  CHECK(iset.exit_code == 0);
  CHECK(iset.output == "1\n0\n");
}

TEST_CASE("piped apply equals in-process composition") {
  const std::string op_path = write_temp(
      "op.json", R"({"kind":"compose","ops":[{"kind":"cesaro"},{"kind":"dilation","m":3}]})");
  const auto piped = run(cli + " gen alternating | " + cli + " apply --op " +
                         op_path + " --seq - | " + cli +
                         " eval --seq - --at 1,2,3,4,5,6,7");
  CHECK(piped.exit_code == 0);

  const SeqPtr in_process =
      apply(OperatorExpr::compose({OperatorExpr::cesaro(), OperatorExpr::dilation(3)}),
            alternating());
  std::string want;
  for (int k = 1; k <= 7; ++k) {
    want += to_string(eval(*in_process, k)) + "\n";
  }
  CHECK(piped.output == want);
}

TEST_CASE("lorentz and zeta output") {
  const auto verdict =
      run(cli + " gen char-multiples --j 5 | " + cli + " lorentz --seq - --nmax 16");
  CHECK(verdict.exit_code == 0);
  CHECK(strip(verdict.output) == "almost_convergent value=1/5");

  const auto blocks = run(cli + " gen thm41 | " + cli + " lorentz --seq - --nmax 8");
  CHECK(strip(blocks.output) == "not_almost_convergent gapLower=1");

  const auto zeta_rows =
      run(cli + " gen alternating | " + cli + " zeta --seq - --n 1000 --eps 1e-8");
  CHECK(zeta_rows.exit_code == 0);
  CHECK(zeta_rows.output.rfind("# seqlab-csv v1\nn,value,truncationBound,termsUsed\n", 0) == 0);
  CHECK(zeta_rows.output.find("1000,0.5") != std::string::npos);

  const auto csv = run(cli + " gen char-multiples --j 2 | " + cli +
                       " bounds --seq - --nmax 4 --csv");
  CHECK(csv.output.rfind("# seqlab-csv v1\nn,supAvg,infAvg,D\n", 0) == 0);
}

TEST_CASE("witness command") {
  const std::string x_path = write_temp("x.json", seq_to_json(witness_sequence(3)).dump());
  const std::string y_path = write_temp(
      "y.json", R"({"kind":"prefix_tail","prefix":[],"tail":{"kind":"constant","value":"0"}})");
  const std::string op_path = write_temp("sigma2.json", R"({"kind":"dilation","m":2})");
  const auto result = run(cli + " witness --x " + x_path + " --op " + op_path +
                          " --y " + y_path + " --region 253,256");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("max=1") != std::string::npos);
}

TEST_CASE("exit codes") {
  // usage error: unknown flag
  CHECK(run(cli + " bounds --bogus 1").exit_code == 2);
  // usage error: unknown claim id
  CHECK(run(cli + " verify --claim C99").exit_code == 2);
  // schema violation
  const std::string bad = write_temp("bad.json", R"({"kind":"widget"})");
  CHECK(run(cli + " eval --seq " + bad + " --at 1").exit_code == 3);
  // unsupported operator for the witness check
  const std::string ces = write_temp("cesaro.json", R"({"kind":"cesaro"})");
  const std::string zero = write_temp(
      "zero.json", R"({"kind":"prefix_tail","prefix":[],"tail":{"kind":"constant","value":"0"}})");
  CHECK(run(cli + " witness --x " + zero + " --op " + ces + " --y " + zero +
            " --region 1,5")
            .exit_code == 3);
  // guard violation: scan horizon above the cap
  const auto guard = run("SEQLAB_HORIZON_CAP=1000 " + cli +
                         " gen thm41 | SEQLAB_HORIZON_CAP=1000 " + cli +
                         " bounds --seq - --nmax 4 --scan 100000");
  CHECK(guard.exit_code == 4);
  // the cap is adjustable upward as well
  const auto lifted = run("SEQLAB_HORIZON_CAP=200000 " + cli +
                          " gen thm41 | SEQLAB_HORIZON_CAP=200000 " + cli +
                          " bounds --seq - --nmax 4 --scan 100000");
  CHECK(lifted.exit_code == 0);
}

TEST_CASE("single-claim verification") {
  const auto single = run(cli + " verify --claim C2 --overrides '{\"j\":4}' --csv");
  CHECK(single.exit_code == 0);
  CHECK(single.output.find("C2,true") != std::string::npos);

  const auto human = run(cli + " verify --claim C1");
  CHECK(human.exit_code == 0);
  CHECK(human.output.find("C1 PASS") != std::string::npos);
}

// End-to-end tests of the command-line driver located via SPACEFORM_CLI:
// exit codes, JSON/text/CSV schemas, parameter forwarding, file output, and
// byte-determinism across worker counts.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const char* exe = std::getenv("SPACEFORM_CLI");
  REQUIRE(exe != nullptr);
  const std::string cmd = std::string(exe) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t nr = 0;
  while ((nr = std::fread(buf, 1, sizeof(buf), p)) > 0) out.append(buf, nr);
  const int rc = pclose(p);
  RunResult r;
  r.out = out;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += (c == '\n');
  return n;
}

}  // namespace

TEST_CASE("list prints the catalog in both formats") {
  RunResult text = run_cli("list");
  CHECK(text.code == 0);
  CHECK(text.out.find("bicons_s3") != std::string::npos);
  CHECK(text.out.find("negative control") != std::string::npos);

  RunResult js = run_cli("list --format json");
  CHECK(js.code == 0);
  const auto j = nlohmann::json::parse(js.out);
  CHECK(j.at("schema") == "1");
  CHECK(j.at("surfaces").size() == 10);
}

TEST_CASE("verify exit codes distinguish pass, claim failure, and bad input") {
  RunResult ok = run_cli("verify small_hypersphere --counts 33 --format json");
  CHECK(ok.code == 0);
  const auto j = nlohmann::json::parse(ok.out);
  CHECK(j.at("surface") == "small_hypersphere");
  CHECK(j.at("all_pass") == true);
  CHECK(j.at("entries").size() > 5);

  CHECK(run_cli("verify clifford_perturbed --counts 33").code == 1);
  CHECK(run_cli("verify no_such_surface").code == 2);
  CHECK(run_cli("verify small_hypersphere --r 1.5").code == 2);
  CHECK(run_cli("verify small_hypersphere --m 4").code == 2);
  CHECK(run_cli("verify small_hypersphere --bogus-flag 1").code == 2);
  CHECK(run_cli("verify bicons_r3 --alpha 2.0").code == 2);
}

TEST_CASE("ode validates the constant and reports the integration summary") {
  CHECK(run_cli("ode --c1 16.2074001").code == 2);  // just below the threshold

  RunResult ok = run_cli("ode --c1 20 --tol 1e-10");
  CHECK(ok.code == 0);
  const auto j = nlohmann::json::parse(ok.out);
  CHECK(j.at("c1") == 20.0);
  CHECK(j.at("period").get<double>() > 0.0);
  CHECK(j.at("max_drift").get<double>() < 1e-7);
  CHECK(j.at("kappa_band").size() == 2);

  const std::string csv = "cli_profile_rows.csv";
  const std::string summary = "cli_profile_summary.json";
  RunResult files = run_cli("ode --c1 20 --tol 1e-8 --csv " + csv + " --out " + summary);
  CHECK(files.code == 0);
  CHECK(files.out.empty());
  const std::string rows = slurp(csv);
  CHECK(rows.rfind("u,kappa,kappa_prime,drift,sigma1,sigma2,sigma3,sigma4\n", 0) == 0);
  CHECK(count_lines(rows) > 10);
  const auto js = nlohmann::json::parse(slurp(summary));
  CHECK(js.at("period").get<double>() > 0.0);
  std::remove(csv.c_str());
  std::remove(summary.c_str());
}

TEST_CASE("export emits the documented CSV schema") {
  RunResult r = run_cli("export round_sphere_r3 --counts 9 --with-scalars");
  CHECK(r.code == 0);
  std::istringstream is(r.out);
  std::string header;
  std::getline(is, header);
  CHECK(header == "theta,phi,x1,x2,x3,f,K");
  // 9 polar nodes x 8 unique azimuthal nodes.
  CHECK(count_lines(r.out) == 1 + 9 * 8);
  std::string first;
  std::getline(is, first);
  double th, ph, x1, x2, x3, f, K;
  CHECK(std::sscanf(first.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &th, &ph, &x1,
                    &x2, &x3, &f, &K) == 7);
  CHECK(f == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(K == doctest::Approx(1.0).epsilon(1e-7));

  // Dimension forwarding: a 3-dimensional chart has three axes and five
  // ambient coordinates. Counts below the stencil minimum (9) are rejected,
  // so the smallest legal grid is used.
  RunResult r3 = run_cli("export small_hypersphere --m 3 --counts 9");
  CHECK(r3.code == 0);
  std::istringstream is3(r3.out);
  std::getline(is3, header);
  CHECK(header == "psi,theta,phi,x1,x2,x3,x4,x5");
  CHECK(count_lines(r3.out) == 1 + 9 * 9 * 8);
}

TEST_CASE("reports are byte-identical across worker counts and output modes") {
  const std::string a = run_cli("verify bicons_r3 --counts 21 --jobs 1 --format json").out;
  const std::string b = run_cli("verify bicons_r3 --counts 21 --jobs 3 --format json").out;
  CHECK_FALSE(a.empty());
  CHECK(a == b);

  const std::string path = "cli_report_out.json";
  RunResult f = run_cli("verify bicons_r3 --counts 21 --jobs 2 --format json --out " + path);
  CHECK(f.out.empty());
  CHECK(slurp(path) == a);
  std::remove(path.c_str());
}

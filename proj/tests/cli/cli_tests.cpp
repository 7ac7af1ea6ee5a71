// Integration tests that drive the installed-style binary end to end.
// argv[1] is the path to the tool; the remaining arguments go to doctest.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string g_binary;
fs::path g_workdir;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const fs::path out_file = g_workdir / "stdout.txt";
  const std::string cmd =
      g_binary + " " + args + " > " + out_file.string() + " 2> " +
      (g_workdir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  r.out = buf.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path write_config(const std::string& name, const nlohmann::json& j) {
  const fs::path p = g_workdir / name;
  std::ofstream out(p);
  out << j.dump(2);
  return p;
}

nlohmann::json derivative_config() {
  return nlohmann::json{
      {"family", {{"kind", "power_exp"}, {"d", 2}}},
      {"grid", {{"t0", 0.0}, {"dt", 0.00390625}, {"len", 1024}}},
      {"channel",
       {{"kind", "derivative"},
        {"taps",
         {{{"order", 0}, {"delay", 0.14453125}, {"gain_re", 1.5}},
          {{"order", 1}, {"delay", 0.14453125}, {"gain_re", -0.7}},
          {{"order", 2}, {"delay", 0.14453125}, {"gain_re", 0.3}}}}}},
      {"noise", {{"sigma2", 0.0}}},
      {"basis", {{"k_max", 2}, {"n_set", {2}}}}};
}

}  // namespace

TEST_CASE("identity channel: received equals the template byte for byte") {
  auto cfg = nlohmann::json{
      {"family", {{"kind", "damped_exp"}, {"tau", 1.0}}},
      {"grid", {{"t0", 0.0}, {"dt", 0.0078125}, {"len", 512}}},
      {"channel",
       {{"kind", "classical"},
        {"n", 2},
        {"taps", {{{"amplitude", 1.0}, {"phase", 0.0}, {"delay", 0.0}}}}}},
      {"noise", {{"sigma2", 0.0}}},
      {"basis", {{"k_max", 0}, {"n_set", {2}}}}};
  const fs::path cfg_path = write_config("identity.json", cfg);
  const fs::path out = g_workdir / "identity_out";
  const RunResult r = run("simulate --config " + cfg_path.string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(out / "received.csv") == slurp(out / "template.csv"));
}

TEST_CASE("seeded runs are byte identical; different seeds differ") {
  auto cfg = derivative_config();
  cfg["noise"] = {{"sigma2", 0.001}, {"seed", 77}};
  const fs::path cfg_path = write_config("noisy.json", cfg);

  const fs::path out1 = g_workdir / "rep1";
  const fs::path out2 = g_workdir / "rep2";
  REQUIRE(run("simulate --config " + cfg_path.string() + " --out " + out1.string()).exit_code == 0);
  REQUIRE(run("simulate --config " + cfg_path.string() + " --out " + out2.string()).exit_code == 0);
  CHECK(slurp(out1 / "received.csv") == slurp(out2 / "received.csv"));
  CHECK(slurp(out1 / "run_report.json") == slurp(out2 / "run_report.json"));
  CHECK(slurp(out1 / "taps.csv") == slurp(out2 / "taps.csv"));

  const fs::path out3 = g_workdir / "rep3";
  REQUIRE(run("simulate --config " + cfg_path.string() + " --out " + out3.string() +
              " --seed 99")
              .exit_code == 0);
  CHECK(slurp(out1 / "received.csv") != slurp(out3 / "received.csv"));
}

TEST_CASE("noiseless derivative channel gains round-trip through the report") {
  const fs::path cfg_path = write_config("deriv.json", derivative_config());
  const fs::path out = g_workdir / "deriv_out";
  REQUIRE(run("simulate --config " + cfg_path.string() + " --out " + out.string()).exit_code == 0);

  const auto report = nlohmann::json::parse(slurp(out / "run_report.json"));
  const double want[3] = {1.5, -0.7, 0.3};
  int checked = 0;
  for (const auto& col : report["projection"]["columns"]) {
    const int k = col["k"].get<int>();
    REQUIRE(k <= 2);
    const double re = col["beta_re"].get<double>();
    const double im = col["beta_im"].get<double>();
    CHECK(std::abs(re - want[k]) <= 1e-8 * std::abs(want[k]));
    CHECK(std::abs(im) <= 1e-8);
    ++checked;
  }
  CHECK(checked == 3);
  CHECK(report["snr"].is_null());
  CHECK(report.contains("membership"));
  CHECK_FALSE(report.contains("timing"));

  const fs::path out_t = g_workdir / "deriv_out_t";
  REQUIRE(run("simulate --config " + cfg_path.string() + " --out " + out_t.string() +
              " --timing")
              .exit_code == 0);
  CHECK(nlohmann::json::parse(slurp(out_t / "run_report.json")).contains("timing"));
}

TEST_CASE("decompose consumes a received-signal CSV") {
  const fs::path cfg_path = write_config("deriv2.json", derivative_config());
  const fs::path out = g_workdir / "deriv2_out";
  REQUIRE(run("simulate --config " + cfg_path.string() + " --out " + out.string()).exit_code == 0);

  const fs::path dec_out = g_workdir / "dec_out";
  const RunResult r = run("decompose --config " + cfg_path.string() + " --signal " +
                          (out / "received.csv").string() + " --out " + dec_out.string());
  REQUIRE(r.exit_code == 0);
  const auto proj = nlohmann::json::parse(slurp(dec_out / "projection.json"));
  const auto report = nlohmann::json::parse(slurp(out / "run_report.json"));
  // File-mediated decomposition reproduces the in-process coefficients
  // (CSV round trip is exact, solver deterministic).
  CHECK(proj["columns"] == report["projection"]["columns"]);

  // Without --out the JSON goes to stdout.
  const RunResult r2 = run("decompose --config " + cfg_path.string() + " --signal " +
                           (out / "received.csv").string());
  REQUIRE(r2.exit_code == 0);
  CHECK(nlohmann::json::parse(r2.out).contains("columns"));
}

TEST_CASE("snr subcommand") {
  auto cfg = derivative_config();
  cfg["noise"] = {{"sigma2", 0.01}, {"seed", 5}};
  const fs::path cfg_path = write_config("snrcfg.json", cfg);
  const RunResult r = run("snr --config " + cfg_path.string());
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["snr_total"].get<double>() > 0.0);
  CHECK(j["per_n"].contains("2"));
  CHECK(j["noise_form"] == "diagonal");

  // Noiseless config cannot define an SNR: config error.
  const fs::path quiet = write_config("snrquiet.json", derivative_config());
  const RunResult r2 = run("snr --config " + quiet.string());
  CHECK(r2.exit_code == 2);
  CHECK(nlohmann::json::parse(r2.out).contains("error"));
}

TEST_CASE("membership subcommand") {
  auto cfg = derivative_config();
  cfg["family"] = {{"kind", "damped_exp"}, {"tau", 100.0}};
  cfg["grid"] = {{"t0", 0.0}, {"dt", 50.0 / 511}, {"len", 512}};
  cfg["channel"]["taps"] = {{{"order", 0}, {"delay", 0.0}, {"gain_re", 1.0}}};
  const fs::path cfg_path = write_config("memcfg.json", cfg);
  const RunResult r = run("membership --config " + cfg_path.string());
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["l0"].get<int>() == 4);
  CHECK(j["passes"]["derivative_decay"].get<bool>());
}

TEST_CASE("verify subcommand: green suite, red under fault injection") {
  const fs::path out = g_workdir / "verify_out";
  const RunResult ok = run("verify --out " + out.string());
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  const auto j = nlohmann::json::parse(slurp(out / "verify.json"));
  CHECK(j["all_passed"].get<bool>());

  const RunResult bad = run("verify --perturb-psi");
  CHECK(bad.exit_code == 1);
  CHECK(bad.out.find("FAIL  energy_ops.psi1_minus_cancellation") != std::string::npos);
}

TEST_CASE("config output.dir serves as the default output directory") {
  auto cfg = derivative_config();
  const fs::path out = g_workdir / "cfg_default_out";
  cfg["output"] = {{"dir", out.string()}};
  const fs::path cfg_path = write_config("outdir.json", cfg);
  REQUIRE(run("simulate --config " + cfg_path.string()).exit_code == 0);
  CHECK(fs::exists(out / "run_report.json"));

  // Neither --out nor output.dir: config error.
  const fs::path bare = write_config("bare.json", derivative_config());
  const RunResult r = run("simulate --config " + bare.string());
  CHECK(r.exit_code == 2);
  CHECK(nlohmann::json::parse(r.out).contains("error"));
}

TEST_CASE("usage and config errors exit with code 2") {
  CHECK(run("").exit_code == 2);
  CHECK(run("simulate").exit_code == 2);
  CHECK(run("simulate --config /nonexistent.json --out " + (g_workdir / "x").string())
            .exit_code == 2);

  const fs::path bad = g_workdir / "bad.json";
  {
    std::ofstream out(bad);
    out << "{not json";
  }
  const RunResult r = run("simulate --config " + bad.string() + " --out " +
                          (g_workdir / "y").string());
  CHECK(r.exit_code == 2);
  CHECK(nlohmann::json::parse(r.out).contains("error"));

  // Noise without a seed is a config error.
  auto cfg = derivative_config();
  cfg["noise"] = {{"sigma2", 0.5}};
  const fs::path cfg_path = write_config("noseed.json", cfg);
  CHECK(run("simulate --config " + cfg_path.string() + " --out " +
            (g_workdir / "z").string())
            .exit_code == 2);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-teak-binary> [doctest args]\n", argv[0]);
    return 1;
  }
  g_binary = argv[1];
  g_workdir = fs::temp_directory_path() / "teak_cli_tests";
  fs::remove_all(g_workdir);
  fs::create_directories(g_workdir);

  doctest::Context ctx;
  ctx.applyCommandLine(argc - 1, argv + 1);
  const int rc = ctx.run();
  fs::remove_all(g_workdir);
  return rc;
}

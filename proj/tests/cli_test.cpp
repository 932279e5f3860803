#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int status;
  std::string out;
};

RunResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + QMI_CLI_PATH + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("qmi_cli_" + name); }

TEST(Cli, MiPrintsHeaderAndRow) {
  const auto r = run("mi qpea --t 7");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("strategy,N,d,t,mi_bits", 0), 0u);
  EXPECT_NE(r.out.find("\nqpea,127,2,7,5.79"), std::string::npos) << r.out;
}

TEST(Cli, InvalidConfigurationExitsTwo) {
  EXPECT_EQ(run("mi nope --n 3").status, 2);
  EXPECT_EQ(run("sweep --strategy qpea").status, 2);
  EXPECT_EQ(run("sweep --strategy sep-hamming --n-list 10,5").status, 2);
  EXPECT_EQ(run("mi qpea --t 3 --method closed-form").status, 2);
  EXPECT_EQ(run("--bogus").status, 2);
  EXPECT_EQ(run("verify --only NO-SUCH-CHECK").status, 2);
  EXPECT_EQ(run("sweep --strategy sep-hamming --n-list 10 --out /nonexistent-dir/x.csv").status, 2);
}

TEST(Cli, BudgetGuardAndForce) {
  EXPECT_EQ(run("sweep --strategy qpea-ddim --d-list 2 --t-list 12 --budget-s 1e-9").status, 2);
  EXPECT_EQ(run("sweep --strategy qpea-ddim --d-list 2 --t-list 12 --budget-s 1e-9 --force").status, 0);
}

TEST(Cli, VerifySubset) {
  const auto r = run("verify --only NUM-CONSTANTS,TWO-LEVEL");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("[PASS] NUM-CONSTANTS"), std::string::npos);
  EXPECT_NE(r.out.find("2/2"), std::string::npos) << r.out;
}

TEST(Cli, BoundsTable) {
  const auto r = run("bounds --n-list 1,3");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "N,heisenberg_bits,holevo_separable_bits,sql_bits\n1,1,1,0\n3,2,1.81127812446,0.792481250361\n");
}

TEST(Cli, SweepSpecFileIsDeterministic) {
  const fs::path spec = scratch("spec.json");
  const fs::path a = scratch("a.csv");
  const fs::path b = scratch("b.csv");
  std::ofstream(spec) << R"({"strategy": "sep-optimal", "n_values": [10, 50], "method": "mc",
                            "mc": {"samples": 20000, "seed": 5}, "workers": 2})";
  ASSERT_EQ(run("sweep --spec " + spec.string() + " --out " + a.string()).status, 0);
  ASSERT_EQ(run("sweep --spec " + spec.string() + " --out " + b.string()).status, 0);
  std::ostringstream ta;
  std::ostringstream tb;
  ta << std::ifstream(a).rdbuf();
  tb << std::ifstream(b).rdbuf();
  EXPECT_FALSE(ta.str().empty());
  EXPECT_EQ(ta.str(), tb.str());
  fs::remove(spec);
  fs::remove(a);
  fs::remove(b);
}

TEST(Cli, SeedFromEnvironmentOverriddenByFlag) {
  const std::string args = "mi sep-optimal --n 20 --method mc --samples 5000";
  const auto env_seed = run(args, "QMI_SEED=3");
  const auto flag_seed = run(args + " --seed 3");
  const auto flag_wins = run(args + " --seed 3", "QMI_SEED=99");
  EXPECT_EQ(env_seed.status, 0);
  EXPECT_EQ(env_seed.out, flag_seed.out);
  EXPECT_EQ(flag_wins.out, flag_seed.out);
  EXPECT_NE(run(args, "QMI_SEED=4").out, env_seed.out);
}

TEST(Cli, ConfigFileOverriddenByFlag) {
  const fs::path cfg = scratch("config.toml");
  std::ofstream(cfg) << "[mi]\nseed = 8\nsamples = 4000\n";
  const std::string base = "--config " + cfg.string() + " mi two-level --d 3 --method mc";
  const auto from_file = run(base);
  const auto explicit_flags = run("mi two-level --d 3 --method mc --seed 8 --samples 4000");
  EXPECT_EQ(from_file.status, 0);
  EXPECT_EQ(from_file.out, explicit_flags.out);
  EXPECT_NE(run(base + " --seed 9").out, from_file.out);
  fs::remove(cfg);
}

}  // namespace

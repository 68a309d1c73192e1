// Runs the epoly executable end to end.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(EPOLY_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path tmp(const std::string& name) {
  fs::create_directories(EPOLY_TEST_TMP);
  return fs::path(EPOLY_TEST_TMP) / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

// CSV body without the "# key=value" metadata lines.
std::string payload(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("#", 0) != 0) out += line + "\n";
  return out;
}

std::string meta_without_threads(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("#", 0) == 0 && line.rfind("# threads=", 0) != 0) out += line + "\n";
  return out;
}

}  // namespace

TEST(Cli, EnumerateL3) {
  auto r = run("enumerate 3");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["L"], 3);
  EXPECT_EQ(j["spectra"].size(), 6u);
  EXPECT_EQ(j["summary"]["min_norm_sq"], "1/12");
  EXPECT_EQ(j["summary"]["permutation_orbits"], 4);
  EXPECT_EQ(j["meta"]["command"], "enumerate");
  EXPECT_EQ(j["meta"]["seed"], "1");
}

TEST(Cli, EnumerateIsReproducibleAcrossRunsAndThreads) {
  const auto a = tmp("db_a.json"), b = tmp("db_b.json"), c = tmp("db_c.json");
  ASSERT_EQ(run("enumerate 5 --threads 1 --out " + a.string()).code, 0);
  ASSERT_EQ(run("enumerate 5 --threads 1 --out " + b.string()).code, 0);
  ASSERT_EQ(run("enumerate 5 --threads 3 --out " + c.string()).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  auto ja = nlohmann::json::parse(slurp(a)), jc = nlohmann::json::parse(slurp(c));
  EXPECT_EQ(jc["meta"]["threads"], "3");
  ja["meta"].erase("threads");
  jc["meta"].erase("threads");
  EXPECT_EQ(ja.dump(), jc.dump());
}

TEST(Cli, EnumerateLabelsDegenerateRegime) {
  auto r = run("enumerate 2");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["meta"]["regime"], "degenerate regime");
  EXPECT_TRUE(j["summary"]["degenerate_regime"].get<bool>());
}

TEST(Cli, EnumerateCapExceeded) {
  EXPECT_EQ(run("enumerate 8").code, 2);
  EXPECT_EQ(run("enumerate 0").code, 2);
  EXPECT_EQ(run("enumerate 4 --symmetry bogus").code, 2);
}

TEST(Cli, SampleIsThreadInvariant) {
  auto a = run("sample 12 -n 3000 --seed 5 --bins 20 --threads 1 --samples-out " +
               tmp("s1.csv").string());
  auto b = run("sample 12 -n 3000 --seed 5 --bins 20 --threads 4 --samples-out " +
               tmp("s4.csv").string());
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(payload(a.out), payload(b.out));
  EXPECT_EQ(meta_without_threads(a.out), meta_without_threads(b.out));
  EXPECT_EQ(payload(slurp(tmp("s1.csv"))), payload(slurp(tmp("s4.csv"))));
  EXPECT_NE(a.out.find("# seed=5\n"), std::string::npos);
  EXPECT_NE(a.out.find("# filter=all-independent\n"), std::string::npos);
  EXPECT_NE(a.out.find("bin_left,bin_right,count,model_density\n"), std::string::npos);
}

TEST(Cli, SampleSeedChangesOutput) {
  auto a = run("sample 10 -n 2000 --seed 1 --bins 10");
  auto b = run("sample 10 -n 2000 --seed 2 --bins 10");
  EXPECT_NE(payload(a.out), payload(b.out));
}

TEST(Cli, SampleModesAndFilters) {
  EXPECT_EQ(run("sample 5 -n 2000 --filter accepted-only --log").code, 0);
  EXPECT_EQ(run("sample 4 --mode exhaustive --filter accepted-only --weighting per-spectrum").code, 0);
  EXPECT_EQ(run("sample 4 --mode exhaustive").code, 0);
  auto r = run("sample 2 --mode exhaustive");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# regime=degenerate regime"), std::string::npos);
}

TEST(Cli, SamplePreconditions) {
  EXPECT_EQ(run("sample 10 -n 0").code, 2);
  EXPECT_EQ(run("sample 10 --filter bogus").code, 2);
  EXPECT_EQ(run("sample 10 --bins 0").code, 2);
  EXPECT_EQ(run("sample 9 --mode exhaustive").code, 2);
  EXPECT_EQ(run("sample").code, 2);
  EXPECT_EQ(run("sample 10 --no-such-flag").code, 2);
}

TEST(Cli, SampleCheckGates) {
  EXPECT_EQ(run("sample 10 -n 2000 --check --ks-max 0").code, 3);
  EXPECT_EQ(run("sample 10 -n 2000 --check --ks-max 1 --mean-tol 10").code, 0);
}

TEST(Cli, WishartCheckReport) {
  auto r = run("wishart-check 4 -n 3000 --seed 2");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("gate,value,threshold,result\n"), std::string::npos);
  EXPECT_NE(r.out.find("direct_vs_difference_ks2,"), std::string::npos);
  EXPECT_NE(r.out.find("max_abs_cholesky_corner_minus_1/L,"), std::string::npos);
  EXPECT_EQ(run("wishart-check 1").code, 2);
}

TEST(Cli, WishartCheckIsThreadInvariant) {
  auto a = run("wishart-check 5 -n 4000 --threads 1");
  auto b = run("wishart-check 5 -n 4000 --threads 2");
  EXPECT_EQ(payload(a.out), payload(b.out));
}

TEST(Cli, PurityTableWithDatabase) {
  const auto db = tmp("db4.json");
  ASSERT_EQ(run("enumerate 4 --out " + db.string()).code, 0);
  auto r = run("purity --Lmin 3 --Lmax 8 --db " + db.string());
  ASSERT_EQ(r.code, 0);
  const auto body = payload(r.out);
  EXPECT_EQ(body.substr(0, body.find('\n')), "L,p_generic,p_all,delta_generic,min_norm_lambda");
  EXPECT_NE(body.find("\n4,"), std::string::npos);
  EXPECT_NE(body.find("\n8,"), std::string::npos);
  EXPECT_NE(body.find("0.18898223650461"), std::string::npos);  // 1/(2 sqrt 7)
  EXPECT_EQ(run("purity --db " + tmp("missing.json").string()).code, 2);
}

TEST(Cli, SpectraOfStateFiles) {
  const auto w = tmp("w.json");
  std::ofstream(w) << R"({"L": 3, "amplitudes": [[1, 0.5773502691896258, 0], [2, 0.5773502691896258, 0], [4, 0.5773502691896258, 0]]})";
  auto r = run("spectra " + w.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1,0.1666666666666"), std::string::npos);
  EXPECT_NE(r.out.find("# linear_entropy=0.444444444444"), std::string::npos);
  EXPECT_NE(r.out.find("# in_delta_H=true"), std::string::npos);

  const auto ghz = tmp("ghz.csv");
  std::ofstream(ghz) << "# L=4\nindex,re,im\n0,0.7071067811865476,0\n15,0.7071067811865476,0\n";
  r = run("spectra " + ghz.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# linear_entropy=0.5\n"), std::string::npos);
}

TEST(Cli, SpectraValidatesNormalization) {
  const auto bad = tmp("bad.csv");
  std::ofstream(bad) << "# L=1\n0,1,0\n1,1,0\n";
  EXPECT_EQ(run("spectra " + bad.string()).code, 2);
  EXPECT_EQ(run("spectra --renormalize " + bad.string()).code, 0);
  EXPECT_EQ(run("spectra " + tmp("nope.csv").string()).code, 2);
}

TEST(Cli, NeedsASubcommand) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("--version").code, 0);
}

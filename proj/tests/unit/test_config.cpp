#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "error_code.hpp"
#include "zeroone/run_config.hpp"

using namespace zeroone;
using zeroone::testing::code_of;
namespace fs = std::filesystem;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    return e.what();
  }
  ADD_FAILURE() << "config was accepted";
  return {};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("zeroone-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const char* kSmall = R"({
  "seed": 3,
  "n_reps": 2000,
  "regions": {"unit": {"box": [[0, 1], [0, 1]]}},
  "experiments": [
    {"name": "mix", "type": "mixing_curve", "g": {"diag": [2, 0.5]}, "C": "unit", "m_range": [0, 6]}
  ]
})";

}  // namespace

TEST(Config, MalformedJsonReportsLineAndColumn) {
  const auto msg = message_of("{\n  \"seed\": 1,\n  \"out\": ,\n}");
  EXPECT_NE(msg.find("cfg.json:3:"), std::string::npos) << msg;
}

TEST(Config, SemanticErrorsNameTheField) {
  EXPECT_NE(message_of(R"({"experiments": [{"name": "x"}]})").find("experiments[0]"), std::string::npos);
  EXPECT_NE(message_of(R"({"experiments": [{"type": "bogus"}]})").find("experiments[0].type"), std::string::npos);
  EXPECT_NE(message_of(R"({"seed": -4})").find("seed"), std::string::npos);
  const auto unknown = message_of(R"({"experiments": [{"type": "mixing_curve", "g": "nope", "C": {"box": [[0, 1]]}, "m_range": [0, 1]}]})");
  EXPECT_NE(unknown.find("experiments[0].g"), std::string::npos) << unknown;
  EXPECT_NE(message_of(R"({"matrices": {"bad": [[1, 2], [3]]}})").find("matrices.bad"), std::string::npos);
}

TEST(Config, MatrixReferences) {
  const auto cfg = parse_config(R"({"matrices": {"r": {"rotation": 0.5}, "p": [[1, 1], [0, 1]]}})");
  EXPECT_TRUE(resolve_matrix(cfg, "r", "m").isApprox(rotation2(0.5)));
  EXPECT_EQ(resolve_matrix(cfg, "shear", "m"), shear2());
  EXPECT_EQ(resolve_matrix(cfg, Json::parse(R"({"d": 2, "rows": [[1, 0], [0, 1]]})"), "m"), Matrix::Identity(2, 2));
  const Matrix conj = resolve_matrix(cfg, Json::parse(R"({"conjugate": {"by": "p", "of": {"diag": [2, 0.5]}}})"), "m");
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 0.5;
  EXPECT_TRUE(conj.isApprox(shear2() * d * shear2().inverse()));
  EXPECT_EQ(code_of([&] { resolve_matrix(cfg, "missing", "m"); }), ErrorCode::ConfigError);
}

TEST(Config, EmptyExperimentListPasses) {
  const auto dir = scratch("empty");
  write(dir / "cfg.json", R"({"seed": 1, "experiments": []})");
  RunOverrides o;
  o.out = (dir / "out").string();
  EXPECT_EQ(run_all((dir / "cfg.json").string(), o), 0);
  const auto report = Json::parse(slurp(dir / "out" / "report.json"));
  EXPECT_TRUE(report["experiments"].empty());
  EXPECT_TRUE(report["all_pass"].get<bool>());
}

TEST(Config, RunIsDeterministicAndWorkerIndependent) {
  const auto dir = scratch("determinism");
  write(dir / "cfg.json", kSmall);
  RunOverrides a;
  a.out = (dir / "a").string();
  a.workers = 1;
  RunOverrides b;
  b.out = (dir / "b").string();
  b.workers = 3;
  EXPECT_EQ(run_all((dir / "cfg.json").string(), a), 0);
  EXPECT_EQ(run_all((dir / "cfg.json").string(), b), 0);
  for (const char* f : {"mix/covariance.csv", "mix/overlap.csv"}) {
    const auto x = slurp(dir / "a" / f);
    EXPECT_FALSE(x.empty()) << f;
    EXPECT_EQ(x, slurp(dir / "b" / f)) << f;
  }
}

TEST(Config, SeedOverrideChangesSeries) {
  const auto cfg = parse_config(kSmall);
  auto other = cfg;
  other.seed = 4;
  const auto x = run_experiments(cfg).reports[0].find("covariance")->points;
  const auto y = run_experiments(other).reports[0].find("covariance")->points;
  EXPECT_NE(x[1].estimate, y[1].estimate);
}

#ifdef ZEROONE_CLI_PATH
namespace {

int cli(const std::string& env, const std::string& args, const fs::path& log) {
  const std::string cmd = env + " '" ZEROONE_CLI_PATH "' " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::uint64_t report_seed(const fs::path& out) { return Json::parse(slurp(out / "report.json"))["seed"].get<std::uint64_t>(); }

}  // namespace

TEST(Cli, SeedAndOutPrecedence) {
  const auto dir = scratch("precedence");
  write(dir / "cfg.json", R"({"seed": 11, "out": ")" + (dir / "from_config").string() + R"(", "experiments": []})");
  const std::string cfg = "--config '" + (dir / "cfg.json").string() + "'";
  ASSERT_EQ(cli("env -u ZEROONE_SEED -u ZEROONE_OUT", "experiment run " + cfg, dir / "log"), 0) << slurp(dir / "log");
  EXPECT_EQ(report_seed(dir / "from_config"), 11u);
  ASSERT_EQ(cli("ZEROONE_SEED=22 ZEROONE_OUT='" + (dir / "from_env").string() + "'", "experiment run " + cfg, dir / "log"), 0);
  EXPECT_EQ(report_seed(dir / "from_env"), 22u);
  ASSERT_EQ(cli("ZEROONE_SEED=22 ZEROONE_OUT='" + (dir / "from_env").string() + "'",
                "experiment run " + cfg + " --seed 33 --out '" + (dir / "from_flag").string() + "'", dir / "log"),
            0);
  EXPECT_EQ(report_seed(dir / "from_flag"), 33u);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("exit");
  write(dir / "bad.json", "{\"seed\": }");
  EXPECT_EQ(cli("", "experiment run --config '" + (dir / "bad.json").string() + "'", dir / "log"), 2);
  EXPECT_NE(slurp(dir / "log").find("bad.json:1:"), std::string::npos) << slurp(dir / "log");
  EXPECT_EQ(cli("", "classify '[[2, 0], [0, 0.5]]'", dir / "log"), 0);
  const auto out = Json::parse(slurp(dir / "log"));
  EXPECT_FALSE(out["certificate"]["compact"].get<bool>());
  EXPECT_EQ(cli("", "jordan '[[1, 2], [3]]'", dir / "log"), 2);
}

TEST(Cli, SubcommandsWriteOutputs) {
  const auto dir = scratch("subcommands");
  const std::string out = " --out '" + dir.string() + "'";
  EXPECT_EQ(cli("", "jordan shear" + out, dir / "log"), 0) << slurp(dir / "log");
  EXPECT_TRUE(fs::exists(dir / "jordan.json"));
  EXPECT_EQ(cli("", "witness '[[0, -1], [1, 0]]' shear" + out, dir / "log"), 0) << slurp(dir / "log");
  EXPECT_TRUE(Json::parse(slurp(dir / "witness.json"))["found"].get<bool>());
  EXPECT_EQ(cli("", "weyl '{\"rotation\": 1.0}' --mode cesaro" + out, dir / "log"), 0) << slurp(dir / "log");
  EXPECT_LE(Json::parse(slurp(dir / "weyl.json"))["orthogonality_defect"].get<double>(), 1e-8);
  EXPECT_EQ(cli("", "sets verify shear --t-grid 0.5,2 --samples 500 --format csv" + out, dir / "log"), 0)
      << slurp(dir / "log");
  EXPECT_EQ(cli("", "simulate '{\"box\": [[0, 1], [0, 1]]}' --noise poisson --intensity 3" + out, dir / "log"), 0)
      << slurp(dir / "log");
  EXPECT_EQ(Json::parse(slurp(dir / "simulate.json"))["spec"]["kind"], "poisson");
}
#endif

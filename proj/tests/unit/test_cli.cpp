#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "conewolff/errors.hpp"
#include "experiments.hpp"
#include "report.hpp"
#include "selftest.hpp"

using namespace conewolff;
using namespace conewolff::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class CliRun : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = std::filesystem::temp_directory_path() /
            ("conewolff_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(root_);
    ::setenv("OUTPUT_DIR", root_.c_str(), 1);
  }
  void TearDown() override {
    ::unsetenv("OUTPUT_DIR");
    std::filesystem::remove_all(root_);
  }
  RunResult run(const std::string& text) {
    Config cfg = Config::parse(text, "<test>");
    std::ostringstream log;
    return run_config(cfg, log);
  }
  std::filesystem::path root_;
};

}  // namespace

TEST(ConfigParse, NumbersListsAndSections) {
  EXPECT_EQ(parse_number("2^-4"), 0.0625);
  EXPECT_EQ(parse_number(" 1/16 "), 0.0625);
  EXPECT_EQ(parse_number("1e-3"), 1e-3);
  EXPECT_THROW(parse_number("abc"), std::invalid_argument);
  EXPECT_THROW(parse_number("1/0"), std::invalid_argument);

  Config c = Config::parse("experiment = x\n# comment\n[scales]\ndeltas = 1/16, 2^-5\nk = 12\n[options]\nflag = yes\n");
  EXPECT_EQ(c.get_doubles("scales.deltas", {}), (std::vector<double>{0.0625, 0.03125}));
  EXPECT_EQ(c.get_int("scales.k", 0), 12);
  EXPECT_TRUE(c.get_bool("options.flag", false));
  EXPECT_EQ(c.get_double("scales.missing", 2.5), 2.5);
  EXPECT_EQ(c.get_string("experiment", ""), "x");
  EXPECT_NO_THROW(c.finish());
  EXPECT_NE(c.echo().find("[scales]\ndeltas = 1/16, 2^-5\n"), std::string::npos);
  EXPECT_NE(c.echo().find("missing = 2.5"), std::string::npos);
}

TEST(ConfigParse, DiagnosticsNameLineAndField) {
  try {
    Config::parse("a = 1\n[broken\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("<config>:2"), std::string::npos) << e.what();
  }
  Config c = Config::parse("[scales]\n\nk = twelve\n");
  try {
    c.get_int("scales.k", 0);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("<config>:3: field 'scales.k'"), std::string::npos) << e.what();
  }
  Config u = Config::parse("experiment = geometry\n[scales]\ntypo = 1\n");
  u.get_string("experiment", "");
  EXPECT_THROW(u.finish(), ConfigError);
  EXPECT_THROW(Config::parse("a = 1\na = 2\n"), ConfigError);
}

TEST(ConfigParse, CurveSpecs) {
  Config c = Config::parse("curve = helix(2, 0.5)\nother = twisted_cubic\nbad = helix(1, 2, 3)\nnope = spiral\n");
  std::string name;
  Vec2 ab;
  const Curve h = c.get_curve("curve", "", &name, &ab);
  EXPECT_EQ(name, "helix");
  EXPECT_EQ(ab, Vec2(2.0, 0.5));
  EXPECT_TRUE(h.arclength());
  EXPECT_NO_THROW(c.get_curve("other", ""));
  EXPECT_THROW(c.get_curve("bad", ""), ConfigError);
  EXPECT_THROW(c.get_curve("nope", ""), ConfigError);
}

TEST(ExperimentList, StableOrderAndContents) {
  const std::vector<std::string> expect = {"geometry", "plates",   "decompose", "umu",     "census", "schedule",
                                           "decouple", "sobolev",  "smoothing", "maximal", "helix2"};
  ASSERT_EQ(experiments().size(), expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_EQ(experiments()[i].name, expect[i]);
  const std::string a = list_experiments();
  EXPECT_EQ(a, list_experiments());
  std::size_t last = 0;
  for (std::size_t i = 0; i < expect.size(); ++i) {
    const std::size_t at = i == 0 ? (a.rfind(expect[i] + "  ", 0) == 0 ? 0 : std::string::npos)
                                  : a.find("\n" + expect[i] + "  ");
    ASSERT_NE(at, std::string::npos) << expect[i];
    if (i > 0) EXPECT_GT(at, last) << expect[i];
    last = at;
  }
  EXPECT_THROW(find_experiment("nothing"), ConfigError);
}

TEST_F(CliRun, GeometryHelixClosedForm) {
  const RunResult r = run("experiment = geometry\ncurve = helix(1, 1)\n[options]\nsamples = 11\n");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_DOUBLE_EQ(r.report["results"]["closed_form"]["kappa"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(r.report["results"]["closed_form"]["tau"].get<double>(), 0.5);
  const std::string csv = slurp(r.dir / "data.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "s,x,y,z,kappa,tau");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto k = line.rfind(',', line.rfind(',') - 1);
    EXPECT_NEAR(std::stod(line.substr(k + 1)), 0.5, 1e-12);
    EXPECT_NEAR(std::stod(line.substr(line.rfind(',') + 1)), 0.5, 1e-12);
  }
  EXPECT_EQ(rows, 11);
  for (const char* f : {"report.json", "data.csv", "config.echo", "metadata.json", "plots/frenet.svg"})
    EXPECT_TRUE(std::filesystem::exists(r.dir / f)) << f;
  EXPECT_EQ(r.dir.parent_path(), root_);
  EXPECT_EQ(r.dir.filename().string().rfind("geometry-", 0), 0u);
}

TEST_F(CliRun, ScheduleNStar) {
  const RunResult r = run("experiment = schedule\n[scales]\np = 74\neps = 0.1\n");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.report["results"]["n_star"].get<int>(), 8);
  EXPECT_EQ(nlohmann::json::parse(slurp(r.dir / "report.json")), r.report);
}

TEST_F(CliRun, InvalidSigmaIsAnError) {
  EXPECT_THROW(run("experiment = plates\n[scales]\ndelta = 1/64\nsigma = 1/4\n"), ConfigError);
  EXPECT_THROW(run("experiment = plates\n[scales]\ndelta = 1/64\ntheta = 1/16\n"), ConfigError);
  EXPECT_THROW(run("experiment = decouple\n[scales]\np = 3\n"), ConfigError);
  EXPECT_THROW(run("experiment = decompose\n[scales]\nks = 8, 10\nl = 3\n"), ConfigError);
  EXPECT_FALSE(std::filesystem::exists(root_));  // nothing written before validation passes

  const std::filesystem::path cfg = std::filesystem::temp_directory_path() / "conewolff_bad_sigma.ini";
  std::ofstream(cfg) << "experiment = plates\n[scales]\ndelta = 1/64\nsigma = 1/4\n";
  std::ostringstream out, err;
  EXPECT_EQ(cli::run(cfg.string(), out, err), 1);
  EXPECT_NE(err.str().find("scales.sigma"), std::string::npos);
  EXPECT_EQ(cli::run("/nonexistent/config.ini", out, err), 1);
  std::filesystem::remove(cfg);
}

TEST_F(CliRun, FailedAssertionExitsTwo) {
  // A containment bound below 1 cannot hold.
  const RunResult r = run("experiment = plates\n[scales]\ndelta = 2^-8\ntheta = 1/4\nA = 1\n[options]\nsamples = 100\n");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_FALSE(r.report["passed"].get<bool>());
}

TEST_F(CliRun, SameConfigSameBytes) {
  const std::string text =
      "experiment = decouple\ntrials = 3\nseed = 9\n[grid]\nn = 64\nL = 8\n[scales]\np = 4\nlambda = 14\n"
      "deltas = 1/4\n[options]\nmode = random_sign\nrequire_resolved = false\n";
  const RunResult a = run(text), b = run(text);
  ASSERT_NE(a.dir, b.dir);
  EXPECT_EQ(slurp(a.dir / "report.json"), slurp(b.dir / "report.json"));
  EXPECT_EQ(slurp(a.dir / "data.csv"), slurp(b.dir / "data.csv"));
  EXPECT_EQ(slurp(a.dir / "config.echo"), slurp(b.dir / "config.echo"));
  EXPECT_EQ(a.report["config"]["seed"], "9");
  const RunResult c = run(text + "[output]\ndir = elsewhere\n");  // OUTPUT_DIR wins, dir is not echoed
  EXPECT_EQ(c.dir.parent_path(), root_);
  EXPECT_EQ(slurp(a.dir / "report.json"), slurp(c.dir / "report.json"));
}

TEST(Svg, DeterministicAndWellFormed) {
  PlotSpec p{"x", "t<1>", "delta", "D", true, true, {{"a", {0.5, 0.25}, {2.0, 4.0}}, {"b", {}, {}}}};
  const std::string s = render_svg(p);
  EXPECT_EQ(s, render_svg(p));
  EXPECT_EQ(s.rfind("<svg", 0), 0u);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
  EXPECT_NE(s.find("t&lt;1&gt;"), std::string::npos);
}

TEST(SelfTest, AllChecksPass) {
  std::ostringstream out;
  EXPECT_EQ(selftest(out), 0) << out.str();
  EXPECT_EQ(out.str().find("FAIL"), std::string::npos);
}

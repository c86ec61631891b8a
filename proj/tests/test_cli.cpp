#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "deconv/cli.hpp"
#include "deconv/io.hpp"

using namespace deconv;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("deconv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string put(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  int run(const std::vector<std::string>& args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  /// Lines of a file or string that are neither empty nor comments.
  static std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
      if (!line.empty() && line[0] != '#') rows.push_back(line);
    return rows;
  }

  std::ostringstream out_, err_;

 private:
  fs::path dir_;
};

std::string impulse_csv(int lo, int hi) {
  std::string s = "index,value\n";
  for (int i = lo; i <= hi; ++i) s += std::to_string(i) + "," + (i == 0 ? "1" : "0") + "\n";
  return s;
}

}  // namespace

TEST_F(Cli, ConvolvePair) {
  const auto a = put("a.txt", "-1 1\n0 1\n");
  const auto b = put("b.txt", "0 1\n1 1\n");
  ASSERT_EQ(run({"convolve", a, b, "-o", path("c.txt")}), 0) << err_.str();
  EXPECT_EQ(io::read_measure(path("c.txt"), Arithmetic::Exact),
            AtomicMeasure(1, Arithmetic::Exact,
                          {{-1, Scalar::exact(1)}, {0, Scalar::exact(2)}, {1, Scalar::exact(1)}}));
}

TEST_F(Cli, InvertBinomialReportsBoundary) {
  const auto k = put("k.txt", "-1 1/4\n0 1/2\n1 1/4\n");
  ASSERT_EQ(run({"invert", k, "--method", "theorem2", "--N", "3", "-o", path("v.txt")}), 0) << err_.str();
  const auto rows = data_lines(out_.str());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "method,N,residual_tv,bound,boundary_points");
  EXPECT_EQ(rows[1].rfind("theorem2,3,", 0), 0u);
  const AtomicMeasure v = io::read_measure(path("v.txt"), Arithmetic::Exact);
  EXPECT_EQ(v.weight(-3), Scalar::exact(6));
  EXPECT_EQ(v.weight(-1), Scalar::exact(2));
  EXPECT_EQ(v.weight(0), Scalar::exact(0));
}

TEST_F(Cli, NeumannOnBinomialIsAPreconditionFailure) {
  const auto k = put("k.txt", "-1 1\n0 2\n1 1\n");
  EXPECT_EQ(run({"invert", k, "--method", "neumann", "--N", "4", "-o", path("v.txt")}), cli::kPrecondition);
}

TEST_F(Cli, NeumannThreePointHitsBound) {
  const auto k = put("k.txt", "-1 1/8\n0 3/4\n1 1/8\n");
  ASSERT_EQ(run({"invert", k, "--method", "neumann", "--N", "8", "-o", path("v.txt")}), 0) << err_.str();
  EXPECT_EQ(data_lines(out_.str())[1].rfind("neumann,8,1/19683,1/19683", 0), 0u);
}

TEST_F(Cli, MalformedInputExitsWithParseCode) {
  const auto bad = put("bad.txt", "0 1\n1 x\n");
  const auto ok = put("ok.txt", "0 1\n");
  EXPECT_EQ(run({"convolve", bad, ok, "-o", path("c.txt")}), cli::kParse);
  EXPECT_NE(err_.str().find("line 2"), std::string::npos);
}

TEST_F(Cli, DimensionMismatchExitCode) {
  const auto a = put("a.txt", "0 1\n");
  const auto b = put("b.txt", "0 0 1\n");
  EXPECT_EQ(run({"convolve", a, b, "-o", path("c.txt")}), cli::kDimension);
}

TEST_F(Cli, UsageErrorsExitWithFailure) {
  EXPECT_EQ(run({"frobnicate"}), cli::kFailure);
  EXPECT_EQ(run({"invert", "missing.txt", "--method", "nope", "-o", "x"}), cli::kFailure);
  EXPECT_EQ(run({"convolve", path("missing.txt"), path("missing.txt"), "-o", path("c.txt")}), cli::kFailure);
}

TEST_F(Cli, DeblurBinomialIsExactAndReportsMetrics) {
  const auto f = put("f.csv", impulse_csv(-5, 5));
  ASSERT_EQ(run({"deblur", f, "--method", "theorem2", "--N", "50", "-o", path("r.csv")}), 0) << err_.str();
  const auto rows = data_lines(out_.str());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "method,params,max_err,l2_err");
  EXPECT_EQ(rows[1].substr(rows[1].size() - 4), ",0,0");
}

TEST_F(Cli, ShortTruncationNamesRequiredN) {
  const auto f = put("f.csv", impulse_csv(-10, 10));
  EXPECT_EQ(run({"deblur", f, "--method", "theorem2", "--N", "10", "-o", path("r.csv")}), cli::kTruncation);
  EXPECT_NE(err_.str().find("required N > 22"), std::string::npos) << err_.str();
}

TEST_F(Cli, AnalyticWithoutBandLimitRefuses) {
  std::string csv = "x,value\n";
  for (int i = 0; i < 200; ++i) csv += io::format_double(0.05 * i) + ",1\n";
  const auto f = put("f.csv", csv);
  EXPECT_EQ(run({"deblur", f, "--method", "analytic", "-o", path("r.csv")}), cli::kPrecondition);
  EXPECT_EQ(run({"deblur", f, "--method", "analytic", "--band-limit", "4", "-o", path("r.csv")}), 0)
      << err_.str();
}

TEST_F(Cli, GrowthExperimentIsTwoN) {
  ASSERT_EQ(run({"experiment", "growth", "--N", "10,20,40", "-o", path("g.csv")}), 0) << err_.str();
  const auto rows = data_lines(io::slurp(path("g.csv")));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "N,max_abs_coefficient,expected,h_max_abs_coefficient");
  EXPECT_EQ(rows[1], "10,20,20,1");
  EXPECT_EQ(rows[3], "40,80,80,1");
}

TEST_F(Cli, ExperimentsAreByteIdenticalOnRerun) {
  for (const std::string name : {"noise-lateral", "noise-gaussian"}) {
    ASSERT_EQ(run({"experiment", name, "-o", path("a.csv")}), 0) << err_.str();
    ASSERT_EQ(run({"experiment", name, "-o", path("b.csv")}), 0) << err_.str();
    EXPECT_EQ(io::slurp(path("a.csv")), io::slurp(path("b.csv"))) << name;
  }
}

TEST_F(Cli, VerifyExitReflectsTheCheck) {
  const auto t = put("t.txt", "0 1\n1 1\n");
  const auto v = put("v.txt", "0 1\n1 -1\n2 1\n");
  EXPECT_EQ(run({"verify", t, v, "--window", "-2:2"}), 0);
  EXPECT_EQ(data_lines(out_.str())[0], "holds,inside_atoms,outside_atoms,max_inside,outside_tv");
  EXPECT_EQ(data_lines(out_.str())[1].rfind("yes,0,1,0,1", 0), 0u) << out_.str();
  EXPECT_EQ(run({"verify", t, v, "--window", "-2:3"}), cli::kFailure);
}

TEST(NoiseSignal, Shape) {
  const GridSignal f = cli::noise_test_signal();
  EXPECT_EQ(f.shape().axis(0).count, 512u);
  EXPECT_DOUBLE_EQ(f[256], 1e-3);
}

#include "commands.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace sparsedft::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "sparsedft");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sparsedft_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path dir_;
};

TEST_F(CliTest, BuildWritesJson) {
  const Result r = invoke({"build", "--n", "9", "--out", path("b9.json")});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("wrote 9 vectors"), std::string::npos);
  std::ifstream in(path("b9.json"));
  EXPECT_EQ(read_basis_json(in).vectors.size(), 9u);
}

TEST_F(CliTest, BuildRejectsBadArguments) {
  EXPECT_EQ(invoke({"build", "--n", "0"}).code, kUsageError);
  EXPECT_EQ(invoke({"build", "--n", "4", "--format", "xml"}).code, kUsageError);
  EXPECT_EQ(invoke({"build"}).code, kUsageError);
  EXPECT_EQ(invoke({"build", "--n", "4", "--out", path("missing/dir/x.json")}).code, kUsageError);
}

TEST_F(CliTest, BuildCsv) {
  const Result r = invoke({"build", "--n", "16", "--format", "csv"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out.rfind("vector,k,a,b,index,re,im\n", 0), 0u);
}

TEST_F(CliTest, VerifyBuiltBases) {
  const Result r25 = invoke({"verify", "--n", "25"});
  EXPECT_EQ(r25.code, kOk) << r25.out;
  EXPECT_NE(r25.out.find("all checks passed"), std::string::npos);
  EXPECT_EQ(r25.out.find("FAIL"), std::string::npos);

  const Result r12 = invoke({"verify", "--n", "12"});
  EXPECT_EQ(r12.code, kOk) << r12.out;
  EXPECT_NE(r12.out.find("non-orthogonal, witness"), std::string::npos);

  const Result r8 = invoke({"verify", "--n", "8"});
  EXPECT_EQ(r8.code, kOk) << r8.out;
  EXPECT_NE(r8.out.find("orthogonal, max off-diagonal"), std::string::npos);

  EXPECT_EQ(invoke({"verify"}).code, kUsageError);
}

TEST_F(CliTest, VerifyExport) {
  ASSERT_EQ(invoke({"build", "--n", "12", "--out", path("b12.json")}).code, kOk);
  EXPECT_EQ(invoke({"verify", "--input", path("b12.json")}).code, kOk);

  // Replace one vector's entries with a spike: labels no longer match.
  std::string text = slurp(path("b12.json"));
  {
    std::ifstream in(path("b12.json"));
    EigenBasis basis = read_basis_json(in);
    basis.vectors[3].dense = DenseVector::unit(12, 0);
    std::ofstream out(path("tampered.json"));
    write_basis_json(out, basis);
  }
  const Result tampered = invoke({"verify", "--input", path("tampered.json")});
  EXPECT_EQ(tampered.code, kClaimViolation);
  EXPECT_NE(tampered.out.find("some checks FAILED"), std::string::npos);

  text.replace(text.find("\"vectors\""), 9, "\"vectors\" oops");
  std::ofstream(path("broken.json")) << text;
  const Result broken = invoke({"verify", "--input", path("broken.json")});
  EXPECT_EQ(broken.code, kUsageError);
  EXPECT_NE(broken.err.find("at line"), std::string::npos);

  EXPECT_EQ(invoke({"verify", "--input", path("absent.json")}).code, kUsageError);
}

TEST_F(CliTest, AnalyzeBasisVector) {
  const EigenBasis basis = build_basis(9);
  write_vector_file(path("u0.csv"), basis.vectors[0].dense);
  const Result r = invoke({"analyze", "--n", "9", "--input", path("u0.csv"), "--out", path("c.csv")});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::ifstream in(path("c.csv"));
  const DenseVector c = read_vector(in);
  ASSERT_EQ(c.size(), 9u);
  EXPECT_NEAR(std::abs(c[0] - Complex(1.0, 0.0)), 0.0, 1e-12);
  for (std::size_t j = 1; j < 9; ++j) EXPECT_EQ(c[j], Complex(0.0, 0.0)) << j;
  EXPECT_NE(r.out.find("basis: orthogonal"), std::string::npos);
}

TEST_F(CliTest, AnalyzeRandomVector) {
  std::mt19937_64 rng(61);
  write_vector_file(path("v.csv"), testing::random_vector(30, rng));
  const Result r = invoke({"analyze", "--n", "30", "--input", path("v.csv"), "--out", path("c.csv")});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("basis: non-orthogonal"), std::string::npos);
  EXPECT_NE(r.out.find("round-trip residual"), std::string::npos);
  std::ifstream in(path("c.csv"));
  EXPECT_EQ(read_vector(in).size(), 30u);
}

TEST_F(CliTest, AnalyzeRejectsBadInput) {
  write_vector_file(path("v.csv"), DenseVector(7));
  EXPECT_EQ(invoke({"analyze", "--n", "8", "--input", path("v.csv")}).code, kUsageError);
  std::ofstream(path("bad.csv")) << "0,1,0\n1,?,0\n";
  const Result r = invoke({"analyze", "--n", "2", "--input", path("bad.csv")});
  EXPECT_EQ(r.code, kUsageError);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST_F(CliTest, Survey) {
  const Result r = invoke({"survey", "--max-n", "30", "--out", path("s.csv"), "--jobs", "2"});
  EXPECT_EQ(r.code, kOk) << r.out;
  EXPECT_NE(r.out.find("orthogonal n: {2,3,4,8,9,16,25}"), std::string::npos);
  std::ifstream in(path("s.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 29);

  const Result two = invoke({"survey", "--max-n", "2"});
  EXPECT_EQ(two.code, kOk);
  EXPECT_NE(two.out.find("orthogonal n: {2}"), std::string::npos);
  EXPECT_EQ(invoke({"survey", "--max-n", "1"}).code, kUsageError);
}

TEST_F(CliTest, Bench) {
  const Result r = invoke({"bench", "--n", "64", "--repeats", "1"});
  EXPECT_EQ(r.code, kOk) << r.out;
  EXPECT_EQ(r.out.rfind("n,fast_seconds", 0), 0u);
  EXPECT_EQ(invoke({"bench"}).code, kUsageError);
  EXPECT_EQ(invoke({"bench", "--n", "1"}).code, kUsageError);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kUsageError);
  EXPECT_EQ(invoke({"transform"}).code, kUsageError);
  EXPECT_EQ(invoke({"build", "--n", "4", "--tol", "0.5"}).code, kUsageError);
  EXPECT_EQ(invoke({"--help"}).code, kOk);
}

TEST(ExpectedOrthogonal, Set) {
  for (Index n : {2, 3, 4, 8, 9, 16, 25, 36, 256}) EXPECT_TRUE(expected_orthogonal(n)) << n;
  for (Index n : {5, 6, 7, 10, 12, 18, 32, 255}) EXPECT_FALSE(expected_orthogonal(n)) << n;
}

}  // namespace
}  // namespace sparsedft::cli

#include "sparsedft/io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

namespace sparsedft {
namespace {

TEST(VectorFormat, RoundTripIsBitExact) {
  std::mt19937_64 rng(51);
  const DenseVector v = testing::random_vector(17, rng);
  std::stringstream s;
  write_vector(s, v);
  EXPECT_EQ(read_vector(s), v);
}

TEST(VectorFormat, AcceptsBlankLinesAndSpaces) {
  std::istringstream in("0, 1.5, -2\n\n1,0,0.25\r\n");
  const DenseVector v = read_vector(in);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0], Complex(1.5, -2.0));
  EXPECT_EQ(v[1], Complex(0.0, 0.25));
}

std::size_t error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_vector(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(VectorFormat, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("0,1,0\n1,2\n"), 2u);
  EXPECT_EQ(error_line("0,1,0\n1,1,0\n\n3,1,0\n"), 4u);
  EXPECT_EQ(error_line("0,x,0\n"), 1u);
  EXPECT_EQ(error_line("0,1,0\n1,nan,0\n"), 2u);
  EXPECT_EQ(error_line("0,1,0,4\n"), 1u);
  std::istringstream empty("\n\n");
  EXPECT_THROW(read_vector(empty), ParseError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(-3.0), "-3");
  const double x = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(BasisJson, RoundTripUpTo64) {
  const TolerancePolicy tol;
  for (Index n = 2; n <= 64; ++n) {
    const EigenBasis basis = build_basis(n, tol);
    std::stringstream s;
    write_basis_json(s, basis);
    const EigenBasis back = read_basis_json(s, tol);
    ASSERT_EQ(back.n, n);
    ASSERT_EQ(back.vectors.size(), basis.vectors.size());
    ASSERT_EQ(back.per_class_counts, basis.per_class_counts);
    for (std::size_t j = 0; j < basis.vectors.size(); ++j) {
      const auto& x = basis.vectors[j];
      const auto& y = back.vectors[j];
      ASSERT_EQ(x.label(), y.label());
      ASSERT_EQ(x.scale, y.scale);
      ASSERT_EQ(x.support, y.support);
      ASSERT_EQ(x.sum.terms().size(), y.sum.terms().size());
      for (std::size_t t = 0; t < x.sum.terms().size(); ++t) {
        ASSERT_EQ(x.sum.terms()[t].coefficient, y.sum.terms()[t].coefficient);
        ASSERT_TRUE(x.sum.terms()[t].train.same_label(y.sum.terms()[t].train));
        ASSERT_EQ(x.sum.terms()[t].train.phase(), y.sum.terms()[t].train.phase());
      }
      ASSERT_LE(max_abs_diff(x.dense, y.dense), tol.zero_tol);
    }
  }
}

TEST(BasisJson, RawExportIsRescaledOnRead) {
  const EigenBasis basis = build_basis(12);
  std::stringstream s;
  write_basis_json(s, basis, ExportOptions{false, 1e-9});
  const EigenBasis back = read_basis_json(s);
  for (std::size_t j = 0; j < basis.vectors.size(); ++j) {
    EXPECT_LE(max_abs_diff(basis.vectors[j].dense, back.vectors[j].dense), 1e-12);
  }
}

TEST(BasisJson, SyntaxErrorReportsLine) {
  std::stringstream s;
  write_basis_json(s, build_basis(4));
  std::string text = s.str();
  // Break the fifth line.
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) pos = text.find('\n', pos) + 1;
  text.insert(pos, "@@");
  std::istringstream in(text);
  try {
    read_basis_json(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(BasisJson, SchemaErrorsReportPath) {
  auto expect_message = [](const std::string& text, const std::string& fragment) {
    std::istringstream in(text);
    try {
      read_basis_json(in);
      FAIL() << "expected ParseError for " << fragment;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 0u);
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_message(R"({"n": 4})", "format_version");
  expect_message(R"({"format_version": 2})", "format_version");
  expect_message(R"({"format_version": 1, "n": 4, "eta1": 1, "eta2": 4, "vectors": []})", "eta");
  expect_message(R"({"format_version": 1, "n": 4, "eta1": 2, "eta2": 2, "vectors": []})", "expected 4");
  expect_message(
      R"({"format_version": 1, "n": 1, "eta1": 1, "eta2": 1, "vectors": [{"k": 5, "a": 0, "b": 0}]})",
      "/vectors/0/k");
}

TEST(BasisCsv, OneSectionPerVector) {
  const EigenBasis basis = build_basis(16);
  std::stringstream s;
  write_basis_csv(s, basis);
  std::string line;
  std::getline(s, line);
  EXPECT_EQ(line, "vector,k,a,b,index,re,im");
  std::set<std::string> vectors;
  Index rows = 0;
  while (std::getline(s, line)) {
    vectors.insert(line.substr(0, line.find(',')));
    ++rows;
  }
  EXPECT_EQ(vectors.size(), 16u);
  Index support = 0;
  for (const auto& rec : basis.vectors) support += rec.support;
  EXPECT_EQ(rows, support);
}

TEST(SurveyCsv, OneRowPerDimension) {
  std::stringstream s;
  write_survey_csv(s, orthogonality_survey(12));
  std::string line;
  std::getline(s, line);
  EXPECT_EQ(line.substr(0, 12), "n,eta1,eta2,");
  std::vector<std::string> rows;
  while (std::getline(s, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0].rfind("2,1,2,", 0), 0u);
  EXPECT_NE(rows[7].find(",true,,,,"), std::string::npos);  // n = 9
  EXPECT_NE(rows[10].find(",false,"), std::string::npos);  // n = 12
}

}  // namespace
}  // namespace sparsedft

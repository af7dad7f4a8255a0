#pragma once

// Text formats: dense vectors as `index,re,im` lines, the basis export
// (JSON, versioned; CSV for inspection) and the survey report CSV.

#include "sparsedft/basis.hpp"
#include "sparsedft/fast_transform.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsedft {

inline constexpr int kBasisFormatVersion = 1;

/// Malformed input. line() is 1-based, or 0 when the error has no single line
/// (for example a missing JSON field, which is reported by its JSON path).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

void write_vector(std::ostream& out, const DenseVector& v);
/// Expects indices 0..n-1 in order; blank lines are ignored.
DenseVector read_vector(std::istream& in);

DenseVector read_vector_file(const std::filesystem::path& path);
void write_vector_file(const std::filesystem::path& path, const DenseVector& v);

/// Coefficients use the vector format, indexed by basis order.
void write_coefficients(std::ostream& out, const CoefficientVector& c);

struct ExportOptions {
  /// When false, entries are written as F_k g before division by the
  /// recorded scale; the reader undoes this.
  bool normalized = true;
  /// Entries of the unit vector at or below this magnitude are omitted.
  double zero_tol = TolerancePolicy{}.zero_tol;
};

void write_basis_json(std::ostream& out, const EigenBasis& basis, const ExportOptions& opts = {});
/// Rebuilds labels and train sums exactly and dense entries from their
/// sparse triplets; support and class counts are recomputed with tol.
EigenBasis read_basis_json(std::istream& in, const TolerancePolicy& tol = {});

/// Long-form CSV: one `vector,k,a,b,index,re,im` row per nonzero entry.
void write_basis_csv(std::ostream& out, const EigenBasis& basis, const ExportOptions& opts = {});

void write_survey_csv(std::ostream& out, const std::vector<SurveyRow>& rows);

}  // namespace sparsedft

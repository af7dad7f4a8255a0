#pragma once

#include "sparsedft/io.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sparsedft::cli {

/// Exit statuses shared by every command.
enum ExitCode : int {
  kOk = 0,             ///< every claim verified
  kClaimViolation = 1, ///< details on standard output
  kUsageError = 2,     ///< bad arguments or I/O failure
};

struct BuildOptions {
  Index n = 0;
  std::optional<std::filesystem::path> out;  ///< standard output when empty
  std::string format = "json";               ///< json | csv
  bool normalize = true;
  TolerancePolicy tol;
};

struct VerifyOptions {
  std::optional<Index> n;
  std::optional<std::filesystem::path> input;  ///< a JSON basis export
  TolerancePolicy tol;
};

struct AnalyzeOptions {
  Index n = 0;
  std::filesystem::path input;
  std::optional<std::filesystem::path> out;
  TolerancePolicy tol;
};

struct SurveyOptions {
  Index max_n = 0;
  std::optional<std::filesystem::path> out;
  unsigned workers = 1;
  TolerancePolicy tol;
};

struct BenchOptions {
  std::vector<Index> sizes;
  std::optional<std::filesystem::path> out;
  int repeats = 3;
};

int cmd_build(const BuildOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_survey(const SurveyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);

/// Timings (best of repeats, seconds) of three ways to correlate a random
/// vector against the class-0 candidates F_0 g_{eta1}(a, b).
struct BenchRow {
  Index n = 0;
  double fast_seconds = 0.0;   ///< analyze(): subsampled FFTs
  double naive_seconds = 0.0;  ///< densify each candidate and take inner products
  double dense_seconds = 0.0;  ///< product with the precomputed dense n x n matrix
  double max_abs_diff = 0.0;   ///< largest disagreement between the three paths
};

BenchRow bench_size(Index n, int repeats);

/// True when the sparse basis is known to be orthogonal: n is a perfect
/// square or n is 2, 3 or 8.
bool expected_orthogonal(Index n);

/// Parses argv with CLI11 and dispatches to one of the commands above.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sparsedft::cli

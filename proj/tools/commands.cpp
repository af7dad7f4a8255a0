#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

namespace sparsedft::cli {
namespace {

std::string sci(double value) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << value;
  return os.str();
}

// Writes through a temporary stream so that a failed open is reported before
// anything is produced.
template <typename Writer>
bool write_output(const std::optional<std::filesystem::path>& path, std::ostream& fallback,
                  std::ostream& err, Writer&& writer) {
  if (!path) {
    writer(fallback);
    return true;
  }
  std::ofstream file(*path);
  if (!file) {
    err << "error: cannot write " << path->string() << '\n';
    return false;
  }
  writer(file);
  file.flush();
  if (!file) {
    err << "error: write failed for " << path->string() << '\n';
    return false;
  }
  return true;
}

class CheckTable {
 public:
  explicit CheckTable(std::ostream& out) : out_(out) {
    out_ << std::left << std::setw(28) << "check" << std::setw(8) << "result" << "detail\n";
  }

  void row(const std::string& name, bool pass, const std::string& detail) {
    out_ << std::left << std::setw(28) << name << std::setw(8) << (pass ? "PASS" : "FAIL") << detail << '\n';
    all_pass_ = all_pass_ && pass;
  }

  void info(const std::string& name, const std::string& detail) {
    out_ << std::left << std::setw(28) << name << std::setw(8) << "INFO" << detail << '\n';
  }

  bool all_pass() const { return all_pass_; }

 private:
  std::ostream& out_;
  bool all_pass_ = true;
};

std::string counts_text(const std::array<Index, 4>& counts) {
  return std::to_string(counts[0]) + "," + std::to_string(counts[1]) + "," + std::to_string(counts[2]) + "," +
         std::to_string(counts[3]);
}

// Shared by verify --n and verify --input.
bool verify_basis(const EigenBasis& basis, const TolerancePolicy& tol, std::ostream& out) {
  out << "n = " << basis.n << ", eta1 = " << basis.eta.eta1 << ", eta2 = " << basis.eta.eta2 << '\n';
  CheckTable table(out);

  table.row("vector count", static_cast<Index>(basis.vectors.size()) == basis.n,
            std::to_string(basis.vectors.size()) + " of " + std::to_string(basis.n));

  double worst_consistency = 0.0;
  for (const BasisVectorRecord& rec : basis.vectors) {
    const DenseVector expected = (1.0 / rec.scale) * densify_sum(rec.sum);
    worst_consistency = std::max(worst_consistency, max_abs_diff(expected, rec.dense));
  }
  table.row("entries match labels", worst_consistency <= tol.residual_tol,
            "max |dense - F_k g / scale| " + sci(worst_consistency));

  double worst_residual = 0.0;
  std::string worst_label;
  for (const BasisVectorRecord& rec : basis.vectors) {
    const double r = rec.dense.norm() > tol.zero_tol ? verify_eigenvector(rec.dense, rec.k, tol)
                                                      : std::numeric_limits<double>::infinity();
    if (r >= worst_residual) {
      worst_residual = r;
      worst_label = rec.label();
    }
  }
  table.row("eigenvector residual", worst_residual <= tol.residual_tol,
            "max " + sci(worst_residual) + " at " + worst_label + " (limit " + sci(tol.residual_tol) + ")");

  const MultiplicityTable expected = multiplicities(basis.n);
  table.row("class multiplicities", basis.per_class_counts == expected.by_class,
            "counts " + counts_text(basis.per_class_counts) + ", expected " + counts_text(expected.by_class));

  EliminationState rank(static_cast<std::size_t>(basis.n));
  for (const BasisVectorRecord& rec : basis.vectors) rank.try_extend(rec.dense, tol);
  table.row("linear independence", static_cast<Index>(rank.rank()) == basis.n,
            "rank " + std::to_string(rank.rank()) + " of " + std::to_string(basis.n));

  const SparsityAudit audit = audit_sparsity(basis, tol);
  std::ostringstream sparsity;
  sparsity << "supports in [" << audit.min_support << ", " << audit.max_support << "], bounds ["
           << audit.lower_bound << ", " << audit.upper_bound << "], max/lower " << std::setprecision(3)
           << audit.ratio_to_lower_bound;
  if (!audit.failures.empty()) sparsity << "; " << audit.failures.front();
  table.row("sparsity bounds", audit.passed, sparsity.str());

  Index uncertain_ok = 0;
  for (const BasisVectorRecord& rec : basis.vectors) {
    if (rec.dense.norm() > tol.zero_tol && check_uncertainty(rec.dense, tol)) ++uncertain_ok;
  }
  table.row("uncertainty bounds", uncertain_ok == static_cast<Index>(basis.vectors.size()),
            std::to_string(uncertain_ok) + " of " + std::to_string(basis.vectors.size()) + " vectors");

  const GramReport gram = gram_report(basis, tol);
  table.row("cross-class orthogonality", gram.max_cross_class <= tol.residual_tol,
            "max |<u,v>| " + sci(gram.max_cross_class));

  std::string ortho_detail;
  if (gram.is_orthogonal) {
    ortho_detail = "orthogonal, max off-diagonal " + sci(gram.max_offdiag);
  } else if (gram.witness) {
    ortho_detail = "non-orthogonal, witness " + basis.vectors[gram.witness->first].label() + " | " +
                   basis.vectors[gram.witness->second].label() + ", |<u,v>| = " +
                   std::to_string(std::abs(gram.witness->value));
  } else {
    ortho_detail = "non-orthogonal without a witness pair";
  }
  if (expected_orthogonal(basis.n) || basis.n <= 256) {
    const bool pass = gram.is_orthogonal == expected_orthogonal(basis.n) && (gram.is_orthogonal || gram.witness);
    table.row("orthogonality", pass, ortho_detail);
  } else {
    table.info("orthogonality", ortho_detail);
  }
  if (!gram.is_orthogonal && static_cast<Index>(basis.vectors.size()) == basis.n) {
    try {
      const CoefficientSolver solver(basis, tol);
      table.info("conditioning", "reciprocal condition " + sci(solver.reciprocal_condition()));
    } catch (const std::exception& e) {
      table.row("conditioning", false, e.what());
    }
  }
  out << (table.all_pass() ? "all checks passed" : "some checks FAILED") << '\n';
  return table.all_pass();
}

double best_of(int repeats, const auto& body) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(repeats, 1); ++r) {
    const auto start = std::chrono::steady_clock::now();
    body();
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    best = std::min(best, elapsed.count());
  }
  return best;
}

}  // namespace

bool expected_orthogonal(Index n) {
  if (n == 2 || n == 3 || n == 8) return true;
  const DivisorPair eta = eta_pair(n);
  return eta.is_square();
}

int cmd_build(const BuildOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.n < 1) {
    err << "error: --n must be a positive integer\n";
    return kUsageError;
  }
  if (opts.format != "json" && opts.format != "csv") {
    err << "error: --format must be json or csv\n";
    return kUsageError;
  }
  EigenBasis basis;
  try {
    basis = build_basis(opts.n, opts.tol);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kClaimViolation;
  }
  const ExportOptions export_opts{opts.normalize, opts.tol.zero_tol};
  const bool ok = write_output(opts.out, out, err, [&](std::ostream& os) {
    if (opts.format == "json") {
      write_basis_json(os, basis, export_opts);
    } else {
      write_basis_csv(os, basis, export_opts);
    }
  });
  if (!ok) return kUsageError;
  if (opts.out) out << "wrote " << basis.vectors.size() << " vectors to " << opts.out->string() << '\n';
  return kOk;
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.n.has_value() == opts.input.has_value()) {
    err << "error: verify needs exactly one of --n or --input\n";
    return kUsageError;
  }
  EigenBasis basis;
  if (opts.n) {
    if (*opts.n < 1) {
      err << "error: --n must be a positive integer\n";
      return kUsageError;
    }
    try {
      basis = build_basis(*opts.n, opts.tol);
    } catch (const std::exception& e) {
      out << "build FAILED: " << e.what() << '\n';
      return kClaimViolation;
    }
  } else {
    std::ifstream in(*opts.input);
    if (!in) {
      err << "error: cannot open " << opts.input->string() << '\n';
      return kUsageError;
    }
    try {
      basis = read_basis_json(in, opts.tol);
    } catch (const ParseError& e) {
      err << "parse error in " << opts.input->string();
      if (e.line() > 0) err << " at line " << e.line();
      err << ": " << e.what() << '\n';
      return kUsageError;
    }
  }
  return verify_basis(basis, opts.tol, out) ? kOk : kClaimViolation;
}

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.n < 1) {
    err << "error: --n must be a positive integer\n";
    return kUsageError;
  }
  DenseVector v(1);
  try {
    v = read_vector_file(opts.input);
  } catch (const ParseError& e) {
    err << "parse error in " << opts.input.string() << ": " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  if (static_cast<Index>(v.size()) != opts.n) {
    err << "error: " << opts.input.string() << " has dimension " << v.size() << ", expected --n " << opts.n
        << '\n';
    return kUsageError;
  }

  const EigenBasis basis = build_basis(opts.n, opts.tol);
  const CoefficientSolver solver(basis, opts.tol);
  CoefficientVector c = solver.solve(v);
  const DenseVector back = synthesize(c, basis);
  const double scale = v.norm();
  const double residual = scale > 0.0 ? (back - v).norm() / scale : back.norm();

  // Magnitudes at or below zero_tol are written as exact zeros.
  for (Complex& z : c.coefficients) {
    if (std::abs(z) <= opts.tol.zero_tol) z = {};
  }
  if (!write_output(opts.out, out, err, [&](std::ostream& os) { write_coefficients(os, c); })) {
    return kUsageError;
  }
  out << "basis: " << (solver.orthogonal() ? "orthogonal" : "non-orthogonal") << '\n';
  if (!solver.orthogonal()) out << "reciprocal condition: " << sci(solver.reciprocal_condition()) << '\n';
  out << "round-trip residual: " << sci(residual) << '\n';
  return residual <= opts.tol.residual_tol ? kOk : kClaimViolation;
}

int cmd_survey(const SurveyOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.max_n < 2) {
    err << "error: --max-n must be at least 2\n";
    return kUsageError;
  }
  std::vector<SurveyRow> rows;
  try {
    rows = orthogonality_survey(opts.max_n, opts.tol, opts.workers);
  } catch (const std::exception& e) {
    out << "survey FAILED: " << e.what() << '\n';
    return kClaimViolation;
  }
  if (opts.out && !write_output(opts.out, out, err, [&](std::ostream& os) { write_survey_csv(os, rows); })) {
    return kUsageError;
  }

  bool consistent = true;
  out << "orthogonal n: {";
  bool first = true;
  for (const SurveyRow& row : rows) {
    if (row.is_orthogonal) {
      out << (first ? "" : ",") << row.n;
      first = false;
    }
    const bool expected = expected_orthogonal(row.n);
    if (row.is_orthogonal != expected && (expected || row.n <= 256)) consistent = false;
    if (!row.is_orthogonal && !row.witness) consistent = false;
  }
  out << "}\n";
  if (!consistent) out << "classification disagrees with perfect squares plus {2,3,8}\n";
  return consistent ? kOk : kClaimViolation;
}

BenchRow bench_size(Index n, int repeats) {
  const DivisorPair eta = eta_pair(n);
  std::mt19937_64 rng(0x5eed + static_cast<std::uint64_t>(n));
  std::normal_distribution<double> normal;
  std::vector<Complex> entries(static_cast<std::size_t>(n));
  for (Complex& z : entries) z = {normal(rng), normal(rng)};
  const DenseVector v(std::move(entries));
  const auto count = static_cast<std::size_t>(eta.eta1 * eta.eta2);

  BenchRow row;
  row.n = n;

  std::vector<Complex> fast(count);
  row.fast_seconds = best_of(repeats, [&] {
    const CorrelationTensor tensor = analyze(v);
    std::copy_n(tensor.values.begin(), count, fast.begin());
  });

  std::vector<Complex> naive(count);
  row.naive_seconds = best_of(repeats, [&] {
    std::size_t i = 0;
    for (Index a = 0; a < eta.eta1; ++a) {
      for (Index b = 0; b < eta.eta2; ++b) {
        naive[i++] = inner(v, densify_sum(project(EigenClass(0), ModulatedDeltaTrain(n, eta.eta1, a, b))));
      }
    }
  });

  // Rows are conj(F_0 g) so that the product gives <v, F_0 g> directly.
  std::vector<Complex> matrix(count * static_cast<std::size_t>(n));
  {
    std::size_t i = 0;
    for (Index a = 0; a < eta.eta1; ++a) {
      for (Index b = 0; b < eta.eta2; ++b, ++i) {
        const DenseVector cand = densify_sum(project(EigenClass(0), ModulatedDeltaTrain(n, eta.eta1, a, b)));
        for (std::size_t j = 0; j < cand.size(); ++j) matrix[i * cand.size() + j] = std::conj(cand[j]);
      }
    }
  }
  std::vector<Complex> dense(count);
  row.dense_seconds = best_of(repeats, [&] {
    for (std::size_t i = 0; i < count; ++i) {
      const Complex* r = matrix.data() + i * static_cast<std::size_t>(n);
      Complex acc{};
      for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) acc += r[j] * v[j];
      dense[i] = acc;
    }
  });

  for (std::size_t i = 0; i < count; ++i) {
    row.max_abs_diff = std::max({row.max_abs_diff, std::abs(fast[i] - naive[i]), std::abs(fast[i] - dense[i])});
  }
  return row;
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.sizes.empty()) {
    err << "error: bench needs at least one --n\n";
    return kUsageError;
  }
  for (const Index n : opts.sizes) {
    if (n < 2) {
      err << "error: every --n must be at least 2\n";
      return kUsageError;
    }
  }
  std::vector<BenchRow> rows;
  for (const Index n : opts.sizes) rows.push_back(bench_size(n, opts.repeats));

  const bool ok = write_output(opts.out, out, err, [&](std::ostream& os) {
    os << "n,fast_seconds,naive_seconds,dense_seconds,max_abs_diff,fast_beats_dense\n";
    for (const BenchRow& row : rows) {
      os << row.n << ',' << format_double(row.fast_seconds) << ',' << format_double(row.naive_seconds) << ','
         << format_double(row.dense_seconds) << ',' << format_double(row.max_abs_diff) << ','
         << (row.fast_seconds < row.dense_seconds ? "true" : "false") << '\n';
    }
  });
  if (!ok) return kUsageError;
  for (const BenchRow& row : rows) {
    if (!(row.max_abs_diff <= 1e-9)) {
      out << "paths disagree at n = " << row.n << ": " << sci(row.max_abs_diff) << '\n';
      return kClaimViolation;
    }
  }
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse eigenvector basis of the discrete Fourier transform"};
  app.require_subcommand(1);

  double tol_value = TolerancePolicy{}.residual_tol;
  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", tol_value, "zero and residual tolerance")->check(CLI::Range(1e-300, 1e-6));
  };

  BuildOptions build;
  std::string build_out;
  bool raw = false;
  auto* build_cmd = app.add_subcommand("build", "construct the basis and export it");
  build_cmd->add_option("--n", build.n, "dimension")->required();
  build_cmd->add_option("--out", build_out, "output path (default: stdout)");
  build_cmd->add_option("--format", build.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  build_cmd->add_flag("--raw", raw, "export F_k g without unit normalization");
  add_tol(build_cmd);

  VerifyOptions verify;
  Index verify_n = 0;
  std::string verify_input;
  auto* verify_cmd = app.add_subcommand("verify", "audit a built or exported basis");
  auto* verify_n_opt = verify_cmd->add_option("--n", verify_n, "dimension to build and audit");
  auto* verify_in_opt = verify_cmd->add_option("--input", verify_input, "JSON basis export to audit");
  verify_n_opt->excludes(verify_in_opt);
  add_tol(verify_cmd);

  AnalyzeOptions analyze_opts;
  std::string analyze_in, analyze_out;
  auto* analyze_cmd = app.add_subcommand("analyze", "expand a vector in the sparse basis");
  analyze_cmd->add_option("--n", analyze_opts.n, "dimension")->required();
  analyze_cmd->add_option("--input", analyze_in, "vector file (index,re,im)")->required();
  analyze_cmd->add_option("--out", analyze_out, "coefficient file (default: stdout)");
  add_tol(analyze_cmd);

  SurveyOptions survey;
  std::string survey_out;
  auto* survey_cmd = app.add_subcommand("survey", "classify orthogonality for n = 2..max-n");
  survey_cmd->add_option("--max-n", survey.max_n, "largest dimension")->required();
  survey_cmd->add_option("--out", survey_out, "CSV report path");
  survey_cmd->add_option("--jobs", survey.workers, "worker threads")->check(CLI::Range(1u, 256u));
  add_tol(survey_cmd);

  BenchOptions bench;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "time fast, naive and dense change of basis");
  bench_cmd->add_option("--n", bench.sizes, "dimensions")->expected(0, -1);
  bench_cmd->add_option("--out", bench_out, "CSV path (default: stdout)");
  bench_cmd->add_option("--repeats", bench.repeats, "timing repetitions")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
    return kUsageError;
  }

  TolerancePolicy tol;
  tol.zero_tol = tol_value;
  tol.residual_tol = tol_value;
  auto path_or_none = [](const std::string& s) {
    return s.empty() ? std::optional<std::filesystem::path>{} : std::filesystem::path(s);
  };

  try {
    if (build_cmd->parsed()) {
      build.out = path_or_none(build_out);
      build.normalize = !raw;
      build.tol = tol;
      return cmd_build(build, out, err);
    }
    if (verify_cmd->parsed()) {
      if (verify_n_opt->count() > 0) verify.n = verify_n;
      verify.input = path_or_none(verify_input);
      verify.tol = tol;
      return cmd_verify(verify, out, err);
    }
    if (analyze_cmd->parsed()) {
      analyze_opts.input = analyze_in;
      analyze_opts.out = path_or_none(analyze_out);
      analyze_opts.tol = tol;
      return cmd_analyze(analyze_opts, out, err);
    }
    if (survey_cmd->parsed()) {
      survey.out = path_or_none(survey_out);
      survey.tol = tol;
      return cmd_survey(survey, out, err);
    }
    bench.out = path_or_none(bench_out);
    return cmd_bench(bench, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace sparsedft::cli

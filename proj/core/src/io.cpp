#include "sparsedft/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

namespace sparsedft {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line, const char* what) {
  field = trim(field);
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError("line " + std::to_string(line) + ": invalid " + what + " '" + std::string(field) + "'", line);
  }
  return value;
}

// Typed field access that reports the JSON path on failure.
template <typename T>
T field(const json& node, const char* key, const std::string& path) {
  const auto it = node.find(key);
  if (it == node.end()) throw ParseError("missing field " + path + "/" + key, 0);
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError("ill-typed field " + path + "/" + key, 0);
  }
}

const json& array_field(const json& node, const char* key, const std::string& path) {
  const auto it = node.find(key);
  if (it == node.end() || !it->is_array()) throw ParseError("missing array " + path + "/" + key, 0);
  return *it;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line)
    : std::runtime_error(message), line_(line) {}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

void write_vector(std::ostream& out, const DenseVector& v) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    out << j << ',' << format_double(v[j].real()) << ',' << format_double(v[j].imag()) << '\n';
  }
}

DenseVector read_vector(std::istream& in) {
  std::vector<Complex> entries;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const std::string_view row = trim(text);
    if (row.empty()) continue;
    const auto c1 = row.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
    if (c2 == std::string_view::npos || row.find(',', c2 + 1) != std::string_view::npos) {
      throw ParseError("line " + std::to_string(line) + ": expected 'index,re,im'", line);
    }
    const auto index = parse_number<long long>(row.substr(0, c1), line, "index");
    if (index != static_cast<long long>(entries.size())) {
      throw ParseError("line " + std::to_string(line) + ": expected index " + std::to_string(entries.size()) +
                           ", got " + std::to_string(index),
                       line);
    }
    const double re = parse_number<double>(row.substr(c1 + 1, c2 - c1 - 1), line, "real part");
    const double im = parse_number<double>(row.substr(c2 + 1), line, "imaginary part");
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw ParseError("line " + std::to_string(line) + ": non-finite entry", line);
    }
    entries.emplace_back(re, im);
  }
  if (entries.empty()) throw ParseError("vector file contains no entries", line);
  return DenseVector(std::move(entries));
}

DenseVector read_vector_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_vector(in);
}

void write_vector_file(const std::filesystem::path& path, const DenseVector& v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_vector(out, v);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_coefficients(std::ostream& out, const CoefficientVector& c) {
  for (std::size_t j = 0; j < c.coefficients.size(); ++j) {
    out << j << ',' << format_double(c.coefficients[j].real()) << ','
        << format_double(c.coefficients[j].imag()) << '\n';
  }
}

void write_basis_json(std::ostream& out, const EigenBasis& basis, const ExportOptions& opts) {
  json doc;
  doc["format_version"] = kBasisFormatVersion;
  doc["normalized"] = opts.normalized;
  doc["n"] = basis.n;
  doc["eta1"] = basis.eta.eta1;
  doc["eta2"] = basis.eta.eta2;
  doc["zero_candidates"] = basis.zero_candidates;
  doc["dependent_candidates"] = basis.dependent_candidates;
  json vectors = json::array();
  for (const BasisVectorRecord& rec : basis.vectors) {
    json terms = json::array();
    for (const TrainTerm& term : rec.sum.terms()) {
      terms.push_back({{"coef_re", term.coefficient.real()},
                       {"coef_im", term.coefficient.imag()},
                       {"n", term.train.n()},
                       {"d1", term.train.stride()},
                       {"a", term.train.offset()},
                       {"b", term.train.modulation()},
                       {"phase_re", term.train.phase().real()},
                       {"phase_im", term.train.phase().imag()}});
    }
    json entries = json::array();
    const double factor = opts.normalized ? 1.0 : rec.scale;
    for (std::size_t j = 0; j < rec.dense.size(); ++j) {
      if (std::abs(rec.dense[j]) <= opts.zero_tol) continue;
      const Complex z = rec.dense[j] * factor;
      entries.push_back(json::array({j, z.real(), z.imag()}));
    }
    vectors.push_back({{"k", rec.k.k()},
                       {"a", rec.a},
                       {"b", rec.b},
                       {"scale", rec.scale},
                       {"support", rec.support},
                       {"terms", std::move(terms)},
                       {"entries", std::move(entries)}});
  }
  doc["vectors"] = std::move(vectors);
  out << doc.dump(1) << '\n';
}

EigenBasis read_basis_json(std::istream& in, const TolerancePolicy& tol) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto end = std::min<std::size_t>(e.byte, text.size());
    const auto line = static_cast<std::size_t>(
        std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n') + 1);
    throw ParseError("line " + std::to_string(line) + ": " + e.what(), line);
  }

  const int version = field<int>(doc, "format_version", "");
  if (version != kBasisFormatVersion) {
    throw ParseError("unsupported format_version " + std::to_string(version), 0);
  }
  EigenBasis basis;
  basis.n = field<Index>(doc, "n", "");
  if (basis.n < 1) throw ParseError("/n must be positive", 0);
  basis.eta = eta_pair(basis.n);
  if (field<Index>(doc, "eta1", "") != basis.eta.eta1 || field<Index>(doc, "eta2", "") != basis.eta.eta2) {
    throw ParseError("/eta1, /eta2 do not match n = " + std::to_string(basis.n), 0);
  }
  const bool normalized = doc.value("normalized", true);
  basis.zero_candidates = doc.value("zero_candidates", Index{0});
  basis.dependent_candidates = doc.value("dependent_candidates", Index{0});

  const json& vectors = array_field(doc, "vectors", "");
  for (std::size_t v = 0; v < vectors.size(); ++v) {
    const std::string path = "/vectors/" + std::to_string(v);
    const json& node = vectors[v];
    const int k = field<int>(node, "k", path);
    if (k < 0 || k > 3) throw ParseError(path + "/k out of range", 0);

    TrainSum sum(basis.n);
    const json& terms = array_field(node, "terms", path);
    if (terms.size() > TrainSum::kMaxTerms) throw ParseError(path + "/terms has more than four terms", 0);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tpath = path + "/terms/" + std::to_string(t);
      const json& term = terms[t];
      const Index n = field<Index>(term, "n", tpath);
      const Index d1 = field<Index>(term, "d1", tpath);
      const Index a = field<Index>(term, "a", tpath);
      const Index b = field<Index>(term, "b", tpath);
      if (n != basis.n || d1 < 1 || n % d1 != 0 || a < 0 || a >= d1 || b < 0 || b >= n / d1) {
        throw ParseError(tpath + ": invalid train label", 0);
      }
      const Complex phase{field<double>(term, "phase_re", tpath), field<double>(term, "phase_im", tpath)};
      const Complex coef{field<double>(term, "coef_re", tpath), field<double>(term, "coef_im", tpath)};
      sum.add(coef, ModulatedDeltaTrain(n, d1, a, b, phase));
    }

    DenseVector dense(static_cast<std::size_t>(basis.n));
    const json& entries = array_field(node, "entries", path);
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const json& triplet = entries[e];
      const std::string epath = path + "/entries/" + std::to_string(e);
      if (!triplet.is_array() || triplet.size() != 3 || !triplet[0].is_number_integer() ||
          !triplet[1].is_number() || !triplet[2].is_number()) {
        throw ParseError(epath + ": expected [index, re, im]", 0);
      }
      const auto index = triplet[0].get<Index>();
      if (index < 0 || index >= basis.n) throw ParseError(epath + ": index out of range", 0);
      dense[static_cast<std::size_t>(index)] = {triplet[1].get<double>(), triplet[2].get<double>()};
    }

    const double scale = field<double>(node, "scale", path);
    if (!(scale > 0.0)) throw ParseError(path + "/scale must be positive", 0);
    if (!normalized) dense *= Complex(1.0 / scale, 0.0);
    const Index support = support_size(dense, tol.zero_tol);
    basis.vectors.push_back({EigenClass(k), field<Index>(node, "a", path), field<Index>(node, "b", path),
                             std::move(sum), scale, std::move(dense), support});
    ++basis.per_class_counts[static_cast<std::size_t>(k)];
  }
  if (static_cast<Index>(basis.vectors.size()) != basis.n) {
    throw ParseError("/vectors has " + std::to_string(basis.vectors.size()) + " entries, expected " +
                         std::to_string(basis.n),
                     0);
  }
  return basis;
}

void write_basis_csv(std::ostream& out, const EigenBasis& basis, const ExportOptions& opts) {
  out << "vector,k,a,b,index,re,im\n";
  for (std::size_t v = 0; v < basis.vectors.size(); ++v) {
    const BasisVectorRecord& rec = basis.vectors[v];
    const double factor = opts.normalized ? 1.0 : rec.scale;
    for (std::size_t j = 0; j < rec.dense.size(); ++j) {
      if (std::abs(rec.dense[j]) <= opts.zero_tol) continue;
      const Complex z = rec.dense[j] * factor;
      out << v << ',' << rec.k.k() << ',' << rec.a << ',' << rec.b << ',' << j << ','
          << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
    }
  }
}

void write_survey_csv(std::ostream& out, const std::vector<SurveyRow>& rows) {
  out << "n,eta1,eta2,max_support,lower_bound,is_orthogonal,witness_first,witness_second,witness_re,"
         "witness_im,witness_labels\n";
  for (const SurveyRow& row : rows) {
    out << row.n << ',' << row.eta.eta1 << ',' << row.eta.eta2 << ',' << row.max_support << ','
        << format_double(row.lower_bound) << ',' << (row.is_orthogonal ? "true" : "false") << ',';
    if (row.witness) {
      out << row.witness->first << ',' << row.witness->second << ',' << format_double(row.witness->value.real())
          << ',' << format_double(row.witness->value.imag()) << ",\"" << row.witness_labels << "\"\n";
    } else {
      out << ",,,,\n";
    }
  }
}

}  // namespace sparsedft

#include "vrgames/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vrgames {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_index(const std::string& tok, Index& out) {
  const char* b = tok.data();
  const char* e = b + tok.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e;
}

bool parse_double(const std::string& tok, double& out) {
  char* end = nullptr;
  errno = 0;
  out = std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size() && tok.size() > 0 && errno == 0;
}

}  // namespace

SparseMatrix load_matrix_market(std::istream& in) {
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) throw MatrixMarketError("empty stream", 1);
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    throw MatrixMarketError("expected '%%MatrixMarket matrix ...' banner", lineno);
  if (lower(format) != "coordinate")
    throw MatrixMarketError("unsupported format '" + format + "' (coordinate only)", lineno);
  const std::string f = lower(field);
  if (f != "real" && f != "integer")
    throw MatrixMarketError("unsupported field '" + field + "' (real only)", lineno);
  const std::string sym = lower(symmetry);
  if (sym != "general" && sym != "symmetric" && sym != "skew-symmetric")
    throw MatrixMarketError("unsupported symmetry '" + symmetry + "'", lineno);

  // Size line: first non-comment, non-blank line.
  Index m = 0, n = 0, declared = 0;
  for (;;) {
    if (!std::getline(in, line)) throw MatrixMarketError("missing size line", lineno + 1);
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ss(line);
    std::string tm, tn, tz;
    ss >> tm >> tn >> tz;
    if (!parse_index(tm, m) || !parse_index(tn, n) || !parse_index(tz, declared))
      throw MatrixMarketError("malformed size line '" + line + "'", lineno);
    break;
  }
  if (m < 1 || n < 1 || declared < 0)
    throw MatrixMarketError("invalid dimensions in size line", lineno);
  if (sym != "general" && m != n)
    throw MatrixMarketError("symmetric matrix must be square", lineno);

  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(declared));
  Index seen = 0;
  while (seen < declared) {
    if (!std::getline(in, line))
      throw MatrixMarketError("expected " + std::to_string(declared) + " entries, got " +
                                  std::to_string(seen),
                              lineno + 1);
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ss(line);
    std::string ti, tj, tv;
    ss >> ti >> tj >> tv;
    Index i = 0, j = 0;
    double v = 0.0;
    if (!parse_index(ti, i) || !parse_index(tj, j))
      throw MatrixMarketError("non-numeric coordinate in '" + line + "'", lineno);
    if (!parse_double(tv, v))
      throw MatrixMarketError("non-numeric value in '" + line + "'", lineno);
    if (i < 1 || i > m || j < 1 || j > n)
      throw MatrixMarketError("coordinate (" + std::to_string(i) + ", " + std::to_string(j) +
                                  ") out of range",
                              lineno);
    if (!std::isfinite(v)) throw MatrixMarketError("non-finite value", lineno);
    entries.push_back({i - 1, j - 1, v});
    if (sym == "symmetric" && i != j) entries.push_back({j - 1, i - 1, v});
    if (sym == "skew-symmetric" && i != j) entries.push_back({j - 1, i - 1, -v});
    ++seen;
  }
  return SparseMatrix::from_triplets(m, n, std::move(entries));
}

SparseMatrix load_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return load_matrix_market(in);
}

void save_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << " " << a.cols() << " " << a.nnz() << "\n";
  char buf[64];
  for (Index i = 0; i < a.rows(); ++i) {
    const SparseVector r = a.row(i);
    for (size_t k = 0; k < r.indices.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%lld %lld %.17g\n", static_cast<long long>(i + 1),
                    static_cast<long long>(r.indices[k] + 1), r.values[k]);
      out << buf;
    }
  }
}

void save_matrix_market_file(const std::string& path, const SparseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save_matrix_market(out, a);
}

}  // namespace vrgames

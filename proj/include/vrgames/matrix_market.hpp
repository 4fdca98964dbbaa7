#ifndef VRGAMES_MATRIX_MARKET_HPP
#define VRGAMES_MATRIX_MARKET_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "vrgames/sparse_matrix.hpp"

namespace vrgames {

/// Parse failure with the 1-based line number of the offending input line.
class MatrixMarketError : public std::runtime_error {
 public:
  MatrixMarketError(const std::string& what, long line)
      : std::runtime_error("matrix market, line " + std::to_string(line) + ": " + what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

/// Reads "coordinate real general" (plus symmetric / skew-symmetric, which
/// are expanded on load). Duplicate coordinates are summed; explicit zeros
/// dropped.
SparseMatrix load_matrix_market(std::istream& in);
SparseMatrix load_matrix_market_file(const std::string& path);

void save_matrix_market(std::ostream& out, const SparseMatrix& a);
void save_matrix_market_file(const std::string& path, const SparseMatrix& a);

}  // namespace vrgames

#endif  // VRGAMES_MATRIX_MARKET_HPP

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cwvote {

enum class ErrorKind {
  InvalidPopulation,  // N < 2
  UnsupportedOrder,   // absolute moment order not in {1, 3}
  OutOfRange,         // statistic or target outside [kappa, N^2]
  Shape,              // mismatched group counts / column counts
  MalformedData,      // non +-1 entry or unparsable cell (carries row/col)
  InvalidSet,         // closed set K contains the true coupling, or is empty
  Precondition,       // e.g. beta <= 0 where positivity is required
  EnumerationCap,     // brute-force oracle beyond N = 16
  Io,                 // file system / parse failures
};

class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(ErrorKind kind, std::string message, std::size_t row = npos,
        std::size_t col = npos)
      : std::runtime_error(std::move(message)), kind_(kind), row_(row), col_(col) {}

  ErrorKind kind() const noexcept { return kind_; }

  // 1-based location for MalformedData; npos when not applicable.
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  ErrorKind kind_;
  std::size_t row_;
  std::size_t col_;
};

}  // namespace cwvote

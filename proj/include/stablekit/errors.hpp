#pragma once

#include <stdexcept>
#include <string>

namespace stablekit {

/// Base class for every error raised by the library. `kind()` is a stable,
/// machine-readable name (used verbatim in CLI error output).
class StableError : public std::runtime_error {
 public:
  StableError(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define STABLEKIT_DEFINE_ERROR(Name)                                     \
  class Name : public StableError {                                      \
   public:                                                               \
    explicit Name(const std::string& what) : StableError(#Name, what) {} \
  }

/// A parameter lies outside its admissible range.
STABLEKIT_DEFINE_ERROR(DomainError);
/// The requested operation is not defined for this tail index.
STABLEKIT_DEFINE_ERROR(UnsupportedAlpha);
/// Quadrature, root finding or an iterative solve failed to converge.
STABLEKIT_DEFINE_ERROR(NumericalFailure);
STABLEKIT_DEFINE_ERROR(DimensionMismatch);
STABLEKIT_DEFINE_ERROR(NotPositiveDefinite);
STABLEKIT_DEFINE_ERROR(EmptyTruncationRegion);
/// A mixture component lost (almost) all of its posterior mass.
STABLEKIT_DEFINE_ERROR(ComponentCollapse);
STABLEKIT_DEFINE_ERROR(RankDeficientData);
/// Empirical characteristic function is numerically indistinguishable from 1.
STABLEKIT_DEFINE_ERROR(DegenerateEcf);
STABLEKIT_DEFINE_ERROR(IllConditioned);
STABLEKIT_DEFINE_ERROR(MaxIterations);
/// Invalid input that is not a numerical domain problem (n too small, ...).
STABLEKIT_DEFINE_ERROR(InvalidInput);

#undef STABLEKIT_DEFINE_ERROR

/// CSV parse failure; row and column are 1-based, 0 when unknown.
class ParseError : public StableError {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : StableError("ParseError", what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

}  // namespace stablekit

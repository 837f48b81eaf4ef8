#pragma once

#include <stdexcept>
#include <string>

namespace dioph {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// The requested sup-norm range contains no nonzero integer point.
class EmptyRange : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class UnsupportedDegree : public Error {
 public:
  using Error::Error;
};

class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

// Enumeration ran past its node budget. Record extraction attaches the
// partial table; see approx.hpp.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace dioph

#pragma once

#include <stdexcept>
#include <string>

namespace qmax {

// Parameter outside a family's domain (sigma <= 0, non-finite fields, p not in (0,1), ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Not enough observations for the requested operation.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptySeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or semantically invalid input file.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every candidate family failed to fit.
class EmptyRankingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linearity score requested for points with a single abscissa.
class UndefinedScoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmax

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace partmetrics {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed partition file; carries the 1-based line number when known.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// Two partitions defined over different element counts.
class SizeMismatchError : public Error {
public:
  using Error::Error;
};

// Exhaustive enumeration requested beyond the configured cap.
class EnsembleTooLargeError : public Error {
public:
  using Error::Error;
};

// Kahan compensated accumulator. All entropy/MI/expectation sums go
// through this so invariant checks hold at 1e-12.
class KahanSum {
public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// Enumeration cap: PARTMETRICS_ENUM_CAP env var, else 12.
std::size_t enumeration_cap();

// Worker count: PARTMETRICS_THREADS env var, else 1. Results never
// depend on this value.
unsigned worker_threads();

}  // namespace partmetrics

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace rankfreq {

// Base of every error thrown by the library. Callers that only need to
// report a failure can catch this; the subclasses carry context.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input bytes are not valid UTF-8.
class IngestError : public Error {
 public:
  IngestError(const std::string& what, std::size_t byte_offset)
      : Error(what), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Nothing survived tokenization/filtering.
class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

// Corpora tokenized in different modes cannot be combined.
class ModeMismatchError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of a function (rank out of range, x < 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A fit could not be produced (window too small, no qualifying range,
// degenerate spectrum).
class FitError : public Error {
 public:
  using Error::Error;
};

// An iterative fit hit its iteration cap. The last iterate is kept so the
// caller can decide whether it is usable.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_c, double last_gamma)
      : Error(what), last_c_(last_c), last_gamma_(last_gamma) {}
  double last_c() const noexcept { return last_c_; }
  double last_gamma() const noexcept { return last_gamma_; }

 private:
  double last_c_;
  double last_gamma_;
};

// A root could not be bracketed or a nonlinear system did not converge.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual_lo = 0.0,
              double residual_hi = 0.0)
      : Error(what), residual_lo_(residual_lo), residual_hi_(residual_hi) {}
  double residual_lo() const noexcept { return residual_lo_; }
  double residual_hi() const noexcept { return residual_hi_; }

 private:
  double residual_lo_;
  double residual_hi_;
};

}  // namespace rankfreq

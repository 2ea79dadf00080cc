#ifndef FWI_ERRORS_H_
#define FWI_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fwi {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument is outside its documented domain (alpha not in [0,1], k > N_P,
// missing epsilon, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// No feasible solution exists for the requested constraints.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// The input is too large for an exact (oracle-scale) routine.
class ScaleError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fwi

#endif  // FWI_ERRORS_H_

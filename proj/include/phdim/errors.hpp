#ifndef PHDIM_ERRORS_HPP
#define PHDIM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phdim {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed numeric input or a violated precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Every lifetime (or nearest-neighbour distance) vanished.
class DegenerateCloud : public Error {
 public:
  using Error::Error;
};

/// The fitted log-log slope left (0, 1), so alpha / (1 - m) is meaningless.
class SlopeOutOfRange : public Error {
 public:
  using Error::Error;
};

class FitDegenerate : public Error {
 public:
  using Error::Error;
};

/// A file did not match its declared format. `line()` is 0 when the error
/// is not tied to a particular line.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace phdim

#endif  // PHDIM_ERRORS_HPP

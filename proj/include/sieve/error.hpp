#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sieve {

// Bad input data: malformed files, inconsistent dimensions, degenerate corpora.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed XML in a dump file. offset() is the byte offset (0-based) in the
// stream where the problem was detected.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : DataError(what + " at byte offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// A line-oriented text file with a bad line. line() is 1-based.
class LineError : public DataError {
 public:
  LineError(const std::string& file, std::size_t line, const std::string& what)
      : DataError(file + ": line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Internal consistency check failed; indicates a bug rather than bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sieve

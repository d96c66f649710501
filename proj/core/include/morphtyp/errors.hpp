#pragma once

#include <stdexcept>
#include <string>

namespace morphtyp {

// Bad or malformed input data (files, CLI values, annotation sheets).
// Maps to process exit code 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (rank deficiency, degenerate degrees of freedom).
// Maps to process exit code 2.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// InputError carrying a file position.
class ParseError : public InputError {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& msg)
      : InputError(path + ":" + std::to_string(line) + ": " + msg),
        path_(path),
        line_(line) {}

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

}  // namespace morphtyp

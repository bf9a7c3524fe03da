#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pulsom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vector did not have the dimension the lattice (or state) expects.
class DimensionError : public Error {
 public:
  DimensionError(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

/// A parameter was outside its documented domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Configuration file problems: unknown keys, bad values, missing required keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File system problems: missing files, unreadable/unwritable paths.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A corpus file (SPHERE audio, .phn/.wrd alignment, dataset CSV) is malformed.
class CorpusError : public Error {
 public:
  CorpusError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
        file_(file),
        line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

/// Training produced a non-finite weight or an out-of-bounds state.
class DivergenceError : public Error {
 public:
  DivergenceError(int epoch, const std::string& what)
      : Error("training diverged at epoch " + std::to_string(epoch) + ": " + what), epoch_(epoch) {}

  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

}  // namespace pulsom

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ued {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input content violates a format or data invariant. Carries the 1-based
/// line number when the problem can be pinned to one.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, std::optional<std::size_t> line = std::nullopt)
      : Error(line ? what + " (line " + std::to_string(*line) + ")" : what), line_(line) {}

  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  std::optional<std::size_t> line_;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Unknown novel or speaker.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// A stream is shorter than the rolling window.
class InsufficientTokens : public Error {
 public:
  InsufficientTokens(std::size_t token_count, std::size_t window_size)
      : Error("stream has " + std::to_string(token_count) + " tokens, fewer than window size " +
              std::to_string(window_size)),
        token_count_(token_count),
        window_size_(window_size) {}

  std::size_t token_count() const noexcept { return token_count_; }
  std::size_t window_size() const noexcept { return window_size_; }

 private:
  std::size_t token_count_;
  std::size_t window_size_;
};

/// The first window of a stream matched no lexicon entry.
class NoCoverage : public Error {
 public:
  using Error::Error;
};

/// Rank correlation requested for a constant series.
class UndefinedCorrelation : public Error {
 public:
  using Error::Error;
};

}  // namespace ued

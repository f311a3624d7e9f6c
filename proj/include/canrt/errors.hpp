#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace canrt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourcePos {
  int line = 1;
  int column = 1;
};

/// Syntax error with its location and the set of tokens that would have been accepted.
class ParseError : public Error {
 public:
  ParseError(SourcePos pos, std::string message, std::vector<std::string> expected = {});

  SourcePos pos() const { return pos_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }

  /// `file:line:col: message`
  std::string render(std::string_view file) const;

 private:
  SourcePos pos_;
  std::string message_;
  std::vector<std::string> expected_;
};

class ValidationError : public Error {
 public:
  enum class Kind { undeclared, duplicate, recursion, conflict };

  ValidationError(Kind kind, SourcePos pos, std::string message);

  Kind kind() const { return kind_; }
  SourcePos pos() const { return pos_; }
  const std::string& message() const { return message_; }
  std::string render(std::string_view file) const;

 private:
  Kind kind_;
  SourcePos pos_;
  std::string message_;
};

class EffectConflict : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class TraceDesync : public Error {
 public:
  using Error::Error;
};

class NoMatchingTrace : public Error {
 public:
  using Error::Error;
};

class StateLimitExceeded : public Error {
 public:
  StateLimitExceeded(std::size_t limit, std::size_t frontier);

  std::size_t limit() const { return limit_; }
  std::size_t frontier() const { return frontier_; }

 private:
  std::size_t limit_;
  std::size_t frontier_;
};

class UnknownLabel : public Error {
 public:
  explicit UnknownLabel(std::string label);

  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

}  // namespace canrt

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace simfuse {

// Base of every error the library throws. Callers that only need a message
// catch this; the CLI maps it to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Carries the 1-based line number when known (0 otherwise).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptySentence : public Error {
 public:
  EmptySentence() : Error("empty sentence") {}
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("empty corpus") {}
};

class EmptyEval : public Error {
 public:
  EmptyEval() : Error("nothing to evaluate") {}
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class LabelKindError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DegenerateData : public Error {
 public:
  using Error::Error;
};

class UndefinedCorrelation : public Error {
 public:
  UndefinedCorrelation() : Error("correlation undefined: zero variance") {}
};

}  // namespace simfuse

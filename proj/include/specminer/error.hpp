#pragma once

#include <stdexcept>
#include <string>

namespace specminer {

// Input errors map to CLI exit code 2, analysis errors to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class AnalysisError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public InputError {
 public:
  SyntaxError(std::string file, int line, int column, std::string expected)
      : InputError(file + ":" + std::to_string(line) + ":" +
                   std::to_string(column) + ": syntax error: expected " +
                   expected),
        file_(std::move(file)),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& expected() const { return expected_; }

 private:
  std::string file_;
  int line_;
  int column_;
  std::string expected_;
};

class NameResolutionError : public InputError {
 public:
  using InputError::InputError;
};

class UnresolvedType : public InputError {
 public:
  using InputError::InputError;
};

class InheritanceCycle : public InputError {
 public:
  using InputError::InputError;
};

class NoEntrypoint : public InputError {
 public:
  using InputError::InputError;
};

class EmptyUsage : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class CycleAfterAugmentation : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class SizeLimitExceeded : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class InvalidGraph : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class NoMatch : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class NothingMissing : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class CorpusTooSmall : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace specminer

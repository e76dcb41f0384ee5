#pragma once

#include <stdexcept>
#include <string>

namespace sdx {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Source text is outside the supported subset or ill-formed.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Malformed document, diff, dataset row or index file.
class FormatError : public Error {
 public:
  using Error::Error;
  FormatError(int line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

/// Commit has an empty diff; nothing to encode.
class NoChangeError : public Error {
 public:
  using Error::Error;
};

/// Fine-tune encoding requested for a commit with no buggy-side nodes.
class EmptySideError : public Error {
 public:
  using Error::Error;
};

/// Path is not a readable repository.
class RepoError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

/// Cross-project split cannot meet partition budgets within the slack.
class InfeasibleSplitError : public Error {
 public:
  using Error::Error;
};

/// Embedding provider produced vectors of different lengths.
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// Embedding provider failed or produced unparseable output.
class ProviderError : public Error {
 public:
  using Error::Error;
};

class AuthError : public Error {
 public:
  using Error::Error;
};

class RateLimitError : public Error {
 public:
  RateLimitError(const std::string& msg, int retry_after_seconds)
      : Error(msg), retry_after_(retry_after_seconds) {}
  int retry_after_seconds() const { return retry_after_; }

 private:
  int retry_after_;
};

class NetworkError : public Error {
 public:
  using Error::Error;
};

}  // namespace sdx

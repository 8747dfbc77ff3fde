#pragma once

#include <exception>
#include <string>
#include <utility>

namespace hsball {

// Every public operation either returns a value or throws exactly one
// ToolkitError; the CLI maps the kind to a structured stderr report and
// exit code 1.
enum class ErrorKind {
  InvalidParams,
  PointOutsideBall,
  LogKernelCase,
  DegreeOverflow,
  SingularGram,
  BisectionNoConverge,
  QuadratureUnderResolved,
};

const char* to_string(ErrorKind kind);

class ToolkitError : public std::exception {
 public:
  ToolkitError(ErrorKind kind, std::string message)
      : kind_(kind), message_(std::move(message)) {
    full_ = std::string(to_string(kind_)) + ": " + message_;
  }

  ErrorKind kind() const { return kind_; }
  const std::string& message() const { return message_; }
  const char* what() const noexcept override { return full_.c_str(); }

 private:
  ErrorKind kind_;
  std::string message_;
  std::string full_;
};

[[noreturn]] inline void fail(ErrorKind kind, std::string message) {
  throw ToolkitError(kind, std::move(message));
}

}  // namespace hsball

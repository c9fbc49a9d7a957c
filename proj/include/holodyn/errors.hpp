#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace holodyn {

/// Base of every error the engine raises. kind() is a stable machine-readable
/// tag used in CLI error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : Error("SyntaxError", message + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnsupportedFunction : public Error {
 public:
  UnsupportedFunction(const std::string& name, std::size_t position)
      : Error("UnsupportedFunction",
              "unsupported function '" + name + "' at position " + std::to_string(position)),
        name_(name),
        position_(position) {}
  const std::string& name() const noexcept { return name_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::string name_;
  std::size_t position_;
};

class ClassificationAmbiguous : public Error {
 public:
  explicit ClassificationAmbiguous(const std::string& why)
      : Error("ClassificationAmbiguous", "cannot classify function: " + why) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message) : Error("InvalidArgument", message) {}
};

class TargetExceptional : public Error {
 public:
  explicit TargetExceptional(const std::string& message) : Error("TargetExceptional", message) {}
};

class TooShortOrbit : public Error {
 public:
  explicit TooShortOrbit(const std::string& message) : Error("TooShortOrbit", message) {}
};

class LambdaOutOfRange : public Error {
 public:
  explicit LambdaOutOfRange(double lambda)
      : Error("LambdaOutOfRange",
              "lambda must lie in (0, 1/e); got " + std::to_string(lambda)) {}
};

class SymbolOutOfRange : public Error {
 public:
  SymbolOutOfRange(int symbol, int bound)
      : Error("SymbolOutOfRange", "itinerary symbol " + std::to_string(symbol) +
                                      " exceeds bound " + std::to_string(bound)) {}
};

class BranchMiss : public Error {
 public:
  explicit BranchMiss(const std::string& message) : Error("BranchMiss", message) {}
};

}  // namespace holodyn

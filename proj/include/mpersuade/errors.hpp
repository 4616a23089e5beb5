#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mpersuade {

// Base class of every library error. code() is module-qualified
// ("objective.no_bitangent", "prior.empty_interval", ...) so front ends can
// report failures without parsing messages.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

// Input that violates a documented precondition or type invariant.
class InvalidArgument : public Error {
public:
  InvalidArgument(std::string code, const std::string& message)
      : Error(std::move(code), message) {}
};

class ShapeUnrecognized : public Error {
public:
  explicit ShapeUnrecognized(const std::string& message)
      : Error("objective.shape_unrecognized", message) {}
};

// A solver was handed an objective of the wrong curvature class.
class ShapeError : public Error {
public:
  ShapeError(std::string code, const std::string& message)
      : Error(std::move(code), message) {}
};

class NoBitangent : public Error {
public:
  explicit NoBitangent(const std::string& message)
      : Error("objective.no_bitangent", message) {}
};

class EmptyInterval : public Error {
public:
  explicit EmptyInterval(const std::string& message)
      : Error("prior.empty_interval", message) {}
};

class MalformedSignal : public Error {
public:
  explicit MalformedSignal(const std::string& message)
      : Error("prior.malformed_signal", message) {}
};

class TooLarge : public Error {
public:
  explicit TooLarge(const std::string& message) : Error("oracle.too_large", message) {}
};

class CertificateRequired : public Error {
public:
  explicit CertificateRequired(const std::string& message)
      : Error("continuous.certificate_required", message) {}
};

class NonmonotoneSignal : public Error {
public:
  explicit NonmonotoneSignal(const std::string& message)
      : Error("censorship.nonmonotone_signal", message) {}
};

class ConfigInvalid : public Error {
public:
  explicit ConfigInvalid(const std::string& message) : Error("cli.config_invalid", message) {}
};

}  // namespace mpersuade

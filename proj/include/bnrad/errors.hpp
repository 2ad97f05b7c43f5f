#ifndef BNRAD_ERRORS_HPP
#define BNRAD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bnrad {

// Base class for all toolkit errors. `code()` is a stable machine-readable
// tag used by the CLI when emitting structured error JSON.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

struct InvalidRadius : Error {
  explicit InvalidRadius(const std::string& msg) : Error("InvalidRadius", msg) {}
};

struct ParseError : Error {
  ParseError(std::size_t position, const std::string& msg)
      : Error("ParseError", msg + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error("DomainError", msg) {}
};

struct NonFinite : Error {
  explicit NonFinite(const std::string& msg) : Error("NonFinite", msg) {}
};

struct HypothesisViolation : Error {
  explicit HypothesisViolation(const std::string& msg)
      : Error("HypothesisViolation", msg) {}
};

struct QuadratureFailure : Error {
  explicit QuadratureFailure(const std::string& msg)
      : Error("QuadratureFailure", msg) {}
};

struct GridMismatch : Error {
  explicit GridMismatch(const std::string& msg) : Error("GridMismatch", msg) {}
};

struct BlowUp : Error {
  BlowUp(double where, const std::string& msg)
      : Error("BlowUp", msg), location(where) {}
  double location;
};

struct StiffnessFailure : Error {
  explicit StiffnessFailure(const std::string& msg)
      : Error("StiffnessFailure", msg) {}
};

struct BracketFailure : Error {
  explicit BracketFailure(const std::string& msg) : Error("BracketFailure", msg) {}
};

struct NotASolution : Error {
  explicit NotASolution(const std::string& msg) : Error("NotASolution", msg) {}
};

struct ZeroFunction : Error {
  explicit ZeroFunction(const std::string& msg) : Error("ZeroFunction", msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error("ConfigError", msg) {}
};

}  // namespace bnrad

#endif

#pragma once

#include <stdexcept>
#include <string>

namespace cnsp {

/// Error with a stable machine-readable code, used for structured CLI output.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

inline Error invalid_argument(const std::string& what) { return Error("invalid_argument", what); }
inline Error config_error(const std::string& what) { return Error("config", what); }
inline Error io_error(const std::string& what) { return Error("io", what); }

/// Numerical blow-up: the integrator could not continue past `tau`.
class BlowupError : public Error {
public:
  BlowupError(double tau, const std::string& what) : Error("blowup", what), tau_(tau) {}
  double tau() const { return tau_; }

private:
  double tau_;
};

}  // namespace cnsp

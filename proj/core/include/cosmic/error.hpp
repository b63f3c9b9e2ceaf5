#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cosmic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the domain an operation accepts.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The waveform dimension budget cannot be met (empty null space,
/// overlapping sub-bases, N*K_s > K, ...).
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, int antenna = -1)
      : Error(what), antenna_(antenna) {}
  /// Zero-based antenna that triggered the failure, or -1.
  int antenna() const noexcept { return antenna_; }

 private:
  int antenna_;
};

/// Receiver-side inconsistency (null-space dimension differs from the
/// advertised symbol count, shape mismatch).
class DecodeError : public Error {
 public:
  using Error::Error;
};

/// Scenario configuration rejected; carries every violated constraint.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cosmic

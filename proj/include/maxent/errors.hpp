#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace maxent {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad interval, unsorted breakpoints, unknown names, ...
class ValidationError : public Error {
public:
  using Error::Error;
};

/// A scalar map was evaluated outside its declared domain.
class DomainError : public Error {
public:
  DomainError(const std::string& what, double location)
      : Error(what), location_(location) {}

  /// Offending argument (a function argument or a quadrature node).
  double location() const noexcept { return location_; }

private:
  double location_;
};

/// An integrand produced a non-finite value at a quadrature node.
class NonFiniteError : public DomainError {
public:
  using DomainError::DomainError;
};

/// One or more hypotheses of a strong-duality certificate could not be established.
class HypothesisError : public Error {
public:
  HypothesisError(std::vector<std::string> failed, const std::string& detail)
      : Error(join(failed) + ": " + detail), failed_(std::move(failed)) {}
  HypothesisError(std::string hypothesis, const std::string& detail)
      : HypothesisError(std::vector<std::string>{std::move(hypothesis)}, detail) {}

  /// Names of the failed hypotheses, in the order they were checked.
  const std::vector<std::string>& failed() const noexcept { return failed_; }
  std::string hypothesis() const { return join(failed_); }

  bool failed(const std::string& name) const {
    for (const auto& f : failed_)
      if (f == name) return true;
    return false;
  }

private:
  static std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
    return out;
  }

  std::vector<std::string> failed_;
};

}  // namespace maxent

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptkho {

// Invalid input: bad configuration, malformed files, inconsistent sizes.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Failure of the simulated physics on the chosen discretization.
class PhysicsError : public std::runtime_error {
 public:
  enum class Kind { overflow, edge_guard, quadrature };

  PhysicsError(Kind kind, const std::string& what,
               std::optional<int> kick = std::nullopt)
      : std::runtime_error(kick ? what + " (at kick " + std::to_string(*kick) + ")" : what),
        kind_(kind),
        kick_(kick),
        detail_(what) {}

  Kind kind() const noexcept { return kind_; }
  std::optional<int> kick() const noexcept { return kick_; }

  PhysicsError at_kick(int kick) const { return PhysicsError(kind_, detail_, kick); }

 private:
  Kind kind_;
  std::optional<int> kick_;
  std::string detail_;
};

// A nonlinear fit that did not converge. Carries the last iterate so the
// caller can inspect how far it got.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, std::vector<double> last_iterate = {})
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

}  // namespace ptkho

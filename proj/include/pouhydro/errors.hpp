/**
 * @file errors.hpp
 * @brief Exception types shared by the solver modules.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pouhydro {

/// An argument lies outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Inconsistent call: mismatched sizes, empty selections and the like.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Node geometry does not support the requested shape functions
/// (singular moment matrix, coincident or unsorted nodes, too few nodes).
class IllPosedGeometry : public std::runtime_error {
public:
  IllPosedGeometry(const std::string& what, std::size_t node)
      : std::runtime_error(what + " (node " + std::to_string(node) + ")"),
        node_(node) {}

  std::size_t node() const noexcept { return node_; }

private:
  std::size_t node_;
};

/// Thermodynamic state that a valid run can never reach (rho <= 0, e <= 0).
class StateCorruption : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The Riemann problem generates a vacuum.
class VacuumError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Time stepping could not continue (repeated rejection, dt underflow).
class StepFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace pouhydro

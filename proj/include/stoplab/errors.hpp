#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stoplab {

// Domain violation (argument outside the model's truncated state space).
class DomainError : public std::out_of_range {
public:
    explicit DomainError(const std::string& what) : std::out_of_range(what) {}
};

// Invalid run/grid/model configuration.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Coefficient backend cannot produce a requested derivative order.
class CapabilityError : public std::runtime_error {
public:
    explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite state during path generation; carries the offending step.
class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, std::size_t step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

// PSOR failed to reach the requested residual; keeps the residual history.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::vector<double> residual_history)
        : std::runtime_error(what), residuals_(std::move(residual_history)) {}
    const std::vector<double>& residual_history() const { return residuals_; }

private:
    std::vector<double> residuals_;
};

// A value-field column has no stop node where one is required
// (signals that phi_max is too small for the configured costs).
class BoundaryEscapeError : public std::runtime_error {
public:
    explicit BoundaryEscapeError(const std::string& what) : std::runtime_error(what) {}
};

// Two runs cannot be diffed (grid/mode mismatch).
class ComparisonError : public std::runtime_error {
public:
    explicit ComparisonError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stoplab

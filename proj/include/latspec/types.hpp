#pragma once
/**
 * Shared aliases and error types for the lattice spectral toolkit.
 *
 * Errors are split into two families so that the CLI can map them to
 * distinct exit codes:
 *   - ConfigError     : malformed or inconsistent run configuration (exit 2),
 *                       carries the offending field path;
 *   - NumericalError  : a numerical precondition was violated at run time
 *                       (threshold violations, conditioning failures, ...)
 *                       (exit 3).
 */

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace latspec {

using Vec3   = Eigen::Vector3d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

} // namespace latspec

#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

// Frequency outside the declared Sellmeier validity band.
class OutOfBand : public std::domain_error {
public:
    explicit OutOfBand(const std::string& what) : std::domain_error(what) {}
};

// |q| exceeds n*omega/c: the mode does not propagate.
class Evanescent : public std::domain_error {
public:
    explicit Evanescent(const std::string& what) : std::domain_error(what) {}
};

// Fixed-point angle solve failed to converge.
class NoConvergence : public std::runtime_error {
public:
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Brute-force integrator refused an oversized lattice.
class GridTooLarge : public std::length_error {
public:
    explicit GridTooLarge(const std::string& what) : std::length_error(what) {}
};

// Pattern has no usable baseline or no identifiable dip.
class DegeneratePattern : public std::runtime_error {
public:
    explicit DegeneratePattern(const std::string& what) : std::runtime_error(what) {}
};

// Scene or grid failed a numerical sanity gate (e.g. too many evanescent nodes).
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

// Configuration file problem, anchored to a line when one is known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace spdc

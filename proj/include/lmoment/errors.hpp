#pragma once

#include <stdexcept>
#include <string>

namespace lmoment {

/// Input outside an operation's documented domain (bad modulus, character
/// kind, sigma outside the operating strip, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Evaluation requested at a pole (zeta-type series at s = 1).
class PoleError : public std::domain_error {
public:
    explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

/// Requested accuracy could not be reached within the configured depth or
/// node budget.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Argument continuation of log L failed after the configured number of
/// refinements; the usual cause is a zero on or very near the path.  The
/// failure is always reported, never silently patched over.
class BranchTrackingError : public std::runtime_error {
public:
    explicit BranchTrackingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lmoment

#pragma once

#include <stdexcept>
#include <string>

namespace hgrl {

/// A model (process, policy, map, matrix) violates its invariants.
class InvalidModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An enumeration or memo table grew past its configured cap.
class SizeLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A history-dependent function was queried outside the domain it was built on.
class DomainError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// No original action realizes the abstract action chosen at some history.
class UpliftInfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// B(b|s) = 0 while the abstract policy puts mass on b.
class DegenerateSupportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Experiment document could not be parsed or resolved.
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hgrl

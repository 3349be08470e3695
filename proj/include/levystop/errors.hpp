#pragma once

#include <stdexcept>
#include <string>

namespace levystop {

/// Malformed input: bad parameters, non-normalized rewards, bad ranges.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Reward polynomial does not have the required monic, p(0)=0 shape.
class ShapeError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Laplace exponent evaluated at a pole of the jump part.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The killed supremum is not a proper random variable for this (model, r).
class ValidityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A computation that should succeed mathematically failed numerically.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace levystop

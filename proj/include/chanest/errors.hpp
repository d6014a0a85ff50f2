// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chanest {

/// Out-of-range or otherwise unusable scalar parameter.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Matrix or vector dimensions that do not fit together.
class StructuralError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Ensemble too small or containing non-finite members.
class InvalidEnsemble : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Weights that are negative or do not sum to one.
class InvalidWeights : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A factorization or square root failed (matrix not SPD / not PSD).
class NumericalDegeneracy : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration text that could not be parsed or validated.
/// `line()` is 1-based; 0 means the error came from an override or a
/// cross-field check rather than a specific line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace chanest

#pragma once

#include <stdexcept>
#include <string>

namespace openset {

/// Malformed input file or record.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands whose shapes or dimensions do not conform.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Loss or gradient evaluation left the finite range.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent model / threshold / dataset combination.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace openset

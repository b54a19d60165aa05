// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_NUMERICS_ERROR_HPP
#define SMAJUDGE_NUMERICS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace smajudge {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A forward primitive, loss or gradient produced a NaN or infinity.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Tape misuse: detached or non-scalar loss, repeated reverse pass.
class GradientError : public Error {
public:
    using Error::Error;
};

/// Input data violates a schema or domain invariant.
class DataError : public Error {
public:
    using Error::Error;
};

/// Configuration is invalid or inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Checkpoint container is corrupt, truncated or incompatible.
class CheckpointError : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public NumericError {
public:
    DivergenceError(const std::string& what, std::size_t batch)
        : NumericError(what), batch_(batch) {}
    [[nodiscard]] std::size_t batch() const noexcept { return batch_; }

private:
    std::size_t batch_;
};

}  // namespace smajudge

#endif  // SMAJUDGE_NUMERICS_ERROR_HPP

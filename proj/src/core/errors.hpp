// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ricmag authors

#pragma once

#include <stdexcept>
#include <string>

namespace ricmag {

// Failure categories, mirrored one-to-one by the C API status codes.
enum class ErrorCode {
    InvalidArgument,
    Singular,       // matrix singular to working tolerance
    NoConvergence,  // an iteration hit its budget with a finite residual
    Diverged,       // non-finite values encountered
    AreFailure,     // no stabilizing algebraic Riccati solution
    BadConfig,
    Io,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message)
{
    throw Error(code, message);
}

} // namespace ricmag

// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace raggednn {

/// Shape disagreement between operands (wrong inner width, row count, ...).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A structural invariant of a batch/index container does not hold.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation was violated by the caller.
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Bad model spec / run config (unknown field, broken width chain, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-finite values or other numeric breakdown at runtime.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File I/O and (de)serialization failures.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace raggednn

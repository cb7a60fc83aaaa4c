// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace hoipoint {

// Exit-code buckets for the CLI: config = 2, I/O = 3, validation = 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hoipoint

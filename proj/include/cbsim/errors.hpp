// SPDX-License-Identifier: Apache-2.0
//
// cbsim: two-cell coordinated zero-forcing downlink with limited-backhaul
// CSI exchange and per-user quantization bit allocation
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cbsim {

// Bad scenario parameters or malformed config input. CLI maps this to exit 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

// Rank-deficient zero-forcing constraint stack. The Monte-Carlo driver
// treats it as a redraw signal; after bounded retries it propagates.
// CLI maps this (and SizeGuardError) to exit 3.
class SingularityError : public std::runtime_error {
  public:
    explicit SingularityError(const std::string &msg) : std::runtime_error(msg) {}
};

// Enumeration guard for the exhaustive allocator.
class SizeGuardError : public std::runtime_error {
  public:
    explicit SizeGuardError(const std::string &msg) : std::runtime_error(msg) {}
};

// File I/O failure, reported with path context. CLI maps this to exit 4.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace cbsim

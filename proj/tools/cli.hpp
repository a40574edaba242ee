// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace spikedeblur::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;

/// Runs one CLI invocation. argv[0] is the program name.
int run(std::span<const std::string> argv, std::ostream &out, std::ostream &err);

} // namespace spikedeblur::cli

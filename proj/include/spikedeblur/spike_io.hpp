// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "spikedeblur/spike_model.hpp"

namespace spikedeblur {

/*
 * .spks container, all fields little-endian:
 *
 *   offset  size  field
 *        0     4  magic "SPKS"
 *        4     2  version (u16) = 1
 *        6     4  width (u32)
 *       10     4  height (u32)
 *       14     8  frame_count (u64)
 *       22     8  omega (f64)
 *       30     8  sample_rate_hz (f64)
 *       38     .  frame_count planes of ceil(width*height/8) bytes each,
 *                 row-major pixels, MSB first, pad bits zero
 *     end-4    4  CRC-32 (u32) of every preceding byte
 */

inline constexpr char kSpikeMagic[4] = {'S', 'P', 'K', 'S'};
inline constexpr std::uint16_t kSpikeFormatVersion = 1;
inline constexpr std::size_t kSpikeHeaderBytes = 38;
inline constexpr std::size_t kSpikeTrailerBytes = 4;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::size_t packed_plane_bytes(std::size_t width, std::size_t height) {
    return (width * height + 7) / 8;
}

/// Writes header, planes and CRC trailer; returns the byte count written.
/// Throws IoError if the sink fails.
std::size_t write_stream(const SpikeStream &stream, std::ostream &sink);

struct ReadOptions {
    /// Strict: CRC trailer required and verified, pad bits must be zero and
    /// no bytes may follow the trailer. Lenient: trailer optional (verified
    /// when present) and pad bits ignored.
    bool strict = true;
};

/// Throws FormatError on malformed or truncated input.
SpikeStream read_stream(std::istream &source, const ReadOptions &options = {});

void write_stream_file(const SpikeStream &stream, const std::string &path);
SpikeStream read_stream_file(const std::string &path, const ReadOptions &options = {});

} // namespace spikedeblur

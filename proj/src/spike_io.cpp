// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include "spikedeblur/spike_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <vector>

namespace spikedeblur {

namespace {

using Bytes = std::vector<std::uint8_t>;

template <typename T>
void put_le(Bytes &out, T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(static_cast<std::uint8_t>((value >> (8 * i)) & 0xFFU));
    }
}

void put_f64(Bytes &out, double value) { put_le(out, std::bit_cast<std::uint64_t>(value)); }

template <typename T>
T get_le(const std::uint8_t *p) {
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(p[i]) << (8 * i);
    return value;
}

std::uint32_t crc32_of(const std::uint8_t *data, std::size_t size) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed large buffers in chunks.
    while (size > 0) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(size, 1U << 30));
        crc = crc32(crc, data, chunk);
        data += chunk;
        size -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

} // namespace

std::size_t write_stream(const SpikeStream &stream, std::ostream &sink) {
    if (stream.width() > UINT32_MAX || stream.height() > UINT32_MAX) {
        throw std::invalid_argument("write_stream: dimensions exceed 32 bits");
    }
    const std::size_t plane_bytes = packed_plane_bytes(stream.width(), stream.height());
    Bytes buf;
    buf.reserve(kSpikeHeaderBytes + plane_bytes * stream.size() + kSpikeTrailerBytes);
    buf.insert(buf.end(), std::begin(kSpikeMagic), std::end(kSpikeMagic));
    put_le<std::uint16_t>(buf, kSpikeFormatVersion);
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(stream.width()));
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(stream.height()));
    put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(stream.size()));
    put_f64(buf, stream.omega());
    put_f64(buf, stream.sample_rate_hz());

    for (const auto &plane : stream.planes()) {
        const auto bits = plane.bits();
        const std::size_t start = buf.size();
        buf.resize(start + plane_bytes, 0);
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i]) buf[start + i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
        }
    }
    put_le<std::uint32_t>(buf, crc32_of(buf.data(), buf.size()));

    sink.write(reinterpret_cast<const char *>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!sink) throw IoError("write_stream: sink write failed");
    return buf.size();
}

SpikeStream read_stream(std::istream &source, const ReadOptions &options) {
    const Bytes buf((std::istreambuf_iterator<char>(source)), std::istreambuf_iterator<char>());
    if (source.bad()) throw IoError("read_stream: source read failed");
    if (buf.size() < kSpikeHeaderBytes) throw FormatError("read_stream: truncated header");
    const std::uint8_t *p = buf.data();
    if (std::memcmp(p, kSpikeMagic, 4) != 0) throw FormatError("read_stream: bad magic");
    const auto version = get_le<std::uint16_t>(p + 4);
    if (version != kSpikeFormatVersion) {
        throw FormatError("read_stream: unsupported version " + std::to_string(version));
    }
    const auto width = get_le<std::uint32_t>(p + 6);
    const auto height = get_le<std::uint32_t>(p + 10);
    const auto frames = get_le<std::uint64_t>(p + 14);
    const double omega = std::bit_cast<double>(get_le<std::uint64_t>(p + 22));
    const double rate = std::bit_cast<double>(get_le<std::uint64_t>(p + 30));
    if (width == 0 || height == 0) throw FormatError("read_stream: zero width or height");
    if (!std::isfinite(omega) || !(omega > 0.0)) throw FormatError("read_stream: invalid omega");
    if (!std::isfinite(rate) || !(rate > 0.0)) throw FormatError("read_stream: invalid sample rate");

    const std::size_t plane_bytes = packed_plane_bytes(width, height);
    const std::size_t available = buf.size() - kSpikeHeaderBytes;
    if (frames > available / plane_bytes) throw FormatError("read_stream: truncated payload");
    const std::size_t payload_end = kSpikeHeaderBytes + static_cast<std::size_t>(frames) * plane_bytes;
    const std::size_t remaining = buf.size() - payload_end;

    if (remaining == kSpikeTrailerBytes) {
        if (get_le<std::uint32_t>(p + payload_end) != crc32_of(p, payload_end)) {
            throw FormatError("read_stream: checksum mismatch");
        }
    } else if (options.strict) {
        throw FormatError(remaining < kSpikeTrailerBytes ? "read_stream: missing checksum trailer"
                                                         : "read_stream: trailing bytes");
    } else if (remaining != 0) {
        throw FormatError("read_stream: trailing bytes");
    }

    SpikeStream stream(width, height, omega, rate);
    const std::size_t pixels = static_cast<std::size_t>(width) * height;
    for (std::uint64_t f = 0; f < frames; ++f) {
        const std::uint8_t *src = p + kSpikeHeaderBytes + f * plane_bytes;
        if (options.strict && pixels % 8 != 0) {
            const auto pad_mask = static_cast<std::uint8_t>(0xFFU >> (pixels % 8));
            if ((src[plane_bytes - 1] & pad_mask) != 0) {
                throw FormatError("read_stream: nonzero pad bits in plane " + std::to_string(f));
            }
        }
        SpikePlane plane(width, height, static_cast<std::int64_t>(f));
        auto bits = plane.bits();
        for (std::size_t i = 0; i < pixels; ++i) {
            bits[i] = (src[i / 8] >> (7 - i % 8)) & 1U;
        }
        stream.push_back(std::move(plane));
    }
    return stream;
}

void write_stream_file(const SpikeStream &stream, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write_stream(stream, out);
}

SpikeStream read_stream_file(const std::string &path, const ReadOptions &options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return read_stream(in, options);
}

} // namespace spikedeblur

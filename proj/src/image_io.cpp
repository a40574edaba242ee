// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include "spikedeblur/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace spikedeblur {

namespace {

int maxval_for(int bit_depth) {
    if (bit_depth == 8) return 255;
    if (bit_depth == 16) return 65535;
    throw std::invalid_argument("netpbm: bit depth must be 8 or 16");
}

void write_pnm(std::span<const double> values, std::size_t width, std::size_t height,
               const char *magic, int bit_depth, std::ostream &out) {
    const int maxval = maxval_for(bit_depth);
    out << magic << '\n' << width << ' ' << height << '\n' << maxval << '\n';
    std::vector<char> data;
    data.reserve(values.size() * (bit_depth == 16 ? 2 : 1));
    for (double v : values) {
        const double clamped = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
        const auto level = static_cast<unsigned>(std::lround(clamped * maxval));
        if (bit_depth == 16) data.push_back(static_cast<char>((level >> 8) & 0xFFU));
        data.push_back(static_cast<char>(level & 0xFFU));
    }
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("netpbm: write failed");
}

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream &in) {
    std::string token;
    int ch = in.get();
    for (;;) {
        while (ch != EOF && std::isspace(ch)) ch = in.get();
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
            continue;
        }
        break;
    }
    while (ch != EOF && !std::isspace(ch)) {
        token.push_back(static_cast<char>(ch));
        ch = in.get();
    }
    if (token.empty()) throw FormatError("netpbm: truncated header");
    // `ch` was the single whitespace that terminates the token.
    return token;
}

std::size_t parse_positive(const std::string &token, const char *what) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(token, &pos);
    } catch (const std::exception &) {
        throw FormatError(std::string("netpbm: invalid ") + what);
    }
    if (pos != token.size() || v == 0) throw FormatError(std::string("netpbm: invalid ") + what);
    return static_cast<std::size_t>(v);
}

struct PnmHeader {
    std::size_t channels = 1;
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t maxval = 255;
};

PnmHeader read_header(std::istream &in) {
    const std::string magic = next_token(in);
    PnmHeader h;
    if (magic == "P5") {
        h.channels = 1;
    } else if (magic == "P6") {
        h.channels = 3;
    } else {
        throw FormatError("netpbm: unsupported magic '" + magic + "'");
    }
    h.width = parse_positive(next_token(in), "width");
    h.height = parse_positive(next_token(in), "height");
    h.maxval = parse_positive(next_token(in), "maxval");
    if (h.maxval > 65535) throw FormatError("netpbm: maxval above 65535");
    return h;
}

void read_samples(std::istream &in, const PnmHeader &h, std::span<double> out) {
    const std::size_t bytes_per = h.maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(out.size() * bytes_per);
    in.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
        throw FormatError("netpbm: truncated pixel data");
    }
    const double scale = static_cast<double>(h.maxval);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const unsigned level = bytes_per == 2 ? (raw[2 * i] << 8U) | raw[2 * i + 1] : raw[i];
        if (level > h.maxval) throw FormatError("netpbm: sample above maxval");
        out[i] = level / scale;
    }
}

} // namespace

void write_pgm(const GrayImage &image, std::ostream &out, int bit_depth) {
    write_pnm(image.values(), image.width(), image.height(), "P5", bit_depth, out);
}

void write_ppm(const RgbFrame &image, std::ostream &out, int bit_depth) {
    write_pnm(image.values(), image.width(), image.height(), "P6", bit_depth, out);
}

AnyImage read_pnm(std::istream &in) {
    const PnmHeader h = read_header(in);
    if (h.channels == 1) {
        GrayImage img(h.width, h.height);
        read_samples(in, h, img.values());
        return img;
    }
    RgbFrame img(h.width, h.height);
    read_samples(in, h, img.values());
    return img;
}

GrayImage read_pgm(std::istream &in) {
    auto img = read_pnm(in);
    if (auto *gray = std::get_if<GrayImage>(&img)) return std::move(*gray);
    throw FormatError("netpbm: expected a P5 (gray) image");
}

RgbFrame read_ppm(std::istream &in) {
    auto img = read_pnm(in);
    if (auto *rgb = std::get_if<RgbFrame>(&img)) return std::move(*rgb);
    throw FormatError("netpbm: expected a P6 (RGB) image");
}

namespace {

std::ofstream open_out(const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    return out;
}

std::ifstream open_in(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return in;
}

} // namespace

void write_pgm_file(const GrayImage &image, const std::string &path, int bit_depth) {
    auto out = open_out(path);
    write_pgm(image, out, bit_depth);
}

void write_ppm_file(const RgbFrame &image, const std::string &path, int bit_depth) {
    auto out = open_out(path);
    write_ppm(image, out, bit_depth);
}

GrayImage read_pgm_file(const std::string &path) {
    auto in = open_in(path);
    return read_pgm(in);
}

RgbFrame read_ppm_file(const std::string &path) {
    auto in = open_in(path);
    return read_ppm(in);
}

AnyImage read_pnm_file(const std::string &path) {
    auto in = open_in(path);
    return read_pnm(in);
}

} // namespace spikedeblur

// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "spikedeblur/image.hpp"
#include "spikedeblur/spike_io.hpp"

namespace spikedeblur {

// Binary netpbm: P5 (gray) and P6 (RGB), maxval up to 65535. Samples are
// mapped to [0, 1] by maxval; writing clamps to [0, 1] and rounds to the
// nearest level. 16-bit samples are big-endian as netpbm requires.

void write_pgm(const GrayImage &image, std::ostream &out, int bit_depth = 8);
void write_ppm(const RgbFrame &image, std::ostream &out, int bit_depth = 8);
GrayImage read_pgm(std::istream &in);
RgbFrame read_ppm(std::istream &in);

using AnyImage = std::variant<GrayImage, RgbFrame>;
/// Reads either P5 or P6.
AnyImage read_pnm(std::istream &in);

void write_pgm_file(const GrayImage &image, const std::string &path, int bit_depth = 8);
void write_ppm_file(const RgbFrame &image, const std::string &path, int bit_depth = 8);
GrayImage read_pgm_file(const std::string &path);
RgbFrame read_ppm_file(const std::string &path);
AnyImage read_pnm_file(const std::string &path);

} // namespace spikedeblur

#pragma once

#include <string>

#include "grpdal/vec.hpp"

namespace grpdal {

struct Image {
    std::size_t h = 0, w = 0;
    Vec pixels;  // row-major, values in [0,1]
};

/// Reads a P2 (ascii) or P5 (binary) PGM with maxval <= 65535; pixels are
/// mapped to [0,1] by dividing by maxval.  Malformed input throws IoError
/// with the byte offset.
Image read_pgm(const std::string& path);

/// Writes an 8-bit binary (P5) PGM; values are clamped to [0,1] and rounded.
void write_pgm(const std::string& path, const Image& img);

/// Ascii (P2) variant, used by tests for the cross-format check.
void write_pgm_ascii(const std::string& path, const Image& img);

}  // namespace grpdal

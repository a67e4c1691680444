#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "revfilt/image.hpp"

namespace revfilt {

// Binary PGM (P5, one channel) and PPM (P6, three channels), maxval 255.
// Reading maps bytes linearly to [0,1]; writing clamps to [0,1] and rounds
// half up, so 0.5 becomes 128. Header comments are skipped on read and never
// written.

Image read_netpbm(std::istream& in);
void write_netpbm(std::ostream& out, const Image& image);

Image decode_netpbm(std::string_view bytes);
std::string encode_netpbm(const Image& image);

Image read_image(const std::filesystem::path& path);
void write_image(const Image& image, const std::filesystem::path& path);

/// 8-bit quantization used by the writer.
unsigned char quantize_to_byte(double value) noexcept;

}  // namespace revfilt

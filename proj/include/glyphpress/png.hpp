#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glyphpress/typesetter.hpp"

namespace glyphpress {

// Minimal PNG encoder: RGB8, no interlacing, filter 0 on every scanline,
// zlib level 6. The output is a pure function of the pixel buffer, which is
// what makes golden-hash tests possible.
std::vector<std::uint8_t> encode_png(const PageImage& image);

void write_png_file(const PageImage& image, const std::string& path);

}  // namespace glyphpress

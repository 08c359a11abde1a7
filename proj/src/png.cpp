#include "glyphpress/png.hpp"

#include <zlib.h>

#include <fstream>
#include <stdexcept>

namespace glyphpress {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               const std::vector<std::uint8_t>& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const auto crc = crc32(0L, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

std::vector<std::uint8_t> encode_png(const PageImage& image) {
  if (image.width_px <= 0 || image.height_px <= 0) {
    throw std::invalid_argument("encode_png: empty image");
  }
  const std::size_t row_bytes = static_cast<std::size_t>(image.width_px) * 3;

  std::vector<std::uint8_t> raw;
  raw.reserve((row_bytes + 1) * image.height_px);
  for (int y = 0; y < image.height_px; ++y) {
    raw.push_back(0);  // filter: none
    const auto* row = image.pixels.data() + row_bytes * y;
    raw.insert(raw.end(), row, row + row_bytes);
  }

  uLongf compressed_len = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> compressed(compressed_len);
  if (compress2(compressed.data(), &compressed_len, raw.data(),
                static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw std::runtime_error("encode_png: deflate failed");
  }
  compressed.resize(compressed_len);

  std::vector<std::uint8_t> out;
  static const std::uint8_t magic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  out.insert(out.end(), magic, magic + 8);

  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(image.width_px));
  put_u32(ihdr, static_cast<std::uint32_t>(image.height_px));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(2);  // color type: truecolor
  ihdr.push_back(0);  // compression
  ihdr.push_back(0);  // filter
  ihdr.push_back(0);  // no interlace
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", compressed);
  put_chunk(out, "IEND", {});
  return out;
}

void write_png_file(const PageImage& image, const std::string& path) {
  const auto bytes = encode_png(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write PNG: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace glyphpress

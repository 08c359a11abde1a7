#pragma once

#include <cstdint>
#include <string>

namespace glyphpress {

// Fixed-grid ink mask for one glyph. Rows run top to bottom; within a row
// the most significant of the low `width_units` bits is the leftmost column.
struct GlyphBitmap {
  int width_units = 0;
  int height_units = 0;
  const std::uint8_t* rows = nullptr;

  bool ink(int col, int row) const {
    return (rows[row] >> (width_units - 1 - col)) & 1u;
  }
};

// Font metrics and ink masks for the typesetter. Advances are in points and
// scale linearly in font_size and h_scale; every codepoint maps to some glyph
// with a positive advance.
class GlyphMetricsProvider {
 public:
  virtual ~GlyphMetricsProvider() = default;
  virtual double advance_pt(char32_t codepoint, double font_size_pt,
                            double h_scale) const = 0;
  virtual GlyphBitmap glyph_bitmap(char32_t codepoint) const = 0;
  // Height of the em square in ink-grid units; glyph bitmaps are positioned
  // and scaled relative to it.
  virtual int em_units() const = 0;
};

// Built-in 5x7 dot-matrix font covering printable ASCII. Codepoints outside
// that range render as a full-width box glyph so layout stays total on any
// input; text never falls back to system fonts. The em is 8 units tall:
// ASCII glyphs are 5x7 with a 6-unit advance, boxes are 7x7 with an 8-unit
// (full em) advance.
class EmbeddedBitmapFont final : public GlyphMetricsProvider {
 public:
  static const EmbeddedBitmapFont& instance();

  double advance_pt(char32_t codepoint, double font_size_pt,
                    double h_scale) const override;
  GlyphBitmap glyph_bitmap(char32_t codepoint) const override;
  int em_units() const override { return 8; }
};

// Resolves a font_family identifier. All families currently map onto the
// embedded grid font; the identifier is kept so configs stay meaningful when
// a real outline-font provider is plugged in.
const GlyphMetricsProvider& metrics_for_family(const std::string& family);
const GlyphMetricsProvider& default_metrics();

}  // namespace glyphpress

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "glyphpress/config.hpp"
#include "glyphpress/font.hpp"

namespace glyphpress {

// Text normalization applied before layout (the provenance stream below is
// exact with respect to this form, not the raw input):
//   - input is decoded as UTF-8, invalid bytes become U+FFFD;
//   - \r\n and \r become \n; every \n is a paragraph break, so consecutive
//     newlines produce empty paragraphs;
//   - runs of spaces/tabs collapse to a single inter-word gap and paragraph
//     edges are trimmed; other control characters are dropped;
//   - codepoints outside printable ASCII are individually breakable
//     full-width glyphs and join adjacent text without a gap.
std::string normalize_text(const std::string& utf8_text);

struct TokenGlyph {
  char32_t codepoint;
  std::size_t source_index;  // byte offset into the normalized text
};

struct LineToken {
  std::vector<TokenGlyph> glyphs;
  double width_pt = 0.0;
  bool space_before = false;  // a collapsed gap separates it from the previous token
  bool marker = false;        // newline_markup glyphs; source_index is the newline byte
};

struct Line {
  std::vector<LineToken> tokens;
  int paragraph = 0;
  bool first_in_paragraph = false;
  bool last_in_paragraph = false;
};

struct LineBreakResult {
  std::vector<Line> lines;
  std::shared_ptr<const std::string> normalized;
  int paragraph_count = 0;
};

// Greedy first-fit breaking on collapsed gaps. A token wider than the line
// budget is force-broken at glyph boundaries. Requires a valid config.
LineBreakResult break_lines(const std::string& text, const RenderConfig& config,
                            const GlyphMetricsProvider& metrics);

struct GlyphRun {
  char32_t codepoint;
  double x_pt = 0.0;
  double y_pt = 0.0;  // top of the line box
  double width_pt = 0.0;
  std::size_t source_index = 0;
  bool marker = false;
};

struct RectPt {
  double x = 0.0, y = 0.0, w = 0.0, h = 0.0;
};

struct PageLayout {
  double page_width_pt = 0.0;
  double page_height_pt = 0.0;
  RectPt content;
  std::vector<GlyphRun> runs;
  std::vector<RectPt> paragraph_boxes;
  // Byte range of `source` owned by this page. Ranges tile the whole
  // normalized text: separators between pages belong to the earlier page.
  std::size_t span_begin = 0;
  std::size_t span_end = 0;
  std::shared_ptr<const std::string> source;
};

// Stacks lines at line_height pitch with paragraph spacing, indentation and
// alignment applied; starts a new page when the next line would leave the
// content box. Justified slack goes to inter-word gaps only, in whole 1/64 pt
// units assigned largest-remainder first; the last line of a paragraph stays
// left-aligned. Empty input yields one blank page.
std::vector<PageLayout> paginate(const LineBreakResult& broken, const RenderConfig& config);

std::string page_provenance_text(const PageLayout& layout);

struct PageImage {
  int width_px = 0;
  int height_px = 0;
  int dpi = 0;
  Rgb background;  // the page color; auto_crop treats it as empty space
  std::vector<std::uint8_t> pixels;  // RGB8 row-major, 3 bytes per pixel
  std::shared_ptr<const PageLayout> layout;

  Rgb pixel(int x, int y) const {
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * width_px + x);
    return Rgb{pixels[i], pixels[i + 1], pixels[i + 2]};
  }
};

// Deterministic rasterization: background, paragraph boxes, optional borders,
// then glyph bitmaps scaled to font_size at dpi by nearest neighbor.
// Identical inputs produce byte-identical buffers.
PageImage rasterize(const PageLayout& layout, const RenderConfig& config,
                    const GlyphMetricsProvider& metrics);

// Tight crop to the bounding box of non-background pixels; a page with no ink
// is returned unchanged. Idempotent, never discards ink.
PageImage auto_crop(const PageImage& image);

// break_lines -> paginate -> rasterize, plus auto_crop of the last page when
// the config requests it. Throws std::invalid_argument on an invalid config.
std::vector<PageImage> render_document(const std::string& text, const RenderConfig& config,
                                       const GlyphMetricsProvider& metrics = default_metrics());

// Concatenated page provenance; equals normalize_text() of the rendered text.
std::string document_provenance_text(const std::vector<PageImage>& pages);

}  // namespace glyphpress

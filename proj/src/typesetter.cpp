#include "glyphpress/typesetter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "glyphpress/unicode.hpp"

namespace glyphpress {

namespace {

constexpr double kWidthEps = 1e-6;
constexpr std::size_t kNoNewline = static_cast<std::size_t>(-1);

// Justified slack is distributed in whole sub-point units so rasterization
// stays reproducible.
constexpr double kSlackUnitsPerPt = 64.0;

bool is_blank(char32_t cp) { return cp == U' ' || cp == U'\t'; }
bool is_word_cp(char32_t cp) { return cp >= 0x21 && cp <= 0x7E; }

struct ParsedToken {
  std::vector<char32_t> cps;
  bool space_before = false;
};

struct ParsedParagraph {
  std::vector<ParsedToken> tokens;
};

struct Document {
  std::string normalized;
  // tokens carry byte offsets into `normalized`
  std::vector<std::vector<LineToken>> paragraphs;
  std::vector<std::size_t> newline_index;  // byte of the trailing '\n', kNoNewline for the last
};

std::vector<ParsedParagraph> parse_paragraphs(const std::string& input) {
  std::vector<ParsedParagraph> paragraphs(1);
  ParsedToken word;
  bool gap_pending = false;

  auto emit = [&](std::vector<char32_t> cps) {
    ParsedToken tok;
    tok.cps = std::move(cps);
    tok.space_before = gap_pending && !paragraphs.back().tokens.empty();
    gap_pending = false;
    paragraphs.back().tokens.push_back(std::move(tok));
  };
  auto flush_word = [&] {
    if (!word.cps.empty()) {
      emit(std::move(word.cps));
      word.cps.clear();
    }
  };

  std::size_t pos = 0;
  while (pos < input.size()) {
    char32_t cp = utf8_next(input, pos);
    if (cp == U'\r') {
      if (pos < input.size() && input[pos] == '\n') ++pos;
      cp = U'\n';
    }
    if (cp == U'\n') {
      flush_word();
      gap_pending = false;
      paragraphs.emplace_back();
    } else if (is_blank(cp)) {
      flush_word();
      gap_pending = true;
    } else if (is_word_cp(cp)) {
      word.cps.push_back(cp);
    } else if (cp >= 0x80) {
      flush_word();
      emit({cp});
    }
    // remaining control characters are dropped
  }
  flush_word();
  return paragraphs;
}

Document build_document(const std::string& input) {
  Document doc;
  const auto parsed = parse_paragraphs(input);
  doc.paragraphs.reserve(parsed.size());
  for (std::size_t p = 0; p < parsed.size(); ++p) {
    std::vector<LineToken> tokens;
    tokens.reserve(parsed[p].tokens.size());
    for (const auto& tok : parsed[p].tokens) {
      LineToken out;
      out.space_before = tok.space_before;
      if (out.space_before) doc.normalized.push_back(' ');
      out.glyphs.reserve(tok.cps.size());
      for (char32_t cp : tok.cps) {
        out.glyphs.push_back({cp, doc.normalized.size()});
        utf8_append(doc.normalized, cp);
      }
      tokens.push_back(std::move(out));
    }
    doc.paragraphs.push_back(std::move(tokens));
    if (p + 1 < parsed.size()) {
      doc.newline_index.push_back(doc.normalized.size());
      doc.normalized.push_back('\n');
    } else {
      doc.newline_index.push_back(kNoNewline);
    }
  }
  return doc;
}

double token_width(const LineToken& tok, const RenderConfig& c,
                   const GlyphMetricsProvider& m) {
  double w = 0.0;
  for (const auto& g : tok.glyphs) {
    w += m.advance_pt(g.codepoint, c.font_size_pt, c.h_scale);
  }
  return w;
}

double line_indent_pt(const RenderConfig& c, bool first_in_paragraph) {
  const double indent = c.indent.indent_em * c.font_size_pt;
  switch (c.indent.mode) {
    case IndentMode::None: return 0.0;
    case IndentMode::FirstLine: return first_in_paragraph ? indent : 0.0;
    case IndentMode::Block: return indent;
    case IndentMode::Hanging: return first_in_paragraph ? 0.0 : indent;
  }
  return 0.0;
}

}  // namespace

std::string normalize_text(const std::string& utf8_text) {
  return build_document(utf8_text).normalized;
}

LineBreakResult break_lines(const std::string& text, const RenderConfig& config,
                            const GlyphMetricsProvider& metrics) {
  Document doc = build_document(text);
  const double content_w = config.content_width_pt();
  const double space_adv = metrics.advance_pt(U' ', config.font_size_pt, config.h_scale);

  LineBreakResult result;
  result.normalized = std::make_shared<const std::string>(std::move(doc.normalized));
  result.paragraph_count = static_cast<int>(doc.paragraphs.size());

  for (std::size_t p = 0; p < doc.paragraphs.size(); ++p) {
    auto tokens = std::move(doc.paragraphs[p]);

    if (config.newline_markup && !config.newline_markup->empty() &&
        doc.newline_index[p] != kNoNewline) {
      LineToken marker;
      marker.marker = true;
      marker.space_before = !tokens.empty();
      std::size_t pos = 0;
      const std::string& mk = *config.newline_markup;
      while (pos < mk.size()) {
        marker.glyphs.push_back({utf8_next(mk, pos), doc.newline_index[p]});
      }
      tokens.push_back(std::move(marker));
    }
    for (auto& tok : tokens) tok.width_pt = token_width(tok, config, metrics);

    std::vector<Line> para_lines;
    Line cur;
    double cur_w = 0.0;
    bool first = true;
    double avail = content_w - line_indent_pt(config, first);

    auto flush = [&] {
      cur.paragraph = static_cast<int>(p);
      para_lines.push_back(std::move(cur));
      cur = Line{};
      cur_w = 0.0;
      first = false;
      avail = content_w - line_indent_pt(config, false);
    };

    for (auto& tok : tokens) {
      LineToken rest = std::move(tok);
      for (;;) {
        const double gap = (!cur.tokens.empty() && rest.space_before) ? space_adv : 0.0;
        if (cur_w + gap + rest.width_pt <= avail + kWidthEps) {
          cur_w += gap + rest.width_pt;
          cur.tokens.push_back(std::move(rest));
          break;
        }
        if (cur.tokens.empty()) {
          // oversized token: keep as many glyphs as fit, at least one
          std::size_t k = 0;
          double piece_w = 0.0;
          while (k < rest.glyphs.size()) {
            const double adv = metrics.advance_pt(rest.glyphs[k].codepoint,
                                                  config.font_size_pt, config.h_scale);
            if (k > 0 && piece_w + adv > avail + kWidthEps) break;
            piece_w += adv;
            ++k;
          }
          if (k >= rest.glyphs.size()) {
            // single glyph wider than the content box still gets placed
            cur_w += rest.width_pt;
            cur.tokens.push_back(std::move(rest));
            break;
          }
          LineToken piece;
          piece.marker = rest.marker;
          piece.space_before = false;
          piece.glyphs.assign(rest.glyphs.begin(),
                              rest.glyphs.begin() + static_cast<std::ptrdiff_t>(k));
          piece.width_pt = piece_w;
          cur.tokens.push_back(std::move(piece));
          cur_w += piece_w;
          flush();
          rest.glyphs.erase(rest.glyphs.begin(),
                            rest.glyphs.begin() + static_cast<std::ptrdiff_t>(k));
          rest.width_pt -= piece_w;
          rest.space_before = false;
          continue;
        }
        flush();
      }
    }
    if (!cur.tokens.empty() || para_lines.empty()) flush();

    para_lines.front().first_in_paragraph = true;
    para_lines.back().last_in_paragraph = true;
    for (auto& line : para_lines) result.lines.push_back(std::move(line));
  }
  return result;
}

namespace {

struct PlacedLine {
  double x0 = 0.0;
  double x1 = 0.0;
  bool has_glyphs = false;
};

PlacedLine place_line(const Line& line, double y, const RenderConfig& c,
                      const GlyphMetricsProvider& metrics, PageLayout& page) {
  const double space_adv = metrics.advance_pt(U' ', c.font_size_pt, c.h_scale);
  const double box_left = page.content.x + line_indent_pt(c, line.first_in_paragraph);
  const double box_right = page.content.x + page.content.w;

  double natural = 0.0;
  int gap_count = 0;
  for (std::size_t i = 0; i < line.tokens.size(); ++i) {
    if (i > 0 && line.tokens[i].space_before) {
      natural += space_adv;
      ++gap_count;
    }
    natural += line.tokens[i].width_pt;
  }

  const double slack = (box_right - box_left) - natural;
  double x0 = box_left;
  std::vector<double> gap_extra;
  switch (c.alignment) {
    case Alignment::Left:
      break;
    case Alignment::Right:
      x0 = box_left + std::max(slack, 0.0);
      break;
    case Alignment::Center:
      x0 = box_left + std::max(slack, 0.0) / 2.0;
      break;
    case Alignment::Justify:
      if (!line.last_in_paragraph && gap_count > 0 && slack > 0.0) {
        const auto units = static_cast<long long>(std::floor(slack * kSlackUnitsPerPt));
        const long long base = units / gap_count;
        const long long rem = units % gap_count;
        gap_extra.resize(static_cast<std::size_t>(gap_count));
        for (long long i = 0; i < gap_count; ++i) {
          gap_extra[static_cast<std::size_t>(i)] =
              static_cast<double>(base + (i < rem ? 1 : 0)) / kSlackUnitsPerPt;
        }
      }
      break;
  }

  PlacedLine placed;
  placed.x0 = x0;
  double x = x0;
  std::size_t gap_idx = 0;
  for (std::size_t i = 0; i < line.tokens.size(); ++i) {
    const auto& tok = line.tokens[i];
    if (i > 0 && tok.space_before) {
      x += space_adv;
      if (gap_idx < gap_extra.size()) x += gap_extra[gap_idx++];
    }
    for (const auto& g : tok.glyphs) {
      const double adv = metrics.advance_pt(g.codepoint, c.font_size_pt, c.h_scale);
      page.runs.push_back({g.codepoint, x, y, adv, g.source_index, tok.marker});
      x += adv;
      placed.has_glyphs = true;
    }
  }
  placed.x1 = x;
  return placed;
}

}  // namespace

std::vector<PageLayout> paginate(const LineBreakResult& broken, const RenderConfig& config) {
  const auto& metrics = metrics_for_family(config.font_family);
  const double lh = config.line_height_pt;
  const double content_top = config.margins_pt.top_pt;
  const double content_bottom = content_top + config.content_height_pt();

  std::vector<PageLayout> pages;
  // paragraph id -> accumulated box on the current page
  std::map<int, RectPt> para_boxes;

  auto new_page = [&] {
    PageLayout page;
    page.page_width_pt = config.page_width_pt();
    page.page_height_pt = config.page_height_pt();
    page.content = RectPt{config.margins_pt.left_pt, config.margins_pt.top_pt,
                          config.content_width_pt(), config.content_height_pt()};
    page.source = broken.normalized;
    pages.push_back(std::move(page));
  };
  auto close_page = [&] {
    for (auto& [para, rect] : para_boxes) pages.back().paragraph_boxes.push_back(rect);
    para_boxes.clear();
  };

  new_page();
  double y = content_top;
  bool at_top = true;

  for (const auto& line : broken.lines) {
    double extra = (line.first_in_paragraph && !at_top) ? config.spacing_pt.before_pt : 0.0;
    if (y + extra + lh > content_bottom + kWidthEps) {
      close_page();
      new_page();
      y = content_top;
      extra = 0.0;
    }
    y += extra;

    const PlacedLine placed = place_line(line, y, config, metrics, pages.back());
    if (placed.has_glyphs) {
      auto [it, inserted] =
          para_boxes.try_emplace(line.paragraph, RectPt{placed.x0, y, placed.x1 - placed.x0, lh});
      if (!inserted) {
        RectPt& r = it->second;
        const double nx0 = std::min(r.x, placed.x0);
        const double nx1 = std::max(r.x + r.w, placed.x1);
        const double ny1 = std::max(r.y + r.h, y + lh);
        r = RectPt{nx0, r.y, nx1 - nx0, ny1 - r.y};
      }
    }

    y += lh;
    at_top = false;
    if (line.last_in_paragraph) y += config.spacing_pt.after_pt;
  }
  close_page();

  // Page spans tile the normalized text; a glyphless page owns nothing and
  // inherits the boundary of the page after it.
  const std::size_t total = broken.normalized->size();
  std::vector<std::size_t> begin(pages.size(), total);
  for (std::size_t k = pages.size(); k-- > 0;) {
    if (!pages[k].runs.empty()) {
      begin[k] = pages[k].runs.front().source_index;
    } else if (k + 1 < pages.size()) {
      begin[k] = begin[k + 1];
    }
  }
  if (!pages.empty()) begin[0] = 0;
  for (std::size_t k = 0; k < pages.size(); ++k) {
    pages[k].span_begin = begin[k];
    pages[k].span_end = (k + 1 < pages.size()) ? begin[k + 1] : total;
  }
  return pages;
}

std::string page_provenance_text(const PageLayout& layout) {
  return layout.source->substr(layout.span_begin, layout.span_end - layout.span_begin);
}

namespace {

class Raster {
 public:
  Raster(PageImage& img) : img_(img) {}

  void fill(int x0, int y0, int x1, int y1, Rgb c) {
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, img_.width_px);
    y1 = std::min(y1, img_.height_px);
    for (int y = y0; y < y1; ++y) {
      auto* row = img_.pixels.data() + 3 * (static_cast<std::size_t>(y) * img_.width_px);
      for (int x = x0; x < x1; ++x) {
        row[3 * x] = c.r;
        row[3 * x + 1] = c.g;
        row[3 * x + 2] = c.b;
      }
    }
  }

  void set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= img_.width_px || y >= img_.height_px) return;
    auto* p = img_.pixels.data() + 3 * (static_cast<std::size_t>(y) * img_.width_px + x);
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

 private:
  PageImage& img_;
};

}  // namespace

PageImage rasterize(const PageLayout& layout, const RenderConfig& config,
                    const GlyphMetricsProvider& metrics) {
  const double k = config.dpi / kPointsPerInch;
  PageImage img;
  img.dpi = config.dpi;
  img.width_px = std::max(1, static_cast<int>(std::lround(config.page_size.width_in * config.dpi)));
  img.height_px = std::max(1, static_cast<int>(std::lround(config.page_size.height_in * config.dpi)));
  img.background = config.colors.page;
  img.pixels.assign(static_cast<std::size_t>(img.width_px) * img.height_px * 3, 0);
  img.layout = std::make_shared<const PageLayout>(layout);

  Raster r(img);
  r.fill(0, 0, img.width_px, img.height_px, config.colors.page);

  const double pad = config.borders ? config.borders->padding_pt : 0.0;
  for (const auto& box : layout.paragraph_boxes) {
    const int x0 = static_cast<int>(std::lround((box.x - pad) * k));
    const int y0 = static_cast<int>(std::lround((box.y - pad) * k));
    const int x1 = static_cast<int>(std::lround((box.x + box.w + pad) * k));
    const int y1 = static_cast<int>(std::lround((box.y + box.h + pad) * k));
    r.fill(x0, y0, x1, y1, config.colors.paragraph);
    if (config.borders && config.borders->width_pt > 0.0) {
      const int bw = std::max(1, static_cast<int>(std::lround(config.borders->width_pt * k)));
      r.fill(x0 - bw, y0 - bw, x1 + bw, y0, config.colors.font);
      r.fill(x0 - bw, y1, x1 + bw, y1 + bw, config.colors.font);
      r.fill(x0 - bw, y0, x0, y1, config.colors.font);
      r.fill(x1, y0, x1 + bw, y1, config.colors.font);
    }
  }

  const int em = metrics.em_units();
  const int lh_px = static_cast<int>(std::lround(config.line_height_pt * k));
  for (const auto& run : layout.runs) {
    const GlyphBitmap bm = metrics.glyph_bitmap(run.codepoint);
    const int gw = std::max(1, static_cast<int>(std::lround(
                                   static_cast<double>(bm.width_units) / em *
                                   config.font_size_pt * config.h_scale * k)));
    const int gh = std::max(1, static_cast<int>(std::lround(
                                   static_cast<double>(bm.height_units) / em *
                                   config.font_size_pt * k)));
    const int x_px = static_cast<int>(std::lround(run.x_pt * k));
    const int y_px = static_cast<int>(std::lround(run.y_pt * k)) + (lh_px - gh) / 2;
    for (int ty = 0; ty < gh; ++ty) {
      const int sy = ty * bm.height_units / gh;
      const int dx = config.italic ? (gh - 1 - ty) / 5 : 0;
      for (int tx = 0; tx < gw; ++tx) {
        const int sx = tx * bm.width_units / gw;
        if (bm.ink(sx, sy)) r.set(x_px + tx + dx, y_px + ty, config.colors.font);
      }
    }
  }
  return img;
}

PageImage auto_crop(const PageImage& image) {
  int min_x = image.width_px, min_y = image.height_px, max_x = -1, max_y = -1;
  for (int y = 0; y < image.height_px; ++y) {
    for (int x = 0; x < image.width_px; ++x) {
      if (!(image.pixel(x, y) == image.background)) {
        min_x = std::min(min_x, x);
        min_y = std::min(min_y, y);
        max_x = std::max(max_x, x);
        max_y = std::max(max_y, y);
      }
    }
  }
  if (max_x < 0) return image;  // nothing but background

  PageImage out;
  out.dpi = image.dpi;
  out.background = image.background;
  out.layout = image.layout;
  out.width_px = max_x - min_x + 1;
  out.height_px = max_y - min_y + 1;
  out.pixels.resize(static_cast<std::size_t>(out.width_px) * out.height_px * 3);
  for (int y = 0; y < out.height_px; ++y) {
    const auto* src = image.pixels.data() +
                      3 * (static_cast<std::size_t>(y + min_y) * image.width_px + min_x);
    std::copy(src, src + static_cast<std::size_t>(out.width_px) * 3,
              out.pixels.data() + 3 * static_cast<std::size_t>(y) * out.width_px);
  }
  return out;
}

std::vector<PageImage> render_document(const std::string& text, const RenderConfig& config,
                                       const GlyphMetricsProvider& metrics) {
  const ValidationReport report = validate(config);
  if (!report.valid) {
    throw std::invalid_argument("render_document: invalid config, first violation: " +
                                report.violations.front().rule_id);
  }
  const LineBreakResult broken = break_lines(text, config, metrics);
  const std::vector<PageLayout> layouts = paginate(broken, config);
  std::vector<PageImage> pages;
  pages.reserve(layouts.size());
  for (const auto& layout : layouts) pages.push_back(rasterize(layout, config, metrics));
  if (config.auto_crop && !pages.empty()) pages.back() = auto_crop(pages.back());
  return pages;
}

std::string document_provenance_text(const std::vector<PageImage>& pages) {
  std::string out;
  for (const auto& page : pages) {
    if (page.layout) out += page_provenance_text(*page.layout);
  }
  return out;
}

}  // namespace glyphpress

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "glyphpress/config.hpp"
#include "glyphpress/png.hpp"
#include "glyphpress/sampler.hpp"
#include "glyphpress/typesetter.hpp"
#include "test_util.hpp"

using namespace glyphpress;

namespace {

// Custom page sized in points; the embedded font advance at size 8 is an
// exact 6pt, which keeps the fit arithmetic readable.
RenderConfig grid_config(double content_w_pt, double content_h_pt) {
  RenderConfig c;
  c.dpi = 96;
  c.page_size = PageSize{std::nullopt, content_w_pt / kPointsPerInch,
                         content_h_pt / kPointsPerInch};
  c.margins_pt = Margins{0, 0, 0, 0};
  c.font_size_pt = 8.0;
  c.line_height_pt = 10.0;
  return c;
}

std::string line_text(const Line& line) {
  std::string out;
  for (const auto& tok : line.tokens) {
    for (const auto& g : tok.glyphs) out.push_back(static_cast<char>(g.codepoint));
  }
  return out;
}

}  // namespace

TEST_CASE("exact-fit words break one per line") {
  const auto cfg = grid_config(30.0, 100.0);  // 5 glyphs of 6pt
  const auto broken = break_lines("hello world", cfg, default_metrics());
  REQUIRE(broken.lines.size() == 2);
  CHECK(line_text(broken.lines[0]) == "hello");
  CHECK(line_text(broken.lines[1]) == "world");
}

TEST_CASE("an oversized token is force-broken at glyph boundaries") {
  const auto cfg = grid_config(30.0, 100.0);
  const auto broken = break_lines("aaaaaaaaaaaa", cfg, default_metrics());  // 12 glyphs
  REQUIRE(broken.lines.size() == 3);
  CHECK(line_text(broken.lines[0]).size() == 5);
  CHECK(line_text(broken.lines[1]).size() == 5);
  CHECK(line_text(broken.lines[2]).size() == 2);
}

TEST_CASE("newline markup appears as visible glyphs at the break") {
  auto cfg = grid_config(200.0, 100.0);
  cfg.newline_markup = "⏎";
  const auto broken = break_lines("a\nb", cfg, default_metrics());
  REQUIRE(broken.lines.size() == 2);
  REQUIRE(broken.lines[0].tokens.size() == 2);
  const auto& marker = broken.lines[0].tokens[1];
  CHECK(marker.marker);
  REQUIRE(marker.glyphs.size() == 1);
  CHECK(marker.glyphs[0].codepoint == U'\x23CE');
  CHECK((*broken.normalized)[marker.glyphs[0].source_index] == '\n');
}

TEST_CASE("pages fill at line_height pitch") {
  auto cfg = grid_config(200.0, 40.0);  // exactly 4 lines of 10pt
  std::string text;
  for (int i = 0; i < 10; ++i) text += "word\n";  // one line per paragraph
  const auto broken = break_lines(text, cfg, default_metrics());
  const auto pages = paginate(broken, cfg);
  std::vector<int> lines_per_page;
  for (const auto& p : pages) {
    std::set<double> ys;
    for (const auto& r : p.runs) ys.insert(r.y_pt);
    lines_per_page.push_back(static_cast<int>(ys.size()));
  }
  // 10 single-line paragraphs plus one empty trailing paragraph
  CHECK(lines_per_page == std::vector<int>{4, 4, 2});
}

TEST_CASE("empty input yields one blank page") {
  const auto cfg = grid_config(200.0, 100.0);
  const auto pages = paginate(break_lines("", cfg, default_metrics()), cfg);
  REQUIRE(pages.size() == 1);
  CHECK(pages[0].runs.empty());
  CHECK(pages[0].span_begin == 0);
  CHECK(pages[0].span_end == 0);
}

TEST_CASE("justification widens gaps evenly and skips the last line") {
  // advance 6pt: four 2-glyph words = 48pt + 3 gaps * 6 = 66pt natural, 72pt
  // wide box leaves 6pt slack, 2pt per gap
  auto cfg = grid_config(72.0, 200.0);
  cfg.alignment = Alignment::Justify;
  const auto broken = break_lines("aa bb cc dd ee", cfg, default_metrics());
  REQUIRE(broken.lines.size() == 2);
  const auto pages = paginate(broken, cfg);
  REQUIRE(pages.size() == 1);
  const auto& runs = pages[0].runs;
  REQUIRE(runs.size() == 10);
  // token starts: aa at 0, bb at 12+6+2, cc at +12+8, dd at +12+8
  CHECK(runs[0].x_pt == doctest::Approx(0.0));
  CHECK(runs[2].x_pt == doctest::Approx(20.0));
  CHECK(runs[4].x_pt == doctest::Approx(40.0));
  CHECK(runs[6].x_pt == doctest::Approx(60.0));
  // the justified line ends flush with the content box
  CHECK(runs[7].x_pt + runs[7].width_pt == doctest::Approx(72.0));
  // last line of the paragraph stays left-aligned
  CHECK(runs[8].x_pt == doctest::Approx(0.0));
}

TEST_CASE("glyph bitmaps scale to the expected pixel box") {
  RenderConfig cfg;
  cfg.dpi = 144;
  cfg.page_size = *PageSize::named("Letter");
  cfg.font_size_pt = 12.0;  // em = 24px at 144dpi, 3px per font unit
  cfg.line_height_pt = 14.0;
  cfg.margins_pt = Margins{36, 36, 36, 36};
  const auto pages = render_document("A", cfg);
  REQUIRE(pages.size() == 1);
  const auto& img = pages[0];
  int min_x = img.width_px, min_y = img.height_px, max_x = -1, max_y = -1;
  for (int y = 0; y < img.height_px; ++y) {
    for (int x = 0; x < img.width_px; ++x) {
      if (img.pixel(x, y) == cfg.colors.font) {
        min_x = std::min(min_x, x);
        min_y = std::min(min_y, y);
        max_x = std::max(max_x, x);
        max_y = std::max(max_y, y);
      }
    }
  }
  CHECK(max_x - min_x + 1 == 15);
  CHECK(max_y - min_y + 1 == 21);
}

TEST_CASE("a blank page is pure background") {
  auto cfg = grid_config(100.0, 100.0);
  const auto pages = render_document("", cfg);
  REQUIRE(pages.size() == 1);
  for (int y = 0; y < pages[0].height_px; ++y) {
    for (int x = 0; x < pages[0].width_px; ++x) {
      REQUIRE(pages[0].pixel(x, y) == cfg.colors.page);
    }
  }
}

TEST_CASE("rendering is byte-identical across runs") {
  auto cfg = sample_config(11, Theme::WebStyle);
  cfg.dpi = 72;
  const std::string text = read_file(data_path("corpus_2k.txt")).substr(0, 3000);
  const auto a = render_document(text, cfg);
  const auto b = render_document(text, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].pixels == b[i].pixels);
    CHECK(encode_png(a[i]) == encode_png(b[i]));
  }
}

TEST_CASE("auto_crop finds the inclusive ink box") {
  PageImage img;
  img.width_px = 100;
  img.height_px = 100;
  img.dpi = 72;
  img.background = Rgb{255, 255, 255};
  img.pixels.assign(100 * 100 * 3, 255);
  auto put = [&](int x, int y) {
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * 100 + x);
    img.pixels[i] = img.pixels[i + 1] = img.pixels[i + 2] = 0;
  };
  put(10, 10);
  put(50, 50);
  const auto cropped = auto_crop(img);
  CHECK(cropped.width_px == 41);
  CHECK(cropped.height_px == 41);
  CHECK(cropped.pixel(0, 0) == Rgb{0, 0, 0});
  CHECK(cropped.pixel(40, 40) == Rgb{0, 0, 0});

  const auto twice = auto_crop(cropped);
  CHECK(twice.width_px == cropped.width_px);
  CHECK(twice.pixels == cropped.pixels);
}

TEST_CASE("auto_crop leaves an all-background page unchanged") {
  PageImage img;
  img.width_px = 10;
  img.height_px = 8;
  img.dpi = 72;
  img.background = Rgb{20, 20, 20};
  img.pixels.assign(10 * 8 * 3, 20);
  const auto cropped = auto_crop(img);
  CHECK(cropped.width_px == 10);
  CHECK(cropped.height_px == 8);
  CHECK(cropped.pixels == img.pixels);
}

TEST_CASE("provenance reconstructs the normalized source") {
  const std::string text = read_file(data_path("corpus_2k.txt"));
  for (std::uint64_t seed : {3u, 17u, 29u}) {
    auto cfg = sample_config(seed);
    const auto pages = render_document(text, cfg);
    CHECK(document_provenance_text(pages) == normalize_text(text));
  }
}

TEST_CASE("provenance holds with markup and collapsing whitespace") {
  auto cfg = grid_config(120.0, 80.0);
  cfg.newline_markup = "<br>";
  const std::string text = "one  two\tthree\n\nfour\r\nfive   ";
  const auto pages = render_document(text, cfg);
  CHECK(document_provenance_text(pages) == "one two three\n\nfour\nfive");
  CHECK(normalize_text(text) == "one two three\n\nfour\nfive");
}

TEST_CASE("pixel dimensions scale exactly with dpi") {
  RenderConfig cfg;
  cfg.page_size = *PageSize::named("Letter");
  cfg.margins_pt = Margins{36, 36, 36, 36};
  cfg.font_size_pt = 9;
  cfg.line_height_pt = 11;
  const std::string text = read_file(data_path("corpus_2k.txt"));
  cfg.dpi = 72;
  const auto at72 = render_document(text, cfg);
  cfg.dpi = 96;
  const auto at96 = render_document(text, cfg);
  REQUIRE(at72.size() == at96.size());
  for (std::size_t i = 0; i < at72.size(); ++i) {
    CHECK(at96[i].width_px * 72 == at72[i].width_px * 96);
    CHECK(at96[i].height_px * 72 == at72[i].height_px * 96);
  }
}

TEST_CASE("appending text never shrinks the page count") {
  auto cfg = grid_config(150.0, 60.0);
  const std::string text = read_file(data_path("corpus_2k.txt")).substr(0, 4000);
  std::size_t prev = 0;
  for (std::size_t cut : {500u, 1000u, 2000u, 3000u, 4000u}) {
    const auto pages = render_document(text.substr(0, cut), cfg);
    CHECK(pages.size() >= prev);
    prev = pages.size();
  }
}

TEST_CASE("runs stay inside the content box and indices increase") {
  const std::string text = read_file(data_path("corpus_2k.txt")).substr(0, 5000);
  for (std::uint64_t seed : {5u, 23u}) {
    const auto cfg = sample_config(seed);
    const auto broken = break_lines(text, cfg, default_metrics());
    const auto pages = paginate(broken, cfg);
    long long prev_index = -1;
    for (const auto& page : pages) {
      for (const auto& run : page.runs) {
        CHECK(run.x_pt >= page.content.x - 1e-6);
        CHECK(run.x_pt + run.width_pt <= page.content.x + page.content.w + 1e-6);
        CHECK(run.y_pt >= page.content.y - 1e-6);
        CHECK(run.y_pt + cfg.line_height_pt <= page.content.y + page.content.h + 1e-6);
        if (!run.marker) {
          CHECK(static_cast<long long>(run.source_index) > prev_index);
          prev_index = static_cast<long long>(run.source_index);
        }
      }
    }
  }
}

TEST_CASE("render_document rejects invalid configs") {
  auto cfg = grid_config(100.0, 100.0);
  cfg.line_height_pt = cfg.font_size_pt - 1;
  CHECK_THROWS_AS(render_document("x", cfg), std::invalid_argument);
}

TEST_CASE("last page is trimmed when auto_crop is set") {
  auto cfg = grid_config(200.0, 100.0);
  cfg.auto_crop = true;
  const auto pages = render_document("tiny", cfg);
  REQUIRE(pages.size() == 1);
  const int full_w = static_cast<int>(std::lround(cfg.page_size.width_in * cfg.dpi));
  CHECK(pages[0].width_px < full_w);
  CHECK(pages[0].width_px > 0);
}

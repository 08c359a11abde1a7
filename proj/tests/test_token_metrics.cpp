#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "glyphpress/config.hpp"
#include "glyphpress/token_metrics.hpp"
#include "glyphpress/typesetter.hpp"
#include "test_util.hpp"

using namespace glyphpress;

namespace {

PageImage fake_page(int w, int h) {
  PageImage img;
  img.width_px = w;
  img.height_px = h;
  img.dpi = 72;
  return img;  // token counting never touches the pixels
}

// brute force: walk the grid cell by cell
long long enumerate_cells(int w, int h, int cell) {
  long long count = 0;
  for (int y = 0; y < h; y += cell) {
    for (int x = 0; x < w; x += cell) ++count;
  }
  return count;
}

RenderConfig report_config(int dpi) {
  RenderConfig c;
  c.dpi = dpi;
  c.page_size = *PageSize::named("A4");
  c.margins_pt = Margins{36, 36, 36, 36};
  c.font_size_pt = 8;
  c.line_height_pt = 10;
  return c;
}

}  // namespace

TEST_CASE("visual token count is the ceiling grid") {
  const VisualTokenModel vtm;  // patch 14, merge 2 -> 28px cells
  CHECK(count_visual_tokens(fake_page(794, 1123), vtm) == 1189);  // 29 * 41
  CHECK(count_visual_tokens(fake_page(28, 28), vtm) == 1);
  CHECK(count_visual_tokens(fake_page(1, 1), vtm) == 1);
  CHECK_THROWS_AS(count_visual_tokens(fake_page(0, 10), vtm), std::invalid_argument);
}

TEST_CASE("token cap clamps the count") {
  VisualTokenModel vtm;
  vtm.token_cap = 100;
  CHECK(count_visual_tokens(fake_page(794, 1123), vtm) == 100);
}

TEST_CASE("counts match brute-force cell enumeration") {
  const VisualTokenModel vtm;
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> dim(1, 3000);
  for (int i = 0; i < 1000; ++i) {
    const int w = dim(rng);
    const int h = dim(rng);
    const long long counted = count_visual_tokens(fake_page(w, h), vtm);
    CHECK(counted == enumerate_cells(w, h, vtm.cell_px()));
    // doubling both dimensions quadruples the count up to boundary rounding
    const long long doubled = count_visual_tokens(fake_page(2 * w, 2 * h), vtm);
    const long long cols = (w + 27) / 28, rows = (h + 27) / 28;
    CHECK(doubled <= 4 * counted);
    CHECK(doubled >= (2 * cols - 1) * (2 * rows - 1));
  }
}

TEST_CASE("default tokenizer follows the chars-over-4 rule") {
  const HeuristicTokenizer tok;
  CHECK(tok.count("") == 0);
  CHECK(tok.count("aaaa bbbb cccc dddd") == 5);  // ceil(19 / 4)
  CHECK(tok.count("ab") == 1);
  CHECK(tok.count("ab\ncd") == 2);  // per-segment ceiling
}

TEST_CASE("default tokenizer is additive up to a boundary effect") {
  const HeuristicTokenizer tok;
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<int> ch(0, 27);
  auto random_text = [&] {
    std::string s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      const int c = ch(rng);
      s.push_back(c < 26 ? static_cast<char>('a' + c) : (c == 26 ? ' ' : '\n'));
    }
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    const std::string a = random_text();
    const std::string b = random_text();
    const long long delta = tok.count(a + b) - tok.count(a) - tok.count(b);
    CHECK(delta >= -1);
    CHECK(delta <= 1);
  }
}

TEST_CASE("vocabulary tokenizer matches an independent longest-match count") {
  std::vector<std::string> vocab{"the", "and", "ing", "tion", "er", "an", "on", " "};
  for (char c = 'a'; c <= 'z'; ++c) vocab.push_back(std::string(1, c));
  const VocabTokenizer tok(vocab);

  const std::string text = read_file(data_path("corpus_2k.txt")).substr(0, 6000);

  // reference: scan every vocab entry at each position, keep the longest
  long long expected = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t best = 0;
    for (const auto& entry : vocab) {
      if (entry.size() > best && text.compare(pos, entry.size(), entry) == 0) {
        best = entry.size();
      }
    }
    pos += best > 0 ? best : 1;
    ++expected;
  }
  CHECK(tok.count(text) == expected);
}

TEST_CASE("compression report computes the defining ratio") {
  const VisualTokenModel vtm;
  const HeuristicTokenizer tok;
  // one page of 25x10 cells = 250 visual tokens; 4000 chars = 1000 text tokens
  const std::vector<PageImage> pages{fake_page(25 * 28, 10 * 28)};
  const std::string text(4000, 'x');
  const auto report = compression_report(text, pages, vtm, tok, "fp");
  CHECK(report.text_tokens == 1000);
  CHECK(report.total_visual_tokens == 250);
  CHECK(report.rho == doctest::Approx(4.0));
  CHECK(report.config_fingerprint == "fp");
  CHECK_THROWS_AS(compression_report(text, {}, vtm, tok), std::invalid_argument);
}

TEST_CASE("dpi 72 to 96 compression ratio matches area scaling") {
  const std::string text = read_file(data_path("corpus_2k.txt"));
  const VisualTokenModel vtm;
  const HeuristicTokenizer tok;
  auto rho_at = [&](int dpi) {
    const auto cfg = report_config(dpi);
    const auto pages = render_document(text, cfg);
    return compression_report(text, pages, vtm, tok).rho;
  };
  const double r72 = rho_at(72);
  const double r96 = rho_at(96);
  const double r120 = rho_at(120);
  CHECK(r72 > r96);
  CHECK(r96 > r120);
  CHECK(r72 / r96 > 1.5);
  CHECK(r72 / r96 < 2.1);
}

TEST_CASE("a blank page still yields a defined ratio") {
  const auto cfg = report_config(72);
  const auto pages = render_document("", cfg);
  const auto report = compression_report("", pages, VisualTokenModel{}, HeuristicTokenizer{});
  CHECK(report.total_visual_tokens >= 1);
  CHECK(report.rho == 0.0);  // zero text tokens, no division error
}

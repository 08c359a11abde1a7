#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "glyphpress/config.hpp"
#include "glyphpress/sampler.hpp"

using namespace glyphpress;

namespace {

RenderConfig sane_config() {
  RenderConfig c;
  c.dpi = 96;
  c.page_size = *PageSize::named("A4");
  c.font_size_pt = 10.0;
  c.line_height_pt = 12.0;
  c.margins_pt = Margins{36, 36, 36, 36};
  return c;
}

bool has_rule(const ValidationReport& r, const std::string& rule) {
  for (const auto& v : r.violations) {
    if (v.rule_id == rule) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("line height below font size is rejected") {
  RenderConfig c = sane_config();
  c.font_size_pt = 12.0;
  c.line_height_pt = 11.0;
  const auto report = validate(c);
  CHECK_FALSE(report.valid);
  CHECK(has_rule(report, "line_height_lt_font_size"));
}

TEST_CASE("a sane config validates") {
  RenderConfig c = sane_config();
  c.font_size_pt = 10.0;
  c.line_height_pt = 12.0;
  const auto report = validate(c);
  CHECK(report.valid);
  CHECK(report.violations.empty());
}

TEST_CASE("margins that eat the page width are rejected") {
  RenderConfig c = sane_config();
  c.page_size = *PageSize::named("A5");
  c.margins_pt.left_pt = 250.0;
  c.margins_pt.right_pt = 250.0;  // A5 is ~420pt wide
  const auto report = validate(c);
  CHECK_FALSE(report.valid);
  CHECK(has_rule(report, "nonpositive_content_width"));
  CHECK_FALSE(has_rule(report, "content_width_lt_glyph_advance"));
}

TEST_CASE("validate reports the complete violation set") {
  RenderConfig c = sane_config();
  c.line_height_pt = c.font_size_pt - 1.0;
  const auto one = validate(c);
  REQUIRE(one.violations.size() == 1);

  c.dpi = 20;  // independent second violation
  const auto two = validate(c);
  CHECK(two.violations.size() == 2);
  CHECK(has_rule(two, "line_height_lt_font_size"));
  CHECK(has_rule(two, "dpi_below_minimum"));
}

TEST_CASE("invisible text is rejected") {
  RenderConfig c = sane_config();
  c.colors.font = c.colors.paragraph;
  CHECK(has_rule(validate(c), "font_color_equals_paragraph"));
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto a = sample_config(42);
  const auto b = sample_config(42);
  CHECK(a == b);
  CHECK(config_fingerprint(a) == config_fingerprint(b));
  const auto c = sample_config(43);
  CHECK_FALSE(a == c);
}

TEST_CASE("dark mode samples keep the page darker than the font") {
  const std::vector<double> sizes{7, 7.5, 8, 9, 9.5, 10, 11, 12, 14};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto c = sample_config(seed, Theme::DarkMode);
    CHECK(luminance(c.colors.page) < luminance(c.colors.font));
    CHECK(std::count(sizes.begin(), sizes.end(), c.font_size_pt) == 1);
  }
}

TEST_CASE("sampled configs always validate and follow the mixture") {
  const int n = 10000;
  int lowest = 0, low = 0, mid = 0, high = 0;
  for (int i = 0; i < n; ++i) {
    const auto c = sample_config(static_cast<std::uint64_t>(i));
    REQUIRE(validate(c).valid);
    if (c.dpi < 60) {
      ++lowest;
    } else if (c.dpi < 72) {
      ++low;
    } else if (c.dpi <= 300) {
      ++mid;
    } else {
      ++high;
    }
  }
  const SamplingPolicy defaults;
  const auto near = [&](int count, double weight) {
    return std::abs(static_cast<double>(count) / n - weight) < 0.02;
  };
  CHECK(near(lowest, defaults.dpi_weight_lowest));
  CHECK(near(low, defaults.dpi_weight_low));
  CHECK(near(high, defaults.dpi_weight_high));
  CHECK(near(mid, defaults.dpi_weight_medium + defaults.dpi_weight_normal));
  // normal/medium together dominate the extremes
  CHECK(mid > lowest + high);
}

TEST_CASE("line height is tied to font size plus 0..3") {
  for (std::uint64_t seed = 1000; seed < 1500; ++seed) {
    const auto c = sample_config(seed);
    const double delta = c.line_height_pt - c.font_size_pt;
    CHECK(delta >= 0.0);
    CHECK(delta <= 3.0);
    CHECK(delta == static_cast<int>(delta));
  }
}

TEST_CASE("save/load round-trips sampled configs exactly") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto c = sample_config(seed);
    const auto back = load_config(save_config(c));
    CHECK(back == c);
  }
}

TEST_CASE("load names the missing field") {
  const auto c = sane_config();
  auto json_text = save_config(c);
  const auto pos = json_text.find("\"dpi\"");
  REQUIRE(pos != std::string::npos);
  // drop the dpi line entirely
  const auto line_end = json_text.find('\n', pos);
  const auto line_start = json_text.rfind('\n', pos);
  json_text.erase(line_start, line_end - line_start);
  CHECK_THROWS_WITH_AS(load_config(json_text), "missing field: dpi", ConfigParseError);
}

TEST_CASE("parsing and validation are separate stages") {
  auto c = sane_config();
  c.dpi = -5;
  const auto loaded = load_config(save_config(c));  // parses fine
  CHECK(loaded.dpi == -5);
  const auto report = validate(loaded);
  CHECK_FALSE(report.valid);
  CHECK(has_rule(report, "dpi_below_minimum"));
}

TEST_CASE("unknown labels are rejected at parse time") {
  CHECK_FALSE(theme_from_string("not_a_theme").has_value());
  auto json_text = save_config(sane_config());
  const auto pos = json_text.find("\"theme\": null");
  REQUIRE(pos != std::string::npos);
  json_text.replace(pos, 13, "\"theme\": \"bogus\"");
  CHECK_THROWS_AS(load_config(json_text), ConfigParseError);
}

TEST_CASE("named page sizes resolve to fixed dimensions") {
  const auto a4 = PageSize::named("A4");
  REQUIRE(a4.has_value());
  CHECK(a4->width_in == doctest::Approx(8.27));
  CHECK(a4->height_in == doctest::Approx(11.69));
  CHECK_FALSE(PageSize::named("A17").has_value());
}

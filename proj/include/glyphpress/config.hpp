#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace glyphpress {

inline constexpr int kConfigSchemaVersion = 1;

// Points per inch. Layout geometry is computed in points; rasterization
// converts to pixels with the configured dpi.
inline constexpr double kPointsPerInch = 72.0;

// Advance of the embedded font's regular glyphs as a fraction of the em
// square (5x7 ink box plus one gap column on an 8-unit em). The validator
// uses it as the reference "one glyph advance".
inline constexpr double kNominalAdvanceEm = 0.75;

enum class Alignment { Left, Justify, Right, Center };
enum class IndentMode { None, FirstLine, Block, Hanging };
enum class Theme { DocumentStyle, WebStyle, DarkMode, CodeStyle, ArtisticPixel };

std::string to_string(Alignment a);
std::string to_string(IndentMode m);
std::string to_string(Theme t);
std::optional<Alignment> alignment_from_string(const std::string& s);
std::optional<IndentMode> indent_mode_from_string(const std::string& s);
std::optional<Theme> theme_from_string(const std::string& s);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

// Rec. 601 luma; used for palette sanity checks.
inline double luminance(Rgb c) {
  return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
}

struct PageSize {
  std::optional<std::string> name;  // set for named paper sizes
  double width_in = 0.0;
  double height_in = 0.0;
  bool operator==(const PageSize&) const = default;

  // Resolves a named paper size from the built-in table (A4, Letter, ...).
  static std::optional<PageSize> named(const std::string& name);
  static const std::vector<std::string>& known_names();
};

struct Margins {
  double top_pt = 0.0;
  double bottom_pt = 0.0;
  double left_pt = 0.0;
  double right_pt = 0.0;
  bool operator==(const Margins&) const = default;
};

struct Indent {
  IndentMode mode = IndentMode::None;
  double indent_em = 0.0;
  bool operator==(const Indent&) const = default;
};

struct Spacing {
  double before_pt = 0.0;
  double after_pt = 0.0;
  bool operator==(const Spacing&) const = default;
};

struct Borders {
  double width_pt = 0.0;
  double padding_pt = 0.0;
  bool operator==(const Borders&) const = default;
};

struct Colors {
  Rgb page;
  Rgb paragraph;
  Rgb font;
  bool operator==(const Colors&) const = default;
};

// The full rendering configuration vector: every typography and layout knob
// the pipeline understands.
struct RenderConfig {
  int dpi = 96;
  PageSize page_size;
  std::string font_family = "glyph-mono";
  bool italic = false;
  double font_size_pt = 10.0;
  double line_height_pt = 12.0;
  Alignment alignment = Alignment::Left;
  Margins margins_pt{36.0, 36.0, 36.0, 36.0};
  Indent indent;
  Spacing spacing_pt;
  double h_scale = 1.0;
  Colors colors{{255, 255, 255}, {255, 255, 255}, {0, 0, 0}};
  std::optional<Borders> borders;
  std::optional<std::string> newline_markup;
  bool auto_crop = false;
  std::optional<Theme> theme;

  bool operator==(const RenderConfig&) const = default;

  double page_width_pt() const { return page_size.width_in * kPointsPerInch; }
  double page_height_pt() const { return page_size.height_in * kPointsPerInch; }
  double content_width_pt() const {
    return page_width_pt() - margins_pt.left_pt - margins_pt.right_pt;
  }
  double content_height_pt() const {
    return page_height_pt() - margins_pt.top_pt - margins_pt.bottom_pt;
  }
};

struct Violation {
  std::string rule_id;
  std::string message;
  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  bool valid = true;
  std::vector<Violation> violations;
};

// Checks every rule and reports the complete violation set. Invalidity is
// data, not an error: any structurally well-formed config is accepted.
ValidationReport validate(const RenderConfig& config);

class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON serialization. Field names carry units (font_size_pt, margins_pt...)
// and the schema is versioned; load(save(c)) == c for configs built through
// this API. load throws ConfigParseError naming the offending field; it does
// not validate semantics (see validate()).
std::string save_config(const RenderConfig& config);
RenderConfig load_config(const std::string& json_text);
RenderConfig load_config_file(const std::string& path);
void save_config_file(const RenderConfig& config, const std::string& path);

// FNV-1a over the canonical JSON form; stable id for dedupe and manifests.
std::uint64_t config_fingerprint_u64(const RenderConfig& config);
std::string config_fingerprint(const RenderConfig& config);

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::string fnv_hex(std::uint64_t h);

}  // namespace glyphpress

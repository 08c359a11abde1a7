#include "glyphpress/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace glyphpress {

using nlohmann::json;

namespace {

struct NamedSize {
  const char* name;
  double width_in;
  double height_in;
};

// Exact inch dimensions so layout is identical on every platform.
constexpr std::array<NamedSize, 8> kPaperSizes{{
    {"A4", 8.27, 11.69},
    {"Letter", 8.5, 11.0},
    {"Legal", 8.5, 14.0},
    {"A5", 5.83, 8.27},
    {"B5", 6.93, 9.84},
    {"A3", 11.69, 16.54},
    {"B4", 9.84, 13.90},
    {"Tabloid", 11.0, 17.0},
}};

}  // namespace

std::string to_string(Alignment a) {
  switch (a) {
    case Alignment::Left: return "left";
    case Alignment::Justify: return "justify";
    case Alignment::Right: return "right";
    case Alignment::Center: return "center";
  }
  return "left";
}

std::string to_string(IndentMode m) {
  switch (m) {
    case IndentMode::None: return "none";
    case IndentMode::FirstLine: return "first_line";
    case IndentMode::Block: return "block";
    case IndentMode::Hanging: return "hanging";
  }
  return "none";
}

std::string to_string(Theme t) {
  switch (t) {
    case Theme::DocumentStyle: return "document_style";
    case Theme::WebStyle: return "web_style";
    case Theme::DarkMode: return "dark_mode";
    case Theme::CodeStyle: return "code_style";
    case Theme::ArtisticPixel: return "artistic_pixel";
  }
  return "document_style";
}

std::optional<Alignment> alignment_from_string(const std::string& s) {
  if (s == "left") return Alignment::Left;
  if (s == "justify") return Alignment::Justify;
  if (s == "right") return Alignment::Right;
  if (s == "center") return Alignment::Center;
  return std::nullopt;
}

std::optional<IndentMode> indent_mode_from_string(const std::string& s) {
  if (s == "none") return IndentMode::None;
  if (s == "first_line") return IndentMode::FirstLine;
  if (s == "block") return IndentMode::Block;
  if (s == "hanging") return IndentMode::Hanging;
  return std::nullopt;
}

std::optional<Theme> theme_from_string(const std::string& s) {
  if (s == "document_style") return Theme::DocumentStyle;
  if (s == "web_style") return Theme::WebStyle;
  if (s == "dark_mode") return Theme::DarkMode;
  if (s == "code_style") return Theme::CodeStyle;
  if (s == "artistic_pixel") return Theme::ArtisticPixel;
  return std::nullopt;
}

std::optional<PageSize> PageSize::named(const std::string& name) {
  for (const auto& p : kPaperSizes) {
    if (name == p.name) return PageSize{name, p.width_in, p.height_in};
  }
  return std::nullopt;
}

const std::vector<std::string>& PageSize::known_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& p : kPaperSizes) v.push_back(p.name);
    return v;
  }();
  return names;
}

ValidationReport validate(const RenderConfig& c) {
  ValidationReport report;
  auto flag = [&](std::string rule, std::string message) {
    report.violations.push_back({std::move(rule), std::move(message)});
  };

  if (c.dpi < 30) {
    flag("dpi_below_minimum", "dpi must be at least 30, got " + std::to_string(c.dpi));
  }
  if (c.page_size.width_in <= 0.0 || c.page_size.height_in <= 0.0) {
    flag("nonpositive_page_size", "page dimensions must be positive");
  }
  if (c.font_size_pt <= 0.0) {
    flag("nonpositive_font_size", "font_size_pt must be positive");
  }
  if (c.line_height_pt < c.font_size_pt) {
    flag("line_height_lt_font_size",
         "line_height_pt " + std::to_string(c.line_height_pt) +
             " is smaller than font_size_pt " + std::to_string(c.font_size_pt));
  }
  if (c.h_scale <= 0.0 || c.h_scale > 1.0) {
    flag("h_scale_out_of_range", "h_scale must be in (0, 1]");
  }
  if (c.margins_pt.top_pt < 0.0 || c.margins_pt.bottom_pt < 0.0 ||
      c.margins_pt.left_pt < 0.0 || c.margins_pt.right_pt < 0.0) {
    flag("negative_margin", "margins must be non-negative");
  }
  if (c.indent.indent_em < 0.0) {
    flag("negative_indent", "indent_em must be non-negative");
  }
  if (c.spacing_pt.before_pt < 0.0 || c.spacing_pt.after_pt < 0.0) {
    flag("negative_spacing", "paragraph spacing must be non-negative");
  }
  if (c.borders && (c.borders->width_pt < 0.0 || c.borders->padding_pt < 0.0)) {
    flag("negative_border", "border width and padding must be non-negative");
  }

  const double content_w = c.content_width_pt();
  const double glyph_advance = kNominalAdvanceEm * c.font_size_pt * c.h_scale;
  if (content_w <= 0.0) {
    flag("nonpositive_content_width",
         "margins leave no horizontal room for content");
  } else if (c.font_size_pt > 0.0 && content_w <= glyph_advance) {
    flag("content_width_lt_glyph_advance",
         "content width does not fit a single glyph advance");
  }
  if (c.content_height_pt() < c.line_height_pt) {
    flag("content_height_lt_line_height",
         "margins leave less than one line of vertical room");
  }
  if (c.colors.font == c.colors.paragraph) {
    flag("font_color_equals_paragraph",
         "font color must differ from the paragraph background");
  }

  report.valid = report.violations.empty();
  return report;
}

namespace {

json rgb_to_json(Rgb c) { return json::array({c.r, c.g, c.b}); }

const json& require(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw ConfigParseError(std::string("missing field: ") + field);
  }
  return *it;
}

double require_number(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_number()) {
    throw ConfigParseError(std::string("field is not a number: ") + field);
  }
  return v.get<double>();
}

bool require_bool(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_boolean()) {
    throw ConfigParseError(std::string("field is not a boolean: ") + field);
  }
  return v.get<bool>();
}

std::string require_string(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_string()) {
    throw ConfigParseError(std::string("field is not a string: ") + field);
  }
  return v.get<std::string>();
}

Rgb parse_rgb(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 3) {
    throw ConfigParseError("field is not an [r,g,b] triplet: " + field);
  }
  for (const auto& ch : v) {
    if (!ch.is_number_integer() || ch.get<int>() < 0 || ch.get<int>() > 255) {
      throw ConfigParseError("channel out of range in: " + field);
    }
  }
  return Rgb{v[0].get<std::uint8_t>(), v[1].get<std::uint8_t>(),
             v[2].get<std::uint8_t>()};
}

}  // namespace

std::string save_config(const RenderConfig& c) {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["dpi"] = c.dpi;
  if (c.page_size.name) {
    j["page_size"] = json{{"name", *c.page_size.name}};
  } else {
    j["page_size"] = json{{"width_in", c.page_size.width_in},
                          {"height_in", c.page_size.height_in}};
  }
  j["font_family"] = c.font_family;
  j["italic"] = c.italic;
  j["font_size_pt"] = c.font_size_pt;
  j["line_height_pt"] = c.line_height_pt;
  j["alignment"] = to_string(c.alignment);
  j["margins_pt"] = json{{"top", c.margins_pt.top_pt},
                         {"bottom", c.margins_pt.bottom_pt},
                         {"left", c.margins_pt.left_pt},
                         {"right", c.margins_pt.right_pt}};
  j["indent"] = json{{"mode", to_string(c.indent.mode)},
                     {"indent_em", c.indent.indent_em}};
  j["spacing_pt"] = json{{"before", c.spacing_pt.before_pt},
                         {"after", c.spacing_pt.after_pt}};
  j["h_scale"] = c.h_scale;
  j["colors"] = json{{"page_rgb", rgb_to_json(c.colors.page)},
                     {"paragraph_rgb", rgb_to_json(c.colors.paragraph)},
                     {"font_rgb", rgb_to_json(c.colors.font)}};
  if (c.borders) {
    j["borders"] = json{{"width_pt", c.borders->width_pt},
                        {"padding_pt", c.borders->padding_pt}};
  } else {
    j["borders"] = nullptr;
  }
  j["newline_markup"] = c.newline_markup ? json(*c.newline_markup) : json(nullptr);
  j["auto_crop"] = c.auto_crop;
  j["theme"] = c.theme ? json(to_string(*c.theme)) : json(nullptr);
  return j.dump(2);
}

RenderConfig load_config(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded()) {
    throw ConfigParseError("config is not valid JSON");
  }
  if (!j.is_object()) {
    throw ConfigParseError("config root is not a JSON object");
  }
  const json& sv = require(j, "schema_version");
  if (!sv.is_number_integer() || sv.get<int>() != kConfigSchemaVersion) {
    throw ConfigParseError("unsupported schema_version");
  }

  RenderConfig c;
  {
    const json& dpi = require(j, "dpi");
    if (!dpi.is_number_integer()) {
      throw ConfigParseError("field is not an integer: dpi");
    }
    c.dpi = dpi.get<int>();
  }
  {
    const json& ps = require(j, "page_size");
    if (!ps.is_object()) {
      throw ConfigParseError("field is not an object: page_size");
    }
    if (ps.contains("name")) {
      const std::string name = require_string(ps, "name");
      auto resolved = PageSize::named(name);
      if (!resolved) {
        throw ConfigParseError("unknown paper size name: " + name);
      }
      c.page_size = *resolved;
    } else {
      c.page_size.name.reset();
      c.page_size.width_in = require_number(ps, "width_in");
      c.page_size.height_in = require_number(ps, "height_in");
    }
  }
  c.font_family = require_string(j, "font_family");
  c.italic = require_bool(j, "italic");
  c.font_size_pt = require_number(j, "font_size_pt");
  c.line_height_pt = require_number(j, "line_height_pt");
  {
    const std::string s = require_string(j, "alignment");
    auto a = alignment_from_string(s);
    if (!a) throw ConfigParseError("unknown alignment: " + s);
    c.alignment = *a;
  }
  {
    const json& m = require(j, "margins_pt");
    c.margins_pt = Margins{require_number(m, "top"), require_number(m, "bottom"),
                           require_number(m, "left"), require_number(m, "right")};
  }
  {
    const json& ind = require(j, "indent");
    const std::string mode = require_string(ind, "mode");
    auto m = indent_mode_from_string(mode);
    if (!m) throw ConfigParseError("unknown indent mode: " + mode);
    c.indent = Indent{*m, require_number(ind, "indent_em")};
  }
  {
    const json& sp = require(j, "spacing_pt");
    c.spacing_pt = Spacing{require_number(sp, "before"), require_number(sp, "after")};
  }
  c.h_scale = require_number(j, "h_scale");
  {
    const json& col = require(j, "colors");
    c.colors.page = parse_rgb(require(col, "page_rgb"), "colors.page_rgb");
    c.colors.paragraph =
        parse_rgb(require(col, "paragraph_rgb"), "colors.paragraph_rgb");
    c.colors.font = parse_rgb(require(col, "font_rgb"), "colors.font_rgb");
  }
  {
    const json& b = require(j, "borders");
    if (b.is_null()) {
      c.borders.reset();
    } else {
      c.borders = Borders{require_number(b, "width_pt"),
                          require_number(b, "padding_pt")};
    }
  }
  {
    const json& m = require(j, "newline_markup");
    if (m.is_null()) {
      c.newline_markup.reset();
    } else if (m.is_string()) {
      c.newline_markup = m.get<std::string>();
    } else {
      throw ConfigParseError("field is not a string or null: newline_markup");
    }
  }
  c.auto_crop = require_bool(j, "auto_crop");
  {
    const json& t = require(j, "theme");
    if (t.is_null()) {
      c.theme.reset();
    } else if (t.is_string()) {
      auto theme = theme_from_string(t.get<std::string>());
      if (!theme) throw ConfigParseError("unknown theme: " + t.get<std::string>());
      c.theme = *theme;
    } else {
      throw ConfigParseError("field is not a string or null: theme");
    }
  }
  return c;
}

RenderConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigParseError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

void save_config_file(const RenderConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << save_config(config) << '\n';
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::uint64_t config_fingerprint_u64(const RenderConfig& config) {
  // nlohmann's default map keeps keys sorted, so the dump is canonical.
  const std::string canonical = save_config(config);
  return fnv1a64(canonical.data(), canonical.size());
}

std::string config_fingerprint(const RenderConfig& config) {
  return fnv_hex(config_fingerprint_u64(config));
}

}  // namespace glyphpress

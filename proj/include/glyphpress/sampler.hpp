#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glyphpress/config.hpp"

namespace glyphpress {

// Mixture weights and value pools for config sampling. The band/set
// memberships are fixed; the weights are this project's documented defaults
// and every field can be overridden before sampling (the search tests, for
// instance, pin most of them to collapse the space).
struct SamplingPolicy {
  // dpi bands: lowest 45-59, low 60-71, medium 72-119,
  // normal {72,80,96,100,110,120,144,150,300}, high 301-dpi_high_max.
  double dpi_weight_lowest = 0.08;
  double dpi_weight_low = 0.10;
  double dpi_weight_medium = 0.35;
  double dpi_weight_normal = 0.40;
  double dpi_weight_high = 0.07;
  int dpi_high_max = 450;

  static const std::vector<int>& dpi_normal_set();

  // page size routes: named paper / common aspect ratio / free aspect
  double page_weight_named = 0.60;
  double page_weight_aspect = 0.25;
  double page_weight_custom = 0.15;
  // priors aligned with PageSize::known_names(): A4, Letter, Legal, A5, B5, A3, B4, Tabloid
  std::vector<double> named_page_priors{0.34, 0.24, 0.08, 0.10, 0.08, 0.06, 0.04, 0.06};
  std::vector<double> aspect_ratios{1.414, 1.333, 1.5, 1.778};

  std::vector<double> font_size_choices{7, 7.5, 8, 9, 9.5, 10, 11, 12, 14};
  std::vector<std::string> font_families{"glyph-serif", "glyph-sans",
                                         "glyph-mono", "glyph-pixel"};
  double italic_probability = 0.10;

  // left, justify, right, center
  std::array<double, 4> alignment_weights{0.45, 0.40, 0.08, 0.07};

  // all-equal, vertical-larger, horizontal-larger
  std::array<double, 3> margin_pattern_weights{0.50, 0.25, 0.25};
  double margin_min_pt = 10.0;
  double margin_max_pt = 40.0;

  // none, first_line, block, hanging
  std::array<double, 4> indent_mode_weights{0.50, 0.30, 0.10, 0.10};

  // none, small, large
  std::array<double, 3> spacing_mode_weights{0.50, 0.30, 0.20};
  double spacing_small_max_pt = 4.0;
  double spacing_large_max_pt = 12.0;

  std::vector<double> h_scale_choices{1.0, 0.95, 0.9, 0.85, 0.8, 0.75};
  std::vector<double> h_scale_weights{0.40, 0.22, 0.16, 0.10, 0.07, 0.05};

  double border_probability = 0.10;
  double newline_markup_probability = 0.10;
  double auto_crop_probability = 0.50;

  // document, web, dark, code, artistic; used when no theme is requested
  std::array<double, 5> theme_weights{0.40, 0.25, 0.15, 0.15, 0.05};
};

// Draws a config from the policy mixture. Pure in (seed, theme, policy);
// the result always passes validate(). Throws std::invalid_argument if the
// policy has been overridden into a shape that cannot yield a valid config.
RenderConfig sample_config(std::uint64_t seed, std::optional<Theme> theme = std::nullopt,
                           const SamplingPolicy& policy = {});

}  // namespace glyphpress

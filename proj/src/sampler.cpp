#include "glyphpress/sampler.hpp"

#include <stdexcept>

#include "glyphpress/rng.hpp"

namespace glyphpress {

namespace {

constexpr std::uint64_t kSamplerSalt = 0x676c797068ULL;

struct Palette {
  Rgb page;
  Rgb paragraph;
  Rgb font;
};

// Coherent (page, paragraph, font) triplets per theme. Every palette keeps
// the font distinguishable from the paragraph background.
const std::vector<Palette>& palettes_for(Theme theme) {
  static const std::vector<Palette> document{
      {{255, 255, 255}, {255, 255, 255}, {0, 0, 0}},
      {{250, 249, 245}, {250, 249, 245}, {25, 25, 28}},
      {{255, 255, 255}, {252, 252, 252}, {40, 40, 45}},
  };
  static const std::vector<Palette> web{
      {{244, 246, 248}, {255, 255, 255}, {28, 32, 38}},
      {{238, 240, 244}, {252, 253, 255}, {22, 24, 30}},
      {{255, 255, 255}, {246, 248, 250}, {33, 37, 41}},
  };
  static const std::vector<Palette> dark{
      {{16, 17, 20}, {16, 17, 20}, {222, 224, 228}},
      {{24, 26, 31}, {30, 33, 39}, {235, 236, 239}},
      {{32, 33, 36}, {32, 33, 36}, {200, 205, 212}},
  };
  static const std::vector<Palette> code{
      {{30, 30, 30}, {38, 40, 44}, {152, 195, 121}},
      {{40, 44, 52}, {40, 44, 52}, {171, 178, 191}},
      {{248, 248, 246}, {240, 240, 236}, {36, 41, 46}},
  };
  static const std::vector<Palette> artistic{
      {{9, 10, 30}, {20, 16, 48}, {0, 255, 170}},
      {{252, 240, 199}, {255, 250, 235}, {122, 45, 160}},
      {{15, 56, 15}, {48, 98, 48}, {155, 188, 15}},
  };
  switch (theme) {
    case Theme::DocumentStyle: return document;
    case Theme::WebStyle: return web;
    case Theme::DarkMode: return dark;
    case Theme::CodeStyle: return code;
    case Theme::ArtisticPixel: return artistic;
  }
  return document;
}

int draw_dpi(DetRng& rng, const SamplingPolicy& p) {
  const std::vector<double> weights{p.dpi_weight_lowest, p.dpi_weight_low,
                                    p.dpi_weight_medium, p.dpi_weight_normal,
                                    p.dpi_weight_high};
  switch (rng.pick_weighted(weights)) {
    case 0: return static_cast<int>(rng.uniform_int(45, 59));
    case 1: return static_cast<int>(rng.uniform_int(60, 71));
    case 2: return static_cast<int>(rng.uniform_int(72, 119));
    case 3: {
      const auto& set = SamplingPolicy::dpi_normal_set();
      return set[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(set.size()) - 1))];
    }
    default:
      return static_cast<int>(rng.uniform_int(301, p.dpi_high_max));
  }
}

PageSize draw_page_size(DetRng& rng, const SamplingPolicy& p) {
  const std::vector<double> routes{p.page_weight_named, p.page_weight_aspect,
                                   p.page_weight_custom};
  switch (rng.pick_weighted(routes)) {
    case 0: {
      const auto& names = PageSize::known_names();
      std::size_t idx = rng.pick_weighted(p.named_page_priors);
      if (idx >= names.size()) idx = 0;
      return *PageSize::named(names[idx]);
    }
    case 1: {
      const double ratio = p.aspect_ratios[static_cast<std::size_t>(rng.uniform_int(
          0, static_cast<std::int64_t>(p.aspect_ratios.size()) - 1))];
      const double width = rng.uniform_real(5.0, 10.0);
      return PageSize{std::nullopt, width, width * ratio};
    }
    default: {
      // free aspect, narrow pages skew tall
      const double width = rng.uniform_real(4.0, 12.0);
      double aspect;
      if (width < 6.0) {
        aspect = rng.uniform_real(1.2, 2.0);
      } else if (width < 9.0) {
        aspect = rng.uniform_real(0.9, 1.7);
      } else {
        aspect = rng.uniform_real(0.7, 1.4);
      }
      return PageSize{std::nullopt, width, width * aspect};
    }
  }
}

Margins draw_margins(DetRng& rng, const SamplingPolicy& p) {
  const std::vector<double> weights(p.margin_pattern_weights.begin(),
                                    p.margin_pattern_weights.end());
  const double lo = p.margin_min_pt;
  const double hi = p.margin_max_pt;
  switch (rng.pick_weighted(weights)) {
    case 0: {
      const double m = rng.uniform_real(lo, hi);
      return Margins{m, m, m, m};
    }
    case 1: {
      const double h = rng.uniform_real(lo, hi);
      const double v = rng.uniform_real(h, hi);
      return Margins{v, v, h, h};
    }
    default: {
      const double v = rng.uniform_real(lo, hi);
      const double h = rng.uniform_real(v, hi);
      return Margins{v, v, h, h};
    }
  }
}

}  // namespace

const std::vector<int>& SamplingPolicy::dpi_normal_set() {
  static const std::vector<int> set{72, 80, 96, 100, 110, 120, 144, 150, 300};
  return set;
}

RenderConfig sample_config(std::uint64_t seed, std::optional<Theme> theme,
                           const SamplingPolicy& policy) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    DetRng rng(mix_seed(mix_seed(seed, kSamplerSalt), static_cast<std::uint64_t>(attempt)));
    RenderConfig c;

    Theme t = theme ? *theme
                    : static_cast<Theme>(rng.pick_weighted(std::vector<double>(
                          policy.theme_weights.begin(), policy.theme_weights.end())));
    c.theme = t;

    c.dpi = draw_dpi(rng, policy);
    c.page_size = draw_page_size(rng, policy);

    if (t == Theme::CodeStyle && rng.bernoulli(0.8)) {
      c.font_family = "glyph-mono";
    } else {
      c.font_family = policy.font_families[static_cast<std::size_t>(rng.uniform_int(
          0, static_cast<std::int64_t>(policy.font_families.size()) - 1))];
    }
    c.italic = rng.bernoulli(policy.italic_probability);

    c.font_size_pt = policy.font_size_choices[static_cast<std::size_t>(rng.uniform_int(
        0, static_cast<std::int64_t>(policy.font_size_choices.size()) - 1))];
    c.line_height_pt = c.font_size_pt + static_cast<double>(rng.uniform_int(0, 3));

    c.alignment = static_cast<Alignment>(rng.pick_weighted(std::vector<double>(
        policy.alignment_weights.begin(), policy.alignment_weights.end())));

    c.margins_pt = draw_margins(rng, policy);

    {
      const auto mode = static_cast<IndentMode>(rng.pick_weighted(std::vector<double>(
          policy.indent_mode_weights.begin(), policy.indent_mode_weights.end())));
      double em = 0.0;
      if (mode == IndentMode::FirstLine) {
        em = rng.uniform_real(1.0, 2.5);
      } else if (mode == IndentMode::Block || mode == IndentMode::Hanging) {
        em = rng.uniform_real(0.5, 2.0);
      }
      c.indent = Indent{mode, em};
    }

    switch (rng.pick_weighted(std::vector<double>(policy.spacing_mode_weights.begin(),
                                                  policy.spacing_mode_weights.end()))) {
      case 0:
        c.spacing_pt = Spacing{0.0, 0.0};
        break;
      case 1:
        c.spacing_pt = Spacing{rng.uniform_real(0.0, policy.spacing_small_max_pt),
                               rng.uniform_real(0.0, policy.spacing_small_max_pt)};
        break;
      default:
        c.spacing_pt =
            Spacing{rng.uniform_real(policy.spacing_small_max_pt, policy.spacing_large_max_pt),
                    rng.uniform_real(policy.spacing_small_max_pt, policy.spacing_large_max_pt)};
        break;
    }

    c.h_scale = policy.h_scale_choices[rng.pick_weighted(policy.h_scale_weights)];

    {
      const auto& pal = palettes_for(t);
      const auto& chosen = pal[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(pal.size()) - 1))];
      c.colors = Colors{chosen.page, chosen.paragraph, chosen.font};
    }

    if (rng.bernoulli(policy.border_probability)) {
      c.borders = Borders{rng.uniform_real(0.5, 2.0), rng.uniform_real(2.0, 8.0)};
    } else {
      c.borders.reset();
    }

    if (rng.bernoulli(policy.newline_markup_probability)) {
      static const std::vector<std::string> markers{"\\n", "¶", "⏎", "<br>"};
      c.newline_markup = markers[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(markers.size()) - 1))];
    } else {
      c.newline_markup.reset();
    }

    c.auto_crop = rng.bernoulli(policy.auto_crop_probability);

    if (validate(c).valid) return c;
  }
  throw std::invalid_argument("sampling policy cannot produce a valid config");
}

}  // namespace glyphpress

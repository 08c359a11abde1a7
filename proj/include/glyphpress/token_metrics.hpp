#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glyphpress/typesetter.hpp"

namespace glyphpress {

// Visual tokens are modeled as patch-grid cells: a page consumes one token
// per cell of (patch_px * merge) pixels, rounded up per axis. The defaults
// are a generic vision-encoder patching scheme; all fields are configurable.
struct VisualTokenModel {
  int patch_px = 14;
  int merge = 2;
  std::optional<long long> token_cap;

  int cell_px() const { return patch_px * merge; }
};

long long count_visual_tokens(const PageImage& image, const VisualTokenModel& vtm);

class TextTokenizer {
 public:
  virtual ~TextTokenizer() = default;
  virtual long long count(const std::string& text) const = 0;
};

// Default stand-in counter: per newline-delimited segment, ceil of the
// segment's codepoint count over 4, summed (the usual ~4-characters-per-token
// rule of thumb). Deterministic and tokenizer-free.
class HeuristicTokenizer final : public TextTokenizer {
 public:
  long long count(const std::string& text) const override;
};

// Calibrated option: greedy longest-match over a supplied vocabulary, one
// entry per line; any unmatched byte counts as one token.
class VocabTokenizer final : public TextTokenizer {
 public:
  explicit VocabTokenizer(std::vector<std::string> vocabulary);
  static VocabTokenizer from_file(const std::string& path);
  long long count(const std::string& text) const override;

 private:
  std::vector<std::string> sorted_;  // by length desc then lexicographic
  std::size_t max_len_ = 0;
};

long long count_text_tokens(const std::string& text, const TextTokenizer& tokenizer);

struct CompressionReport {
  long long text_tokens = 0;
  std::vector<long long> per_page_visual_tokens;
  long long total_visual_tokens = 0;
  double rho = 0.0;
  std::string config_fingerprint;
};

// rho = text_tokens / total visual tokens. Throws on an empty page list; a
// nonempty page always counts at least one cell, so the ratio is total.
CompressionReport compression_report(const std::string& text,
                                     const std::vector<PageImage>& pages,
                                     const VisualTokenModel& vtm,
                                     const TextTokenizer& tokenizer,
                                     std::string config_fingerprint = {});

std::string compression_report_json(const CompressionReport& report);

}  // namespace glyphpress

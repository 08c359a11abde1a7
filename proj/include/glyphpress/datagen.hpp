#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glyphpress/config.hpp"
#include "glyphpress/eval.hpp"
#include "glyphpress/typesetter.hpp"

namespace glyphpress {

// Targets come from layout provenance, never from pixel recognition, so every
// sample is correct by construction. All span/split choices snap to paragraph
// boundaries of the normalized text.

struct OcrSpanPolicy {
  std::optional<int> start_page;  // fixed span when both are set
  std::optional<int> page_count;
  int max_pages = 0;  // cap for seeded draws; 0 = up to the whole document
};

struct OcrSample {
  std::vector<PageImage> pages;
  std::string target;  // normalized text owned by exactly these pages
  int page_start = 0;
  int page_count = 0;
};

// Renders the document and selects a contiguous page span (seed-driven unless
// the policy pins it). Throws if a pinned span exceeds the page count.
OcrSample make_ocr_sample(const std::string& text, const RenderConfig& config,
                          const OcrSpanPolicy& policy, std::uint64_t seed,
                          const GlyphMetricsProvider& metrics = default_metrics());

struct InterleavedSegment {
  bool is_image = false;
  std::string text;  // the normalized span; for image segments, its provenance
  std::vector<PageImage> pages;
};

struct InterleavedSample {
  std::vector<InterleavedSegment> segments;
  std::string original;  // normalized full text; segments concatenate to it
};

// Renders a seed-chosen subset of paragraphs covering about mask_fraction of
// the characters; the remaining spans stay as raw text, order preserved.
InterleavedSample make_interleaved_sample(const std::string& text, const RenderConfig& config,
                                          double mask_fraction, std::uint64_t seed,
                                          const GlyphMetricsProvider& metrics = default_metrics());

enum class GenerationMode { CompleteSuffix, CompletePrefix };

struct GenerationSample {
  GenerationMode mode = GenerationMode::CompleteSuffix;
  std::vector<PageImage> visible_pages;
  std::string visible_text;  // provenance of the rendered side
  std::string target;        // the hidden side
};

// Splits at the paragraph boundary nearest to split_fraction of the
// characters (ties to the earlier boundary), renders the visible side.
GenerationSample make_generation_sample(const std::string& text, const RenderConfig& config,
                                        GenerationMode mode, double split_fraction,
                                        std::uint64_t seed,
                                        const GlyphMetricsProvider& metrics = default_metrics());

struct SftSample {
  std::string instruction;
  std::vector<PageImage> pages;
  std::string response;  // exactly one thinking segment before the answer
};

// Renders item.context under the config and bundles it with the response.
// Throws std::invalid_argument when the response fails the format check.
SftSample package_sft(const ValidationItem& item, const RenderConfig& config,
                      const std::string& response_text,
                      const GlyphMetricsProvider& metrics = default_metrics());

// Manifest JSONL + content-addressed PNG store. Re-running with the same
// manifest directory skips records whose key is already present, so emission
// is append-only and resumable.
class DatasetWriter {
 public:
  explicit DatasetWriter(std::string out_dir);

  bool write_ocr(const std::string& source_id, const OcrSample& sample,
                 const std::string& config_fingerprint, std::uint64_t seed);
  bool write_interleaved(const std::string& source_id, const InterleavedSample& sample,
                         const std::string& config_fingerprint, std::uint64_t seed);
  bool write_generation(const std::string& source_id, const GenerationSample& sample,
                        const std::string& config_fingerprint, std::uint64_t seed);
  bool write_sft(const std::string& source_id, const SftSample& sample,
                 const std::string& config_fingerprint, std::uint64_t seed);

  int records_written() const { return records_written_; }
  int records_skipped() const { return records_skipped_; }
  const std::string& manifest_path() const { return manifest_path_; }

 private:
  bool known(const std::string& key) const;
  std::string store_image(const PageImage& image);
  bool emit(const std::string& task, const std::string& source_id,
            const std::string& config_fingerprint, std::uint64_t seed,
            const std::string& target, const std::vector<std::string>& images,
            const std::string& segments_json);

  std::string out_dir_;
  std::string images_dir_;
  std::string manifest_path_;
  std::vector<std::string> existing_keys_;
  int records_written_ = 0;
  int records_skipped_ = 0;
};

}  // namespace glyphpress

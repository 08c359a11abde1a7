#include "glyphpress/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "glyphpress/png.hpp"
#include "glyphpress/rl_math.hpp"
#include "glyphpress/rng.hpp"
#include "glyphpress/unicode.hpp"
#include "json.hpp"

namespace glyphpress {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Byte offsets where paragraphs start in the normalized text (0, and the
// position after each '\n'), plus the end sentinel.
std::vector<std::size_t> paragraph_starts(const std::string& normalized) {
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    if (normalized[i] == '\n') starts.push_back(i + 1);
  }
  starts.push_back(normalized.size());
  return starts;
}

}  // namespace

OcrSample make_ocr_sample(const std::string& text, const RenderConfig& config,
                          const OcrSpanPolicy& policy, std::uint64_t seed,
                          const GlyphMetricsProvider& metrics) {
  const auto pages = render_document(text, config, metrics);
  const int n = static_cast<int>(pages.size());

  int start = 0;
  int count = n;
  if (policy.start_page || policy.page_count) {
    start = policy.start_page.value_or(0);
    count = policy.page_count.value_or(n - start);
    if (start < 0 || count < 1 || start + count > n) {
      throw std::invalid_argument("make_ocr_sample: span [" + std::to_string(start) + ", +" +
                                  std::to_string(count) + ") exceeds " + std::to_string(n) +
                                  " pages");
    }
  } else {
    DetRng rng(mix_seed(seed, 0x6f6372ULL));
    const int max_count = policy.max_pages > 0 ? std::min(policy.max_pages, n) : n;
    count = static_cast<int>(rng.uniform_int(1, max_count));
    start = static_cast<int>(rng.uniform_int(0, n - count));
  }

  OcrSample sample;
  sample.page_start = start;
  sample.page_count = count;
  sample.pages.assign(pages.begin() + start, pages.begin() + start + count);
  const auto& first = *pages[static_cast<std::size_t>(start)].layout;
  const auto& last = *pages[static_cast<std::size_t>(start + count - 1)].layout;
  sample.target = first.source->substr(first.span_begin, last.span_end - first.span_begin);
  return sample;
}

InterleavedSample make_interleaved_sample(const std::string& text, const RenderConfig& config,
                                          double mask_fraction, std::uint64_t seed,
                                          const GlyphMetricsProvider& metrics) {
  if (mask_fraction <= 0.0 || mask_fraction >= 1.0) {
    throw std::invalid_argument("make_interleaved_sample: mask_fraction must be in (0,1)");
  }
  InterleavedSample sample;
  sample.original = normalize_text(text);
  const auto starts = paragraph_starts(sample.original);
  const std::size_t para_count = starts.size() - 1;

  std::vector<std::size_t> cp_counts(para_count);
  std::size_t total_cps = 0;
  for (std::size_t i = 0; i < para_count; ++i) {
    cp_counts[i] = codepoint_count(
        std::string_view(sample.original).substr(starts[i], starts[i + 1] - starts[i]));
    total_cps += cp_counts[i];
  }

  // seeded shuffle, then greedily mark paragraphs for rendering until the
  // character budget is covered
  std::vector<std::size_t> order(para_count);
  for (std::size_t i = 0; i < para_count; ++i) order[i] = i;
  DetRng rng(mix_seed(seed, 0x696c6dULL));
  for (std::size_t i = para_count; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(order[i - 1], order[j]);
  }
  const double target = mask_fraction * static_cast<double>(total_cps);
  std::vector<bool> rendered(para_count, false);
  double covered = 0.0;
  for (std::size_t idx : order) {
    if (covered >= target) break;
    rendered[idx] = true;
    covered += static_cast<double>(cp_counts[idx]);
  }

  for (std::size_t i = 0; i < para_count;) {
    std::size_t j = i;
    while (j < para_count && rendered[j] == rendered[i]) ++j;
    InterleavedSegment seg;
    seg.is_image = rendered[i];
    seg.text = sample.original.substr(starts[i], starts[j] - starts[i]);
    if (seg.is_image) seg.pages = render_document(seg.text, config, metrics);
    sample.segments.push_back(std::move(seg));
    i = j;
  }
  return sample;
}

GenerationSample make_generation_sample(const std::string& text, const RenderConfig& config,
                                        GenerationMode mode, double split_fraction,
                                        std::uint64_t /*seed*/,
                                        const GlyphMetricsProvider& metrics) {
  if (split_fraction <= 0.0 || split_fraction >= 1.0) {
    throw std::invalid_argument("make_generation_sample: split_fraction must be in (0,1)");
  }
  const std::string normalized = normalize_text(text);
  const auto starts = paragraph_starts(normalized);

  // candidate boundaries: internal paragraph starts; a one-paragraph text
  // degenerates to the document edges
  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i + 1 < starts.size(); ++i) candidates.push_back(starts[i]);
  if (candidates.empty()) candidates = {0, normalized.size()};

  const double total = static_cast<double>(codepoint_count(normalized));
  const double target = split_fraction * total;
  std::size_t best = candidates.front();
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t b : candidates) {
    const double at = static_cast<double>(codepoint_count(std::string_view(normalized).substr(0, b)));
    const double dist = std::abs(at - target);
    if (dist < best_dist) {
      best_dist = dist;
      best = b;
    }
  }

  GenerationSample sample;
  sample.mode = mode;
  const std::string prefix = normalized.substr(0, best);
  const std::string suffix = normalized.substr(best);
  if (mode == GenerationMode::CompleteSuffix) {
    sample.visible_text = prefix;
    sample.target = suffix;
  } else {
    sample.visible_text = suffix;
    sample.target = prefix;
  }
  sample.visible_pages = render_document(sample.visible_text, config, metrics);
  return sample;
}

SftSample package_sft(const ValidationItem& item, const RenderConfig& config,
                      const std::string& response_text, const GlyphMetricsProvider& metrics) {
  if (format_reward(response_text) != 1) {
    throw std::invalid_argument(
        "package_sft: response fails the thinking-format check (exactly one "
        "<think>...</think> segment followed by a nonempty answer)");
  }
  SftSample sample;
  sample.instruction = item.instruction;
  sample.response = response_text;
  sample.pages = render_document(item.context, config, metrics);
  return sample;
}

namespace {

std::string record_key(const std::string& task, const std::string& source_id,
                       const std::string& fingerprint, std::uint64_t seed) {
  return task + "|" + source_id + "|" + fingerprint + "|" + std::to_string(seed);
}

}  // namespace

DatasetWriter::DatasetWriter(std::string out_dir) : out_dir_(std::move(out_dir)) {
  images_dir_ = out_dir_ + "/images";
  manifest_path_ = out_dir_ + "/manifest.jsonl";
  fs::create_directories(images_dir_);

  std::ifstream in(manifest_path_, std::ios::binary);
  std::string line;
  while (in && std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) continue;
    existing_keys_.push_back(record_key(j.value("task", ""), j.value("source_id", ""),
                                        j.value("config_fingerprint", ""),
                                        j.value("seed", 0ULL)));
  }
}

bool DatasetWriter::known(const std::string& key) const {
  return std::find(existing_keys_.begin(), existing_keys_.end(), key) != existing_keys_.end();
}

std::string DatasetWriter::store_image(const PageImage& image) {
  const auto bytes = encode_png(image);
  const std::string name = fnv_hex(fnv1a64(bytes.data(), bytes.size())) + ".png";
  const std::string rel = "images/" + name;
  const fs::path full = fs::path(out_dir_) / rel;
  if (!fs::exists(full)) {
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write image: " + full.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  return rel;
}

bool DatasetWriter::emit(const std::string& task, const std::string& source_id,
                         const std::string& config_fingerprint, std::uint64_t seed,
                         const std::string& target, const std::vector<std::string>& images,
                         const std::string& segments_json) {
  const auto key = record_key(task, source_id, config_fingerprint, seed);
  if (known(key)) {
    ++records_skipped_;
    return false;
  }
  json j;
  j["task"] = task;
  j["source_id"] = source_id;
  j["images"] = images;
  j["segments"] = segments_json.empty() ? json(nullptr) : json::parse(segments_json);
  j["target"] = target;
  j["config_fingerprint"] = config_fingerprint;
  j["seed"] = seed;

  std::ofstream out(manifest_path_, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot append manifest: " + manifest_path_);
  out << j.dump() << '\n';
  existing_keys_.push_back(key);
  ++records_written_;
  return true;
}

bool DatasetWriter::write_ocr(const std::string& source_id, const OcrSample& sample,
                              const std::string& config_fingerprint, std::uint64_t seed) {
  std::vector<std::string> paths;
  for (const auto& page : sample.pages) paths.push_back(store_image(page));
  json extras;
  extras["page_start"] = sample.page_start;
  extras["page_count"] = sample.page_count;
  return emit("ocr", source_id, config_fingerprint, seed, sample.target, paths, extras.dump());
}

bool DatasetWriter::write_interleaved(const std::string& source_id,
                                      const InterleavedSample& sample,
                                      const std::string& config_fingerprint, std::uint64_t seed) {
  std::vector<std::string> all_paths;
  json segments = json::array();
  for (const auto& seg : sample.segments) {
    if (seg.is_image) {
      std::vector<std::string> paths;
      for (const auto& page : seg.pages) paths.push_back(store_image(page));
      all_paths.insert(all_paths.end(), paths.begin(), paths.end());
      segments.push_back(json{{"type", "image"}, {"images", paths}, {"text", seg.text}});
    } else {
      segments.push_back(json{{"type", "text"}, {"text", seg.text}});
    }
  }
  return emit("interleave", source_id, config_fingerprint, seed, sample.original, all_paths,
              segments.dump());
}

bool DatasetWriter::write_generation(const std::string& source_id,
                                     const GenerationSample& sample,
                                     const std::string& config_fingerprint, std::uint64_t seed) {
  std::vector<std::string> paths;
  for (const auto& page : sample.visible_pages) paths.push_back(store_image(page));
  json extras;
  extras["mode"] =
      sample.mode == GenerationMode::CompleteSuffix ? "complete_suffix" : "complete_prefix";
  extras["visible_text"] = sample.visible_text;
  return emit("generation", source_id, config_fingerprint, seed, sample.target, paths,
              extras.dump());
}

bool DatasetWriter::write_sft(const std::string& source_id, const SftSample& sample,
                              const std::string& config_fingerprint, std::uint64_t seed) {
  std::vector<std::string> paths;
  for (const auto& page : sample.pages) paths.push_back(store_image(page));
  json extras;
  extras["instruction"] = sample.instruction;
  return emit("sft", source_id, config_fingerprint, seed, sample.response, paths, extras.dump());
}

}  // namespace glyphpress

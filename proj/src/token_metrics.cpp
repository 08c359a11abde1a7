#include "glyphpress/token_metrics.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "glyphpress/unicode.hpp"
#include "json.hpp"

namespace glyphpress {

long long count_visual_tokens(const PageImage& image, const VisualTokenModel& vtm) {
  if (image.width_px <= 0 || image.height_px <= 0) {
    throw std::invalid_argument("count_visual_tokens: zero-dimension image");
  }
  const long long cell = vtm.cell_px();
  if (cell <= 0) throw std::invalid_argument("count_visual_tokens: nonpositive cell");
  const long long cols = (image.width_px + cell - 1) / cell;
  const long long rows = (image.height_px + cell - 1) / cell;
  long long tokens = cols * rows;
  if (vtm.token_cap) tokens = std::min(tokens, *vtm.token_cap);
  return tokens;
}

long long HeuristicTokenizer::count(const std::string& text) const {
  long long total = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::size_t chars =
        codepoint_count(std::string_view(text).substr(start, end - start));
    total += static_cast<long long>((chars + 3) / 4);
    if (end == text.size()) break;
    start = end + 1;
  }
  return total;
}

VocabTokenizer::VocabTokenizer(std::vector<std::string> vocabulary)
    : sorted_(std::move(vocabulary)) {
  std::erase_if(sorted_, [](const std::string& s) { return s.empty(); });
  std::sort(sorted_.begin(), sorted_.end(), [](const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  sorted_.erase(std::unique(sorted_.begin(), sorted_.end()), sorted_.end());
  for (const auto& s : sorted_) max_len_ = std::max(max_len_, s.size());
}

VocabTokenizer VocabTokenizer::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
  std::vector<std::string> vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) vocab.push_back(line);
  }
  return VocabTokenizer(std::move(vocab));
}

long long VocabTokenizer::count(const std::string& text) const {
  long long tokens = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t matched = 0;
    for (const auto& entry : sorted_) {
      if (entry.size() > text.size() - pos) continue;
      if (text.compare(pos, entry.size(), entry) == 0) {
        matched = entry.size();
        break;
      }
    }
    pos += matched > 0 ? matched : 1;
    ++tokens;
  }
  return tokens;
}

long long count_text_tokens(const std::string& text, const TextTokenizer& tokenizer) {
  return tokenizer.count(text);
}

CompressionReport compression_report(const std::string& text,
                                     const std::vector<PageImage>& pages,
                                     const VisualTokenModel& vtm,
                                     const TextTokenizer& tokenizer,
                                     std::string config_fingerprint) {
  if (pages.empty()) {
    throw std::invalid_argument("compression_report: no pages");
  }
  CompressionReport report;
  report.config_fingerprint = std::move(config_fingerprint);
  report.text_tokens = count_text_tokens(text, tokenizer);
  for (const auto& page : pages) {
    const long long t = count_visual_tokens(page, vtm);
    report.per_page_visual_tokens.push_back(t);
    report.total_visual_tokens += t;
  }
  report.rho = static_cast<double>(report.text_tokens) /
               static_cast<double>(report.total_visual_tokens);
  return report;
}

std::string compression_report_json(const CompressionReport& report) {
  nlohmann::json j;
  j["text_tokens"] = report.text_tokens;
  j["per_page_visual_tokens"] = report.per_page_visual_tokens;
  j["total_visual_tokens"] = report.total_visual_tokens;
  j["rho"] = report.rho;
  j["config_fingerprint"] = report.config_fingerprint;
  return j.dump(2);
}

}  // namespace glyphpress

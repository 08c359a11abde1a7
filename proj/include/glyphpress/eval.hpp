#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "glyphpress/config.hpp"
#include "glyphpress/http.hpp"
#include "glyphpress/token_metrics.hpp"
#include "glyphpress/typesetter.hpp"

namespace glyphpress {

struct ValidationItem {
  std::string id;
  std::string context;      // the long text rendered as pages
  std::string instruction;  // short task prompt
  std::string answer;       // gold response
  std::optional<std::string> tag;
};

class ValsetParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSONL, one {"id","context","instruction","answer","tag"?} per line.
// Malformed lines and duplicate ids fail with line number / id in the message.
std::vector<ValidationItem> load_validation_set(const std::string& path);
std::vector<ValidationItem> parse_validation_set(const std::string& jsonl,
                                                 const std::string& origin = "<memory>");

// trim, collapse internal whitespace, ASCII casefold
std::string normalize_answer(const std::string& s);

// 1 iff normalized strings are equal.
double score_exact(const std::string& prediction, const std::string& gold);

// A scorer returns nullopt for "unscored" (judge timeout, unparseable
// verdict); unscored items never count as zero.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::optional<double> score(const std::string& prediction, const std::string& gold,
                                      const std::string& instruction) const = 0;
};

class ExactMatchScorer final : public Scorer {
 public:
  std::optional<double> score(const std::string& prediction, const std::string& gold,
                              const std::string& /*instruction*/) const override {
    return score_exact(prediction, gold);
  }
};

// Sends the fixed judging prompt and maps the verdict token to {0,1};
// transport or parse failure yields nullopt (unscored), never a silent zero.
std::optional<int> judge_remote(const std::string& prediction, const std::string& gold,
                                const std::string& instruction, const Endpoint& endpoint);

std::string judge_prompt(const std::string& prediction, const std::string& gold,
                         const std::string& instruction);

class RemoteJudgeScorer final : public Scorer {
 public:
  explicit RemoteJudgeScorer(Endpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::optional<double> score(const std::string& prediction, const std::string& gold,
                              const std::string& instruction) const override {
    auto v = judge_remote(prediction, gold, instruction, endpoint_);
    if (!v) return std::nullopt;
    return static_cast<double>(*v);
  }

 private:
  Endpoint endpoint_;
};

// Produces a prediction from an instruction plus rendered pages. nullopt
// marks the item unscored. Implementations: the remote VLM client below and
// deterministic mocks in tests / the CLI --mock path.
class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual std::optional<std::string> predict(const std::string& instruction,
                                             const std::vector<PageImage>& pages) = 0;
};

// Chat-style multimodal request: pages attached as base64 PNGs in reading
// order; expects {"prediction": "..."} back.
class RemoteVlmClient final : public ModelClient {
 public:
  explicit RemoteVlmClient(Endpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::optional<std::string> predict(const std::string& instruction,
                                     const std::vector<PageImage>& pages) override;

 private:
  Endpoint endpoint_;
};

struct EvalReport {
  double accuracy = 0.0;  // mean over scored items only
  double mean_rho = 0.0;  // arithmetic mean of per-item compression ratios
  int scored_items = 0;
  int total_items = 0;
  std::vector<std::string> unscored_ids;
};

// Renders each item's context under `config`, asks the model, scores the
// prediction. Returns nullopt when every item ends up unscored (evaluation
// failure for the candidate). Throws on an empty set or invalid config.
std::optional<EvalReport> evaluate_config(const RenderConfig& config,
                                          const std::vector<ValidationItem>& items,
                                          ModelClient& model, const Scorer& scorer,
                                          const VisualTokenModel& vtm,
                                          const TextTokenizer& tokenizer, int jobs = 1);

}  // namespace glyphpress

#include "glyphpress/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "glyphpress/png.hpp"
#include "json.hpp"

namespace glyphpress {

using nlohmann::json;

std::vector<ValidationItem> parse_validation_set(const std::string& jsonl,
                                                 const std::string& origin) {
  std::vector<ValidationItem> items;
  std::set<std::string> seen_ids;
  std::istringstream in(jsonl);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw ValsetParseError(origin + ":" + std::to_string(line_no) + ": malformed JSON line");
    }
    auto field = [&](const char* name) -> std::string {
      auto it = j.find(name);
      if (it == j.end() || !it->is_string()) {
        throw ValsetParseError(origin + ":" + std::to_string(line_no) +
                               ": missing string field \"" + name + "\"");
      }
      return it->get<std::string>();
    };
    ValidationItem item;
    item.id = field("id");
    item.context = field("context");
    item.instruction = field("instruction");
    item.answer = field("answer");
    if (auto it = j.find("tag"); it != j.end() && it->is_string()) {
      item.tag = it->get<std::string>();
    }
    if (item.context.empty()) {
      throw ValsetParseError(origin + ":" + std::to_string(line_no) + ": empty context for id \"" +
                             item.id + "\"");
    }
    if (!seen_ids.insert(item.id).second) {
      throw ValsetParseError(origin + ": duplicate id \"" + item.id + "\"");
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<ValidationItem> load_validation_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValsetParseError("cannot open validation set: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_validation_set(buf.str(), path);
}

std::string normalize_answer(const std::string& s) {
  std::string out;
  bool pending_space = false;
  for (char ch : s) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isspace(u)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

double score_exact(const std::string& prediction, const std::string& gold) {
  return normalize_answer(prediction) == normalize_answer(gold) ? 1.0 : 0.0;
}

std::string judge_prompt(const std::string& prediction, const std::string& gold,
                         const std::string& instruction) {
  std::string p;
  p += "You are a strict grader. Compare the candidate answer against the "
       "reference answer for the given instruction. Reply with exactly one "
       "word: CORRECT if the candidate conveys the reference answer, "
       "INCORRECT otherwise.\n";
  p += "Instruction: " + instruction + "\n";
  p += "Reference: " + gold + "\n";
  p += "Candidate: " + prediction + "\n";
  p += "Verdict:";
  return p;
}

std::optional<int> judge_remote(const std::string& prediction, const std::string& gold,
                                const std::string& instruction, const Endpoint& endpoint) {
  json req;
  req["prompt"] = judge_prompt(prediction, gold, instruction);
  req["instruction"] = instruction;
  req["reference"] = gold;
  req["candidate"] = prediction;
  const auto body = http_post_json(endpoint, req.dump());
  if (!body) return std::nullopt;

  // Accept either a raw verdict or any JSON payload containing one; scan for
  // INCORRECT before CORRECT since the former embeds the latter.
  std::string text = *body;
  json parsed = json::parse(text, nullptr, false);
  if (!parsed.is_discarded()) {
    if (parsed.is_string()) {
      text = parsed.get<std::string>();
    } else if (parsed.is_object()) {
      if (auto it = parsed.find("verdict"); it != parsed.end() && it->is_string()) {
        text = it->get<std::string>();
      }
    }
  }
  if (text.find("INCORRECT") != std::string::npos) return 0;
  if (text.find("CORRECT") != std::string::npos) return 1;
  return std::nullopt;
}

std::optional<std::string> RemoteVlmClient::predict(const std::string& instruction,
                                                    const std::vector<PageImage>& pages) {
  json req;
  req["instruction"] = instruction;
  json images = json::array();
  for (const auto& page : pages) {
    const auto png = encode_png(page);
    images.push_back(json{{"png_base64", base64_encode(png.data(), png.size())}});
  }
  req["images"] = std::move(images);
  const auto body = http_post_json(endpoint_, req.dump());
  if (!body) return std::nullopt;
  json parsed = json::parse(*body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) return std::nullopt;
  auto it = parsed.find("prediction");
  if (it == parsed.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

std::optional<EvalReport> evaluate_config(const RenderConfig& config,
                                          const std::vector<ValidationItem>& items,
                                          ModelClient& model, const Scorer& scorer,
                                          const VisualTokenModel& vtm,
                                          const TextTokenizer& tokenizer, int jobs) {
  if (items.empty()) {
    throw std::invalid_argument("evaluate_config: empty validation set");
  }
  const ValidationReport vr = validate(config);
  if (!vr.valid) {
    throw std::invalid_argument("evaluate_config: invalid config: " +
                                vr.violations.front().rule_id);
  }

  struct ItemOutcome {
    double rho = 0.0;
    std::optional<double> score;
  };
  std::vector<ItemOutcome> outcomes(items.size());

  // Rendering parallelizes per item; the model/scorer calls stay on the
  // worker too since aggregation below is order-independent.
  auto worker = [&](std::size_t index) {
    const auto& item = items[index];
    const auto pages = render_document(item.context, config);
    outcomes[index].rho = compression_report(item.context, pages, vtm, tokenizer).rho;
    const auto prediction = model.predict(item.instruction, pages);
    if (!prediction) return;
    outcomes[index].score = scorer.score(*prediction, item.answer, item.instruction);
  };

  if (jobs <= 1 || items.size() <= 1) {
    for (std::size_t i = 0; i < items.size(); ++i) worker(i);
  } else {
    std::atomic<std::size_t> next{0};
    const int threads = std::min<int>(jobs, static_cast<int>(items.size()));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1)) {
          worker(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  EvalReport report;
  report.total_items = static_cast<int>(items.size());
  double score_sum = 0.0;
  double rho_sum = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    rho_sum += outcomes[i].rho;
    if (outcomes[i].score) {
      score_sum += *outcomes[i].score;
      ++report.scored_items;
    } else {
      report.unscored_ids.push_back(items[i].id);
    }
  }
  if (report.scored_items == 0) return std::nullopt;
  report.accuracy = score_sum / report.scored_items;
  report.mean_rho = rho_sum / static_cast<double>(items.size());
  return report;
}

}  // namespace glyphpress

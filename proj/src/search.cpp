#include "glyphpress/search.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "glyphpress/rng.hpp"
#include "json.hpp"

namespace glyphpress {

using nlohmann::json;

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Seeded: return "seeded";
    case Provenance::Mutation: return "mutation";
    case Provenance::Crossover: return "crossover";
    case Provenance::Critic: return "critic";
  }
  return "seeded";
}

std::optional<Provenance> provenance_from_string(const std::string& s) {
  if (s == "seeded") return Provenance::Seeded;
  if (s == "mutation") return Provenance::Mutation;
  if (s == "crossover") return Provenance::Crossover;
  if (s == "critic") return Provenance::Critic;
  return std::nullopt;
}

FitnessKeys fitness(double accuracy, double rho, const FitnessPolicy& policy) {
  if (policy.mode == FitnessMode::Constrained) {
    if (accuracy >= policy.reference_accuracy - policy.accuracy_slack) {
      return FitnessKeys{1.0, rho};  // feasible band competes on compression
    }
    return FitnessKeys{0.0, accuracy};
  }
  return FitnessKeys{accuracy + policy.lambda * rho / policy.rho_normalizer, rho};
}

FitnessKeys failed_fitness() { return FitnessKeys{}; }

bool fitness_better(const FitnessKeys& a, double rho_a, const std::string& fp_a,
                    const FitnessKeys& b, double rho_b, const std::string& fp_b) {
  if (a.primary != b.primary) return a.primary > b.primary;
  if (a.secondary != b.secondary) return a.secondary > b.secondary;
  if (rho_a != rho_b) return rho_a > rho_b;
  return fp_a < fp_b;
}

namespace {

double rho_or_neg_inf(const Candidate& c) {
  return c.rho ? *c.rho : -std::numeric_limits<double>::infinity();
}

FitnessKeys candidate_keys(const Candidate& c, const FitnessPolicy& policy) {
  if (c.failed || !c.accuracy || !c.rho) return failed_fitness();
  return fitness(*c.accuracy, *c.rho, policy);
}

bool record_better(const HistoryRecord& a, const HistoryRecord& b, const FitnessPolicy& policy) {
  return fitness_better(candidate_keys(a.candidate, policy), rho_or_neg_inf(a.candidate),
                        a.candidate.fingerprint, candidate_keys(b.candidate, policy),
                        rho_or_neg_inf(b.candidate), b.candidate.fingerprint);
}

}  // namespace

void SearchHistory::append(HistoryRecord record) {
  record.seq = next_seq_++;
  records_.push_back(std::move(record));
}

void SearchHistory::append_event(int generation, std::string event, std::string detail) {
  events_.push_back({generation, std::move(event), std::move(detail), next_seq_++});
}

const HistoryRecord* SearchHistory::find(const std::string& fingerprint) const {
  for (const auto& r : records_) {
    if (r.candidate.fingerprint == fingerprint) return &r;
  }
  return nullptr;
}

int SearchHistory::last_generation() const {
  int g = -1;
  for (const auto& r : records_) g = std::max(g, r.generation);
  return g;
}

std::optional<double> SearchHistory::best_accuracy() const {
  std::optional<double> best;
  for (const auto& r : records_) {
    if (r.candidate.accuracy && (!best || *r.candidate.accuracy > *best)) {
      best = *r.candidate.accuracy;
    }
  }
  return best;
}

namespace {

json keys_to_json(const FitnessKeys& keys) {
  auto enc = [](double v) -> json {
    return std::isfinite(v) ? json(v) : json(nullptr);
  };
  return json::array({enc(keys.primary), enc(keys.secondary)});
}

double key_from_json(const json& v) {
  return v.is_number() ? v.get<double>() : -std::numeric_limits<double>::infinity();
}

}  // namespace

std::string SearchHistory::to_jsonl() const {
  // records and events interleaved in logical order
  std::vector<std::pair<long long, json>> lines;
  for (const auto& r : records_) {
    json j;
    j["generation"] = r.generation;
    j["config"] = json::parse(save_config(r.candidate.config));
    j["fingerprint"] = r.candidate.fingerprint;
    j["accuracy"] = r.candidate.accuracy ? json(*r.candidate.accuracy) : json(nullptr);
    j["rho"] = r.candidate.rho ? json(*r.candidate.rho) : json(nullptr);
    j["fitness_keys"] = keys_to_json(r.keys);
    j["provenance"] = to_string(r.candidate.provenance);
    j["timestamp"] = r.seq;
    lines.emplace_back(r.seq, std::move(j));
  }
  for (const auto& e : events_) {
    json j;
    j["event"] = e.event;
    j["generation"] = e.generation;
    j["detail"] = e.detail;
    j["timestamp"] = e.seq;
    lines.emplace_back(e.seq, std::move(j));
  }
  std::sort(lines.begin(), lines.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  for (const auto& [seq, j] : lines) {
    out += j.dump();
    out += '\n';
  }
  return out;
}

SearchHistory SearchHistory::from_jsonl(const std::string& jsonl) {
  SearchHistory history;
  std::istringstream in(jsonl);
  std::string line;
  int line_no = 0;
  long long max_seq = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw std::runtime_error("history line " + std::to_string(line_no) + ": malformed JSON");
    }
    const long long seq = j.value("timestamp", 0LL);
    max_seq = std::max(max_seq, seq);
    if (j.contains("event")) {
      history.events_.push_back(
          {j.value("generation", 0), j["event"].get<std::string>(), j.value("detail", ""), seq});
      continue;
    }
    HistoryRecord r;
    r.generation = j.value("generation", 0);
    r.candidate.config = load_config(j.at("config").dump());
    r.candidate.fingerprint = config_fingerprint(r.candidate.config);
    r.candidate.generation = r.generation;
    if (j.contains("accuracy") && j["accuracy"].is_number()) {
      r.candidate.accuracy = j["accuracy"].get<double>();
    }
    if (j.contains("rho") && j["rho"].is_number()) {
      r.candidate.rho = j["rho"].get<double>();
    }
    r.candidate.failed = !(r.candidate.accuracy && r.candidate.rho);
    if (auto p = provenance_from_string(j.value("provenance", "seeded"))) {
      r.candidate.provenance = *p;
    }
    if (j.contains("fitness_keys") && j["fitness_keys"].is_array() &&
        j["fitness_keys"].size() == 2) {
      r.keys = FitnessKeys{key_from_json(j["fitness_keys"][0]),
                           key_from_json(j["fitness_keys"][1])};
    }
    r.seq = seq;
    history.records_.push_back(std::move(r));
  }
  history.next_seq_ = max_seq + 1;
  return history;
}

std::vector<Candidate> init_population(std::uint64_t seed, int size,
                                       const SamplingPolicy& sampling) {
  if (size < 2) {
    throw std::invalid_argument("init_population: size must be at least 2");
  }
  std::vector<Candidate> population;
  std::unordered_set<std::string> fingerprints;
  std::uint64_t attempt = 0;
  while (population.size() < static_cast<std::size_t>(size)) {
    const auto child_seed = mix_seed(seed, attempt++);
    Candidate c;
    c.config = sample_config(child_seed, std::nullopt, sampling);
    c.fingerprint = config_fingerprint(c.config);
    c.provenance = Provenance::Seeded;
    if (fingerprints.insert(c.fingerprint).second) {
      population.push_back(std::move(c));
    }
    if (attempt > static_cast<std::uint64_t>(size) * 1000) {
      // policy space too small to hold `size` distinct configs
      break;
    }
  }
  if (population.size() < static_cast<std::size_t>(size)) {
    throw std::invalid_argument("init_population: sampling policy cannot yield enough distinct configs");
  }
  return population;
}

namespace {

// Field groups treated as atomic units by mutation and crossover.
enum FieldGroup : int {
  kDpi,
  kPageSize,
  kFontFamily,
  kItalic,
  kFontSize,
  kLineHeight,
  kAlignment,
  kMargins,
  kIndent,
  kSpacing,
  kHScale,
  kColors,
  kBorders,
  kNewlineMarkup,
  kAutoCrop,
  kFieldGroupCount,
};

int line_height_delta(const RenderConfig& c) {
  const double d = c.line_height_pt - c.font_size_pt;
  return std::clamp(static_cast<int>(std::lround(d)), 0, 3);
}

void copy_group(RenderConfig& dst, const RenderConfig& src, int group) {
  switch (group) {
    case kDpi: dst.dpi = src.dpi; break;
    case kPageSize: dst.page_size = src.page_size; break;
    case kFontFamily: dst.font_family = src.font_family; break;
    case kItalic: dst.italic = src.italic; break;
    case kFontSize: {
      const int delta = line_height_delta(dst);
      dst.font_size_pt = src.font_size_pt;
      dst.line_height_pt = dst.font_size_pt + delta;
      break;
    }
    case kLineHeight:
      dst.line_height_pt = dst.font_size_pt + line_height_delta(src);
      break;
    case kAlignment: dst.alignment = src.alignment; break;
    case kMargins: dst.margins_pt = src.margins_pt; break;
    case kIndent: dst.indent = src.indent; break;
    case kSpacing: dst.spacing_pt = src.spacing_pt; break;
    case kHScale: dst.h_scale = src.h_scale; break;
    case kColors: dst.colors = src.colors; break;
    case kBorders: dst.borders = src.borders; break;
    case kNewlineMarkup: dst.newline_markup = src.newline_markup; break;
    case kAutoCrop: dst.auto_crop = src.auto_crop; break;
    default: break;
  }
}

}  // namespace

RenderConfig heuristic_mutate(const RenderConfig& config, std::uint64_t rng_seed,
                              const SamplingPolicy& sampling) {
  DetRng rng(mix_seed(rng_seed, 0x6d7574ULL));
  for (int attempt = 0; attempt < 16; ++attempt) {
    // redraw 1-3 field groups from a fresh policy sample with the same theme
    const RenderConfig donor =
        sample_config(rng.next_u64(), config.theme, sampling);
    RenderConfig out = config;
    const int n = static_cast<int>(rng.uniform_int(1, 3));
    std::vector<int> groups;
    while (static_cast<int>(groups.size()) < n) {
      const int g = static_cast<int>(rng.uniform_int(0, kFieldGroupCount - 1));
      if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
    }
    for (int g : groups) copy_group(out, donor, g);
    if (validate(out).valid) return out;
  }
  return config;
}

RenderConfig crossover(const RenderConfig& a, const RenderConfig& b, std::uint64_t rng_seed) {
  DetRng rng(mix_seed(rng_seed, 0x63726fULL));
  RenderConfig child = a;
  int line_height_parent = 0;
  for (int g = 0; g < kFieldGroupCount; ++g) {
    const bool from_b = rng.bernoulli(0.5);
    if (g == kLineHeight) line_height_parent = from_b ? 1 : 0;
    if (from_b) copy_group(child, b, g);
  }
  // repair: re-tie line height to the chosen font size
  if (child.line_height_pt < child.font_size_pt) {
    child.line_height_pt =
        child.font_size_pt + line_height_delta(line_height_parent ? b : a);
  }
  if (validate(child).valid) return child;
  // re-tie the geometry to parent a, then colors, then give up on mixing
  child.page_size = a.page_size;
  child.margins_pt = a.margins_pt;
  if (validate(child).valid) return child;
  child.colors = a.colors;
  if (validate(child).valid) return child;
  return a;
}

namespace {

json candidate_to_json(const Candidate& c) {
  json j;
  j["config"] = json::parse(save_config(c.config));
  j["fingerprint"] = c.fingerprint;
  j["accuracy"] = c.accuracy ? json(*c.accuracy) : json(nullptr);
  j["rho"] = c.rho ? json(*c.rho) : json(nullptr);
  return j;
}

// Accepts a few unsuffixed aliases so terse critic replies still apply.
std::string normalize_edit_key(const std::string& key) {
  if (key == "font_size") return "font_size_pt";
  if (key == "line_height") return "line_height_pt";
  if (key == "margins") return "margins_pt";
  if (key == "spacing") return "spacing_pt";
  return key;
}

std::optional<RenderConfig> apply_edits(const RenderConfig& base, const json& edits) {
  if (!edits.is_object() || edits.empty()) return std::nullopt;
  json j = json::parse(save_config(base));
  for (const auto& [key, value] : edits.items()) {
    j[normalize_edit_key(key)] = value;
  }
  RenderConfig out;
  try {
    out = load_config(j.dump());
  } catch (const ConfigParseError&) {
    return std::nullopt;
  }
  if (out.line_height_pt < out.font_size_pt) {
    out.line_height_pt = out.font_size_pt + line_height_delta(base);
  }
  if (!validate(out).valid) return std::nullopt;
  return out;
}

Candidate make_offspring(const RenderConfig& config, Provenance provenance) {
  Candidate c;
  c.config = config;
  c.fingerprint = config_fingerprint(config);
  c.provenance = provenance;
  return c;
}

}  // namespace

std::vector<Candidate> critic_propose(const std::vector<Candidate>& population,
                                      SearchHistory& history, CriticClient* critic,
                                      int count, int generation, std::uint64_t rng_seed,
                                      const SearchParams& params,
                                      const SamplingPolicy& sampling) {
  DetRng rng(mix_seed(rng_seed, 0x637269ULL));
  std::vector<Candidate> out;
  if (count <= 0 || population.empty()) return out;

  auto fallback = [&] {
    const auto& base =
        population[static_cast<std::size_t>(rng.uniform_int(
            0, static_cast<std::int64_t>(population.size()) - 1))];
    return make_offspring(heuristic_mutate(base.config, rng.next_u64(), sampling),
                          Provenance::Mutation);
  };

  std::optional<std::string> reply;
  if (critic) {
    json req;
    req["task"] = "propose_render_configs";
    json pop = json::array();
    for (const auto& c : population) pop.push_back(candidate_to_json(c));
    req["population"] = std::move(pop);

    std::vector<const HistoryRecord*> top;
    for (const auto& r : history.records()) top.push_back(&r);
    std::sort(top.begin(), top.end(), [](const HistoryRecord* x, const HistoryRecord* y) {
      return fitness_better(x->keys, rho_or_neg_inf(x->candidate), x->candidate.fingerprint,
                            y->keys, rho_or_neg_inf(y->candidate), y->candidate.fingerprint);
    });
    if (static_cast<int>(top.size()) > params.critic_top_k) {
      top.resize(static_cast<std::size_t>(params.critic_top_k));
    }
    json hist = json::array();
    for (const auto* r : top) hist.push_back(candidate_to_json(r->candidate));
    req["history_top"] = std::move(hist);
    req["reply_format"] =
        "JSON array of proposals; each proposal is either an object of config "
        "edits or {\"base_fingerprint\": str, \"edits\": {field: value}}";
    reply = critic->propose(req.dump());
    if (!reply) {
      history.append_event(generation, "critic_fallback", "transport failure or timeout");
    }
  }

  if (reply) {
    json parsed = json::parse(*reply, nullptr, false);
    json proposals = json::array();
    if (parsed.is_array()) {
      proposals = parsed;
    } else if (parsed.is_object() && parsed.contains("proposals") &&
               parsed["proposals"].is_array()) {
      proposals = parsed["proposals"];
    } else {
      history.append_event(generation, "critic_fallback", "unparseable critic reply");
      proposals = json::array();
    }

    int rejected = 0;
    std::size_t base_cycle = 0;
    for (const auto& element : proposals) {
      if (static_cast<int>(out.size()) >= count) break;
      if (!element.is_object()) {
        ++rejected;
        continue;
      }
      json edits = element;
      const RenderConfig* base = &population[base_cycle % population.size()].config;
      if (element.contains("edits")) {
        edits = element["edits"];
        if (element.contains("base_fingerprint") && element["base_fingerprint"].is_string()) {
          const auto fp = element["base_fingerprint"].get<std::string>();
          for (const auto& c : population) {
            if (c.fingerprint == fp) {
              base = &c.config;
              break;
            }
          }
          if (const auto* rec = history.find(fp)) base = &rec->candidate.config;
        }
      }
      ++base_cycle;
      if (auto cfg = apply_edits(*base, edits)) {
        out.push_back(make_offspring(*cfg, Provenance::Critic));
      } else {
        ++rejected;
      }
    }
    if (rejected > 0) {
      history.append_event(generation, "critic_fallback",
                           std::to_string(rejected) + " proposal(s) invalid or unusable");
    }
  }

  while (static_cast<int>(out.size()) < count) out.push_back(fallback());
  return out;
}

namespace {

// Rank-weighted parent draw: weight 1/(rank+1) over candidates sorted best-first.
const Candidate& pick_parent(const std::vector<const Candidate*>& ranked, DetRng& rng) {
  std::vector<double> weights(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) weights[i] = 1.0 / (1.0 + static_cast<double>(i));
  return *ranked[rng.pick_weighted(weights)];
}

}  // namespace

void step_generation(SearchState& state, Evaluator& evaluator, const FitnessPolicy& policy,
                     const SearchParams& params, std::uint64_t rng_seed,
                     CriticClient* critic, const SamplingPolicy& sampling) {
  DetRng rng(mix_seed(rng_seed, 0x737465ULL));

  // evaluate pending candidates through the history cache; stop at the budget
  std::vector<std::size_t> newly_evaluated;
  for (std::size_t i = 0; i < state.population.size(); ++i) {
    Candidate& c = state.population[i];
    c.generation = state.generation;
    if (c.evaluated()) continue;
    if (const auto* cached = state.history.find(c.fingerprint)) {
      c.accuracy = cached->candidate.accuracy;
      c.rho = cached->candidate.rho;
      c.failed = cached->candidate.failed;
      continue;
    }
    if (state.history.evaluation_count() >= params.budget) continue;
    const auto scores = evaluator.evaluate(c.config);
    if (scores) {
      c.accuracy = scores->accuracy;
      c.rho = scores->rho;
    } else {
      c.failed = true;
    }
    newly_evaluated.push_back(i);
  }

  // rank with the generation's best accuracy as the constrained-mode anchor
  FitnessPolicy anchored = policy;
  double best_acc = 0.0;
  bool any = false;
  for (const auto& c : state.population) {
    if (c.accuracy) {
      best_acc = any ? std::max(best_acc, *c.accuracy) : *c.accuracy;
      any = true;
    }
  }
  anchored.reference_accuracy = any ? best_acc : policy.reference_accuracy;

  std::vector<const Candidate*> ranked;
  for (const auto& c : state.population) {
    if (c.evaluated()) ranked.push_back(&c);
  }
  std::sort(ranked.begin(), ranked.end(), [&](const Candidate* x, const Candidate* y) {
    return fitness_better(candidate_keys(*x, anchored), rho_or_neg_inf(*x), x->fingerprint,
                          candidate_keys(*y, anchored), rho_or_neg_inf(*y), y->fingerprint);
  });

  for (std::size_t i : newly_evaluated) {
    const Candidate& c = state.population[i];
    state.history.append(HistoryRecord{state.generation, c, candidate_keys(c, anchored), 0});
  }

  // elites survive unchanged
  std::vector<Candidate> next;
  std::unordered_set<std::string> next_fps;
  const int elite_count = std::min<int>(params.elitism, static_cast<int>(ranked.size()));
  for (int i = 0; i < elite_count; ++i) {
    next.push_back(*ranked[static_cast<std::size_t>(i)]);
    next_fps.insert(ranked[static_cast<std::size_t>(i)]->fingerprint);
  }

  auto add_offspring = [&](Candidate cand) {
    for (int retry = 0; retry < 8 && next_fps.count(cand.fingerprint); ++retry) {
      cand = make_offspring(heuristic_mutate(cand.config, rng.next_u64(), sampling),
                            Provenance::Mutation);
    }
    next_fps.insert(cand.fingerprint);
    cand.generation = state.generation + 1;
    next.push_back(std::move(cand));
  };

  const int slots = params.population_size - static_cast<int>(next.size());
  const int critic_slots = (critic && slots > 0) ? (slots + 1) / 2 : 0;
  const bool take_history_sample =
      slots - critic_slots >= 2 && !state.history.records().empty();

  if (critic_slots > 0) {
    std::vector<Candidate> proposals =
        critic_propose(ranked.empty() ? state.population
                                      : [&] {
                                          std::vector<Candidate> v;
                                          for (const auto* c : ranked) v.push_back(*c);
                                          return v;
                                        }(),
                       state.history, critic, critic_slots, state.generation, rng.next_u64(),
                       params, sampling);
    for (auto& p : proposals) add_offspring(std::move(p));
  }

  if (take_history_sample) {
    // re-seed one promising history entry into the population
    std::vector<const HistoryRecord*> top;
    for (const auto& r : state.history.records()) top.push_back(&r);
    std::sort(top.begin(), top.end(), [&](const HistoryRecord* x, const HistoryRecord* y) {
      return record_better(*x, *y, anchored);
    });
    if (top.size() > 10) top.resize(10);
    std::vector<double> weights(top.size());
    for (std::size_t i = 0; i < top.size(); ++i) weights[i] = 1.0 / (1.0 + static_cast<double>(i));
    const auto& chosen = *top[rng.pick_weighted(weights)];
    Candidate reseeded = chosen.candidate;
    reseeded.provenance = Provenance::Seeded;
    add_offspring(std::move(reseeded));
  }

  while (static_cast<int>(next.size()) < params.population_size) {
    if (ranked.empty()) {
      // nothing evaluated yet: mutate the raw population
      const auto& base = state.population[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(state.population.size()) - 1))];
      add_offspring(make_offspring(heuristic_mutate(base.config, rng.next_u64(), sampling),
                                   Provenance::Mutation));
      continue;
    }
    if (ranked.size() >= 2 && rng.bernoulli(0.5)) {
      const Candidate& pa = pick_parent(ranked, rng);
      const Candidate& pb = pick_parent(ranked, rng);
      add_offspring(make_offspring(crossover(pa.config, pb.config, rng.next_u64()),
                                   Provenance::Crossover));
    } else {
      const Candidate& parent = pick_parent(ranked, rng);
      add_offspring(make_offspring(heuristic_mutate(parent.config, rng.next_u64(), sampling),
                                   Provenance::Mutation));
    }
  }

  state.population = std::move(next);
  state.generation += 1;
}

bool converged(const SearchHistory& history, int patience, const FitnessPolicy& policy) {
  if (patience <= 0) {
    throw std::invalid_argument("converged: patience must be positive");
  }
  if (history.records().empty()) return false;
  const int last_gen = history.last_generation();
  if (last_gen + 1 <= patience) return false;  // not enough generations to judge

  FitnessPolicy anchored = policy;
  if (auto acc = history.best_accuracy()) anchored.reference_accuracy = *acc;

  const HistoryRecord* best = nullptr;
  int improved_at = 0;
  for (const auto& r : history.records()) {
    if (!best || record_better(r, *best, anchored)) {
      best = &r;
      improved_at = r.generation;
    }
  }
  return improved_at <= last_gen - patience;
}

std::optional<HistoryRecord> best_record(const SearchHistory& history,
                                         const FitnessPolicy& policy) {
  if (history.records().empty()) return std::nullopt;
  FitnessPolicy anchored = policy;
  if (auto acc = history.best_accuracy()) anchored.reference_accuracy = *acc;
  const HistoryRecord* best = nullptr;
  for (const auto& r : history.records()) {
    if (!best || record_better(r, *best, anchored)) best = &r;
  }
  HistoryRecord out = *best;
  out.keys = candidate_keys(out.candidate, anchored);
  return out;
}

namespace {

// Replays a previous run's evaluations so a resumed search retraces the
// original trajectory without re-spending the evaluator.
class ReplayEvaluator final : public Evaluator {
 public:
  ReplayEvaluator(Evaluator& inner, const SearchHistory* resume) : inner_(inner) {
    if (resume) {
      for (const auto& r : resume->records()) {
        std::optional<CandidateScores> scores;
        if (r.candidate.accuracy && r.candidate.rho) {
          scores = CandidateScores{*r.candidate.accuracy, *r.candidate.rho};
        }
        cache_.emplace(r.candidate.fingerprint, scores);
      }
    }
  }

  std::optional<CandidateScores> evaluate(const RenderConfig& config) override {
    const auto fp = config_fingerprint(config);
    if (auto it = cache_.find(fp); it != cache_.end()) return it->second;
    return inner_.evaluate(config);
  }

 private:
  Evaluator& inner_;
  std::unordered_map<std::string, std::optional<CandidateScores>> cache_;
};

}  // namespace

SearchResult run_search(std::uint64_t seed, const SearchParams& params,
                        const FitnessPolicy& policy, Evaluator& evaluator,
                        CriticClient* critic, const SamplingPolicy& sampling,
                        const SearchHistory* resume) {
  if (params.budget < params.population_size) {
    throw std::invalid_argument("run_search: budget must cover at least one population");
  }
  ReplayEvaluator replay(evaluator, resume);

  SearchState state;
  state.population = init_population(seed, params.population_size, sampling);

  for (;;) {
    step_generation(state, replay, policy, params, mix_seed(seed, 0x67656eULL + state.generation),
                    critic, sampling);
    if (state.history.evaluation_count() >= params.budget) break;
    if (converged(state.history, params.patience, policy)) break;
  }

  SearchResult result;
  result.history = std::move(state.history);
  if (auto best = best_record(result.history, policy)) {
    result.best = best->candidate;
  }
  return result;
}

}  // namespace glyphpress

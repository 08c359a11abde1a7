#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glyphpress/config.hpp"
#include "glyphpress/http.hpp"
#include "glyphpress/sampler.hpp"

namespace glyphpress {

enum class Provenance { Seeded, Mutation, Crossover, Critic };
std::string to_string(Provenance p);
std::optional<Provenance> provenance_from_string(const std::string& s);

struct Candidate {
  RenderConfig config;
  std::string fingerprint;
  std::optional<double> accuracy;  // in [0,1] once evaluated
  std::optional<double> rho;       // positive once evaluated
  int generation = 0;
  Provenance provenance = Provenance::Seeded;
  bool failed = false;  // evaluator failure; ranks at -inf, never aborts a run

  bool evaluated() const { return failed || (accuracy && rho); }
};

enum class FitnessMode { Constrained, Scalarized };

// How accuracy and compression combine into one ranking. Constrained mode:
// candidates within `accuracy_slack` of the reference accuracy (the best of
// the pool being ranked) compete on rho; the rest compete on accuracy and
// sort below the feasible band. Scalarized: accuracy + lambda * rho/normalizer.
struct FitnessPolicy {
  FitnessMode mode = FitnessMode::Constrained;
  double accuracy_slack = 0.02;
  double lambda = 0.0;
  double rho_normalizer = 8.0;
  double reference_accuracy = 1.0;  // anchor for constrained mode
};

struct FitnessKeys {
  double primary = -std::numeric_limits<double>::infinity();
  double secondary = -std::numeric_limits<double>::infinity();
  bool operator==(const FitnessKeys&) const = default;
};

FitnessKeys fitness(double accuracy, double rho, const FitnessPolicy& policy);
FitnessKeys failed_fitness();

// Total order: keys, then higher rho, then lexicographic fingerprint.
bool fitness_better(const FitnessKeys& a, double rho_a, const std::string& fp_a,
                    const FitnessKeys& b, double rho_b, const std::string& fp_b);

struct HistoryRecord {
  int generation = 0;
  Candidate candidate;
  FitnessKeys keys;  // computed with the generation's anchor at evaluation time
  long long seq = 0;  // logical timestamp: monotone record counter, not wall clock
};

struct HistoryEvent {
  int generation = 0;
  std::string event;
  std::string detail;
  long long seq = 0;
};

// Append-only evaluation log. Every distinct config evaluated appears exactly
// once; re-proposed configs are served from it instead of re-running the
// evaluator.
class SearchHistory {
 public:
  void append(HistoryRecord record);
  void append_event(int generation, std::string event, std::string detail);

  const std::vector<HistoryRecord>& records() const { return records_; }
  const std::vector<HistoryEvent>& events() const { return events_; }
  const HistoryRecord* find(const std::string& fingerprint) const;
  long long evaluation_count() const { return static_cast<long long>(records_.size()); }
  int last_generation() const;

  // Highest accuracy seen anywhere; the global anchor for final re-ranking.
  std::optional<double> best_accuracy() const;

  std::string to_jsonl() const;
  static SearchHistory from_jsonl(const std::string& jsonl);

 private:
  std::vector<HistoryRecord> records_;
  std::vector<HistoryEvent> events_;
  long long next_seq_ = 0;
};

struct CandidateScores {
  double accuracy = 0.0;
  double rho = 0.0;
};

// The expensive step: render the validation set under a config and measure
// accuracy + compression. nullopt = evaluation failure for that candidate.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual std::optional<CandidateScores> evaluate(const RenderConfig& config) = 0;
};

// LLM critic transport: request json in, raw reply out; nullopt on transport
// failure or timeout. The search falls back to heuristic offspring whenever
// the reply is missing or unusable.
class CriticClient {
 public:
  virtual ~CriticClient() = default;
  virtual std::optional<std::string> propose(const std::string& request_json) = 0;
};

class RemoteCriticClient final : public CriticClient {
 public:
  explicit RemoteCriticClient(Endpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::optional<std::string> propose(const std::string& request_json) override {
    return http_post_json(endpoint_, request_json);
  }

 private:
  Endpoint endpoint_;
};

struct SearchParams {
  int population_size = 8;
  int elitism = 2;
  int patience = 5;          // generations without improvement before stopping
  long long budget = 200;    // max distinct-config evaluations
  int critic_top_k = 8;      // history entries shown to the critic
};

// size >= 2 distinct-fingerprint seed candidates, deterministic in seed.
std::vector<Candidate> init_population(std::uint64_t seed, int size,
                                       const SamplingPolicy& sampling = {});

// Perturbs 1-3 fields by redrawing them from the sampling policy; the result
// always validates (bounded retries, then the input unchanged).
RenderConfig heuristic_mutate(const RenderConfig& config, std::uint64_t rng_seed,
                              const SamplingPolicy& sampling = {});

// Field-wise uniform mix, repaired to validate (line height re-tied to the
// chosen font size; page/margins and colors re-tied to one parent if needed).
RenderConfig crossover(const RenderConfig& a, const RenderConfig& b, std::uint64_t rng_seed);

// Builds the critic request from the evaluated population plus top history,
// parses the reply as config edits, validates and repairs each proposal.
// Failures are logged to history as critic_fallback events and backfilled
// with heuristic offspring, so this always returns `count` candidates.
std::vector<Candidate> critic_propose(const std::vector<Candidate>& population,
                                      SearchHistory& history, CriticClient* critic,
                                      int count, int generation, std::uint64_t rng_seed,
                                      const SearchParams& params,
                                      const SamplingPolicy& sampling);

struct SearchState {
  int generation = 0;
  std::vector<Candidate> population;
  SearchHistory history;
};

// One generation: evaluate pending candidates (through the history cache),
// rank, keep elites, refill from critic/heuristic offspring plus promising
// history entries. Evaluation stops early when the budget is exhausted.
void step_generation(SearchState& state, Evaluator& evaluator, const FitnessPolicy& policy,
                     const SearchParams& params, std::uint64_t rng_seed,
                     CriticClient* critic = nullptr, const SamplingPolicy& sampling = {});

// True iff the best fitness has not strictly improved during the last
// `patience` generations (under the global accuracy anchor).
bool converged(const SearchHistory& history, int patience, const FitnessPolicy& policy);

struct SearchResult {
  Candidate best;
  SearchHistory history;
};

// Loops step_generation until convergence or budget exhaustion and returns
// the history-global best. `resume` replays a previous run's evaluations as
// a cache: with deterministic dependencies the continuation is bit-identical
// to an uninterrupted run with the same seed.
SearchResult run_search(std::uint64_t seed, const SearchParams& params,
                        const FitnessPolicy& policy, Evaluator& evaluator,
                        CriticClient* critic = nullptr, const SamplingPolicy& sampling = {},
                        const SearchHistory* resume = nullptr);

// Re-ranks all evaluated records under the global anchor; used for final
// selection so reloading a persisted history reproduces the identical best.
std::optional<HistoryRecord> best_record(const SearchHistory& history,
                                         const FitnessPolicy& policy);

}  // namespace glyphpress

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace glyphpress {

inline constexpr std::string_view kThinkOpen = "<think>";
inline constexpr std::string_view kThinkClose = "</think>";

// Sequence-level (summed) log-probabilities of one response under the new,
// old, and optionally the reference policy.
struct LogProbRecord {
  double logp_new = 0.0;
  double logp_old = 0.0;
  std::optional<double> logp_ref;
};

// One sampled response group: rewards in [0,1] plus per-response log-prob
// records. Response texts are carried for auditing; the math ignores them.
struct RewardGroup {
  std::vector<std::string> responses;
  std::vector<double> rewards;
  std::vector<LogProbRecord> logprobs;
};

struct GrpoParams {
  double eps_low = 0.2;
  double eps_high = 0.28;
  double beta = 0.0;
};

// exp(logp_new - logp_old); positive for all finite inputs.
double importance_weight(const LogProbRecord& record);

// Group-standardized advantages using the population standard deviation.
// Returns nullopt for a degenerate group (zero reward variance, e.g. all-zero
// or all-one rewards), which callers discard. Throws if the group has fewer
// than two rewards.
std::optional<std::vector<double>> group_advantages(const std::vector<double>& rewards);

// min(w*A, clip(w, 1-eps_low, 1+eps_high)*A)
double clipped_term(double w, double advantage, const GrpoParams& params);

// Unbiased non-negative estimator exp(d) - d - 1 with d = logp_ref - logp_new.
double kl_estimate(double logp_new, double logp_ref);

// Mean over groups of (1/G) * sum_i [clipped_term_i - beta * kl_i]. Records
// without a reference log-prob contribute zero KL. Throws, naming the group,
// if any group is degenerate: filter with group_advantages first.
double grpo_objective(const std::vector<RewardGroup>& groups, const GrpoParams& params);

// Unit-cost edit distance over bytes.
long long levenshtein(std::string_view a, std::string_view b);

// 1 - d(pred, target) / max(|pred|, |target|); both empty scores 1.
double ocr_reward(std::string_view prediction, std::string_view target);

// 1 iff the response holds exactly one <think>...</think> segment, opened
// before closed, with nonempty answer text after the closing marker.
int format_reward(std::string_view response);

}  // namespace glyphpress

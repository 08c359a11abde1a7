#include "glyphpress/rl_math.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace glyphpress {

double importance_weight(const LogProbRecord& record) {
  return std::exp(record.logp_new - record.logp_old);
}

std::optional<std::vector<double>> group_advantages(const std::vector<double>& rewards) {
  if (rewards.size() < 2) {
    throw std::invalid_argument("group_advantages: group size must be at least 2");
  }
  const double n = static_cast<double>(rewards.size());
  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double var = 0.0;
  for (double u : rewards) var += (u - mean) * (u - mean);
  var /= n;
  if (var == 0.0) return std::nullopt;
  const double std_dev = std::sqrt(var);
  std::vector<double> advantages;
  advantages.reserve(rewards.size());
  for (double u : rewards) advantages.push_back((u - mean) / std_dev);
  return advantages;
}

double clipped_term(double w, double advantage, const GrpoParams& params) {
  const double clipped = std::clamp(w, 1.0 - params.eps_low, 1.0 + params.eps_high);
  return std::min(w * advantage, clipped * advantage);
}

double kl_estimate(double logp_new, double logp_ref) {
  const double d = logp_ref - logp_new;
  return std::exp(d) - d - 1.0;
}

double grpo_objective(const std::vector<RewardGroup>& groups, const GrpoParams& params) {
  if (groups.empty()) {
    throw std::invalid_argument("grpo_objective: no groups");
  }
  double sum_over_groups = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const RewardGroup& group = groups[g];
    if (group.rewards.size() != group.logprobs.size()) {
      throw std::invalid_argument("grpo_objective: rewards/logprobs size mismatch in group " +
                                  std::to_string(g));
    }
    const auto advantages = group_advantages(group.rewards);
    if (!advantages) {
      throw std::invalid_argument("grpo_objective: degenerate group " + std::to_string(g) +
                                  " (zero reward variance); discard it first");
    }
    double group_sum = 0.0;
    for (std::size_t i = 0; i < group.rewards.size(); ++i) {
      const double w = importance_weight(group.logprobs[i]);
      double term = clipped_term(w, (*advantages)[i], params);
      if (params.beta != 0.0 && group.logprobs[i].logp_ref) {
        term -= params.beta * kl_estimate(group.logprobs[i].logp_new,
                                          *group.logprobs[i].logp_ref);
      }
      group_sum += term;
    }
    sum_over_groups += group_sum / static_cast<double>(group.rewards.size());
  }
  return sum_over_groups / static_cast<double>(groups.size());
}

long long levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<long long> prev(b.size() + 1);
  std::vector<long long> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0LL);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<long long>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const long long subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double ocr_reward(std::string_view prediction, std::string_view target) {
  const std::size_t longest = std::max(prediction.size(), target.size());
  if (longest == 0) return 1.0;
  const double d = static_cast<double>(levenshtein(prediction, target));
  return 1.0 - d / static_cast<double>(longest);
}

namespace {

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string_view::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

bool has_nonspace(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") != std::string_view::npos;
}

}  // namespace

int format_reward(std::string_view response) {
  // "</think>" contains no "<think>", so plain substring counts are exact.
  const std::size_t close_count = count_occurrences(response, kThinkClose);
  if (close_count != 1) return 0;
  const std::size_t close_pos = response.find(kThinkClose);
  if (count_occurrences(response, kThinkOpen) != 1) return 0;
  const std::size_t open_pos = response.find(kThinkOpen);
  if (open_pos > close_pos) return 0;
  return has_nonspace(response.substr(close_pos + kThinkClose.size())) ? 1 : 0;
}

}  // namespace glyphpress

#include "clbp/fusion.hpp"

#include <algorithm>
#include <limits>

namespace clbp {

std::string to_string(FusionRule r) {
  switch (r) {
    case FusionRule::SUM: return "sum";
    case FusionRule::MEDIAN: return "median";
    case FusionRule::MV: return "mv";
    case FusionRule::FVF: return "fvf";
  }
  return "?";
}

std::optional<FusionRule> fusion_from_string(const std::string& s) {
  if (s == "sum" || s == "SUM") return FusionRule::SUM;
  if (s == "median" || s == "MEDIAN") return FusionRule::MEDIAN;
  if (s == "mv" || s == "MV") return FusionRule::MV;
  if (s == "fvf" || s == "FVF") return FusionRule::FVF;
  return std::nullopt;
}

ChannelScores normalize_scores(const DistanceTable& table) {
  if (table.entries.empty())
    throw Error(ErrorCode::EmptyInput, "normalize_scores: empty table");
  ChannelScores out;
  for (const auto& [channel, per_subject] : table.entries) {
    if (per_subject.empty())
      throw Error(ErrorCode::EmptyInput, "normalize_scores: empty channel");
    double lo = per_subject.begin()->second, hi = lo;
    for (const auto& [_, d] : per_subject) {
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    auto& dst = out.scores[channel];
    for (const auto& [subject, d] : per_subject)
      dst[subject] = hi > lo ? (d - lo) / (hi - lo) : 0.0;
  }
  return out;
}

namespace {

// argmin with lexicographic tie-break (map iteration is ordered)
std::string argmin(const std::map<std::string, double>& scores) {
  auto best = scores.begin();
  for (auto it = std::next(scores.begin()); it != scores.end(); ++it)
    if (it->second < best->second) best = it;
  return best->first;
}

std::map<std::string, double> per_subject_aggregate(
    const ChannelScores& scores, bool median) {
  if (scores.scores.empty())
    throw Error(ErrorCode::EmptyInput, "fusion: no channels");
  std::map<std::string, std::vector<double>> collected;
  for (const auto& [channel, per_subject] : scores.scores)
    for (const auto& [subject, s] : per_subject)
      collected[subject].push_back(s);
  std::map<std::string, double> out;
  for (auto& [subject, vals] : collected) {
    if (median) {
      std::sort(vals.begin(), vals.end());
      size_t n = vals.size();
      out[subject] = n % 2 ? vals[n / 2]
                           : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
    } else {
      double sum = 0.0;
      for (double v : vals) sum += v;
      out[subject] = sum;
    }
  }
  return out;
}

}  // namespace

std::string sum_rule(const ChannelScores& scores) {
  return argmin(per_subject_aggregate(scores, false));
}

std::string median_rule(const ChannelScores& scores) {
  return argmin(per_subject_aggregate(scores, true));
}

std::vector<std::string> channel_decisions(const ChannelScores& scores) {
  std::vector<std::string> out;
  for (const auto& [channel, per_subject] : scores.scores)
    out.push_back(argmin(per_subject));
  return out;
}

std::string majority_vote(const std::vector<std::string>& decisions,
                          const ChannelScores& fallback) {
  if (decisions.empty())
    throw Error(ErrorCode::EmptyInput, "majority_vote: no decisions");
  std::map<std::string, int> votes;
  for (const std::string& d : decisions) votes[d]++;
  int best = 0;
  for (const auto& [_, n] : votes) best = std::max(best, n);
  std::vector<std::string> winners;
  for (const auto& [id, n] : votes)
    if (n == best) winners.push_back(id);
  if (winners.size() == 1) return winners.front();
  // tie: fall back to the sum rule restricted to the tied subjects
  std::map<std::string, double> sums = per_subject_aggregate(fallback, false);
  std::string best_id;
  double best_score = 0.0;
  for (const std::string& id : winners) {
    auto it = sums.find(id);
    double s = it != sums.end() ? it->second
                                : std::numeric_limits<double>::infinity();
    if (best_id.empty() || s < best_score) {
      best_id = id;
      best_score = s;
    }
  }
  return best_id;
}

}  // namespace clbp

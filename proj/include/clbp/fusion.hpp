#pragma once

#include "clbp/gallery.hpp"

namespace clbp {

enum class FusionRule { SUM, MEDIAN, MV, FVF };

std::string to_string(FusionRule r);
std::optional<FusionRule> fusion_from_string(const std::string& s);

// Per-channel min-max normalized distances: min -> 0, max -> 1, a
// degenerate all-equal channel maps to all zeros.
struct ChannelScores {
  std::map<Channel, std::map<std::string, double>> scores;
};

ChannelScores normalize_scores(const DistanceTable& table);

std::string sum_rule(const ChannelScores& scores);
std::string median_rule(const ChannelScores& scores);
std::string majority_vote(const std::vector<std::string>& decisions,
                          const ChannelScores& fallback);

// Rank-1 decision per channel (argmin of normalized score).
std::vector<std::string> channel_decisions(const ChannelScores& scores);

}  // namespace clbp

#pragma once

#include <span>
#include <string>
#include <vector>

#include "clbp/features.hpp"

namespace clbp {

enum class Metric { KLD, L1, L2, XCORR };

std::string to_string(Metric m);
std::optional<Metric> metric_from_string(const std::string& s);

struct RankedEntry {
  std::string subject_id;
  double score = 0.0;
};

struct RankedResult {
  std::vector<RankedEntry> ranking;  // ascending score
  std::string decision;              // subject at rank 1
};

// Symmetrized Kullback-Leibler distance over aligned per-region PDF
// blocks. The reference side of each directed term is floored at eps and
// renormalized per block; blocks are combined by weighted sum.
double kld(std::span<const double> p, std::span<const double> q,
           int block_size, std::span<const double> weights = {});

double metric_distance(std::span<const double> p, std::span<const double> q,
                       Metric metric, int block_size = 0);

double signature_distance(const Signature& a, const Signature& b,
                          Metric metric);
double signature_distance(const FusedSignature& a, const FusedSignature& b,
                          Metric metric);

}  // namespace clbp

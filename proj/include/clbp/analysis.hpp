#pragma once

#include "clbp/fusion.hpp"

namespace clbp {

struct ChannelDiscrimination {
  double avg_within = 0.0;
  double avg_between = 0.0;
  double theta_c = 0.0;
};

struct LabeledSignature {
  std::string label;
  Signature signature;
};

double class_discrimination_ratio(double avg_within, double avg_between);

// Mean pairwise within-class vs between-class distance, and their ratio.
ChannelDiscrimination class_discrimination(
    const std::vector<LabeledSignature>& signatures, Metric metric);

// Normalized mutual information 100 * 2 I(A;B) / (H(A) + H(B)) from the
// 256x256 joint histogram of 8-bit quantized planes.
double channel_mutual_information(const Plane& a, const Plane& b);

struct RocCurve {
  std::vector<double> thresholds;  // ascending
  std::vector<double> far;
  std::vector<double> frr;
  double eer = 0.0;
};

// Threshold sweep over all distinct scores; scores are distances, so
// genuine scores are expected smaller than impostor ones.
RocCurve far_frr(const std::vector<double>& genuine,
                 const std::vector<double>& impostor);

struct ExperimentConfig {
  PipelineConfig pipeline;
  std::vector<int> train_counts = {1, 2, 3, 4, 5};
  std::vector<int> bin_counts = {256};  // coarsened from pipeline.bins
  std::vector<FusionRule> rules = {FusionRule::FVF};
  int trials = 5;
  uint64_t seed = 0;
};

struct EvalRow {
  int train_count = 0;
  FusionRule rule = FusionRule::FVF;
  int bins = 256;
  double rate = 0.0;  // mean rank-1 recognition rate over trials
};

struct EvalReport {
  ExperimentConfig config;
  std::vector<EvalRow> rows;
};

using LabeledImageSet =
    std::vector<std::pair<std::string, std::vector<PlanarImage>>>;

// Seeded random train/test splits over precomputed signatures; reports
// the mean rank-1 rate per (train count, fusion rule, bin count) cell.
EvalReport run_identification_experiment(const LabeledImageSet& dataset,
                                         const ExperimentConfig& config);

// Same experiment over signatures that were already extracted.
EvalReport run_identification_experiment(
    const std::vector<std::pair<std::string, std::vector<std::vector<Signature>>>>&
        signatures,
    const ExperimentConfig& config);

}  // namespace clbp

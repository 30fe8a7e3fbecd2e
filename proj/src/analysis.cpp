#include "clbp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace clbp {

double class_discrimination_ratio(double avg_within, double avg_between) {
  if (avg_within <= 0.0)
    throw Error(ErrorCode::DegenerateInput,
                "class_discrimination: zero within-class distance");
  return avg_between / avg_within;
}

ChannelDiscrimination class_discrimination(
    const std::vector<LabeledSignature>& signatures, Metric metric) {
  double within_sum = 0.0, between_sum = 0.0;
  size_t within_n = 0, between_n = 0;
  for (size_t i = 0; i < signatures.size(); ++i)
    for (size_t j = i + 1; j < signatures.size(); ++j) {
      double d = signature_distance(signatures[i].signature,
                                    signatures[j].signature, metric);
      if (signatures[i].label == signatures[j].label) {
        within_sum += d;
        ++within_n;
      } else {
        between_sum += d;
        ++between_n;
      }
    }
  if (within_n == 0 || between_n == 0)
    throw Error(ErrorCode::DegenerateInput,
                "class_discrimination: need both within- and between-class "
                "pairs");
  ChannelDiscrimination out;
  out.avg_within = within_sum / static_cast<double>(within_n);
  out.avg_between = between_sum / static_cast<double>(between_n);
  out.theta_c = class_discrimination_ratio(out.avg_within, out.avg_between);
  return out;
}

double channel_mutual_information(const Plane& a, const Plane& b) {
  if (a.width != b.width || a.height != b.height)
    throw Error(ErrorCode::SizeMismatch,
                "channel_mutual_information: dimension mismatch");
  if (a.empty())
    throw Error(ErrorCode::EmptyInput, "channel_mutual_information: empty");
  std::vector<double> joint(256 * 256, 0.0);
  std::vector<double> pa(256, 0.0), pb(256, 0.0);
  const double n = static_cast<double>(a.size());
  bool identical = true;
  for (size_t i = 0; i < a.size(); ++i) {
    int qa = quantize8(a.data[i]), qb = quantize8(b.data[i]);
    identical = identical && qa == qb;
    joint[static_cast<size_t>(qa) * 256 + qb] += 1.0;
    pa[qa] += 1.0;
    pb[qb] += 1.0;
  }
  if (identical) return 100.0;
  double ha = 0.0, hb = 0.0, mi = 0.0;
  for (int i = 0; i < 256; ++i) {
    if (pa[i] > 0.0) ha -= pa[i] / n * std::log(pa[i] / n);
    if (pb[i] > 0.0) hb -= pb[i] / n * std::log(pb[i] / n);
  }
  for (int i = 0; i < 256; ++i)
    for (int j = 0; j < 256; ++j) {
      double pij = joint[static_cast<size_t>(i) * 256 + j];
      if (pij > 0.0)
        mi += pij / n * std::log(pij * n / (pa[i] * pb[j]));
    }
  if (ha + hb == 0.0) {
    // both planes constant: identical -> fully informative, else none
    return a.data == b.data ? 100.0 : 0.0;
  }
  return 100.0 * 2.0 * mi / (ha + hb);
}

RocCurve far_frr(const std::vector<double>& genuine,
                 const std::vector<double>& impostor) {
  if (genuine.empty() || impostor.empty())
    throw Error(ErrorCode::EmptyInput, "far_frr: empty score list");
  RocCurve curve;
  curve.thresholds.reserve(genuine.size() + impostor.size());
  curve.thresholds.insert(curve.thresholds.end(), genuine.begin(),
                          genuine.end());
  curve.thresholds.insert(curve.thresholds.end(), impostor.begin(),
                          impostor.end());
  std::sort(curve.thresholds.begin(), curve.thresholds.end());
  curve.thresholds.erase(
      std::unique(curve.thresholds.begin(), curve.thresholds.end()),
      curve.thresholds.end());
  const double ng = static_cast<double>(genuine.size());
  const double ni = static_cast<double>(impostor.size());
  for (double t : curve.thresholds) {
    size_t fa = 0, fr = 0;
    for (double s : impostor)
      if (s <= t) ++fa;
    for (double s : genuine)
      if (s > t) ++fr;
    curve.far.push_back(static_cast<double>(fa) / ni);
    curve.frr.push_back(static_cast<double>(fr) / ng);
  }
  // crossing of the (non-decreasing) FAR and (non-increasing) FRR steps
  size_t cross = curve.thresholds.size();
  for (size_t i = 0; i < curve.thresholds.size(); ++i)
    if (curve.far[i] >= curve.frr[i]) {
      cross = i;
      break;
    }
  if (cross == curve.thresholds.size()) {
    curve.eer = 0.5 * (curve.far.back() + curve.frr.back());
  } else if (curve.far[cross] == curve.frr[cross]) {
    curve.eer = curve.far[cross];
  } else if (cross == 0) {
    curve.eer = 0.5 * (curve.far[0] + curve.frr[0]);
  } else {
    double f0 = curve.far[cross - 1] - curve.frr[cross - 1];
    double f1 = curve.far[cross] - curve.frr[cross];
    double alpha = -f0 / (f1 - f0);
    double mid0 = 0.5 * (curve.far[cross - 1] + curve.frr[cross - 1]);
    double mid1 = 0.5 * (curve.far[cross] + curve.frr[cross]);
    curve.eer = (1.0 - alpha) * mid0 + alpha * mid1;
  }
  return curve;
}

namespace {

uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Fisher-Yates with an explicit generator so results are stable across
// standard library implementations
void shuffle_indices(std::vector<size_t>& idx, uint64_t& state) {
  for (size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[splitmix64(state) % i]);
}

std::string identify(const std::vector<Signature>& probe_sigs,
                     const Gallery& gallery, Metric metric, FusionRule rule) {
  if (rule == FusionRule::FVF)
    return nearest_subject_fvf(fuse_sample(probe_sigs), gallery, metric, 1)
        .decision;
  ChannelScores scores =
      normalize_scores(distance_table(probe_sigs, gallery, metric));
  switch (rule) {
    case FusionRule::SUM: return sum_rule(scores);
    case FusionRule::MEDIAN: return median_rule(scores);
    case FusionRule::MV:
      return majority_vote(channel_decisions(scores), scores);
    default: return sum_rule(scores);
  }
}

}  // namespace

EvalReport run_identification_experiment(
    const std::vector<std::pair<std::string, std::vector<std::vector<Signature>>>>&
        signatures,
    const ExperimentConfig& config) {
  if (signatures.empty())
    throw Error(ErrorCode::EmptyInput, "experiment: empty dataset");
  int max_train =
      *std::max_element(config.train_counts.begin(), config.train_counts.end());
  for (const auto& [subject, samples] : signatures)
    if (static_cast<int>(samples.size()) <= max_train)
      throw Error(ErrorCode::BadArgument,
                  "experiment: subject " + subject + " has only " +
                      std::to_string(samples.size()) +
                      " samples, need > " + std::to_string(max_train));

  // coarsened signature sets, one per requested bin count
  std::map<int,
           std::vector<std::pair<std::string, std::vector<std::vector<Signature>>>>>
      by_bins;
  for (int bins : config.bin_counts) {
    if (bins == config.pipeline.bins) {
      by_bins[bins] = signatures;
      continue;
    }
    auto& coarse = by_bins[bins];
    for (const auto& [subject, samples] : signatures) {
      std::vector<std::vector<Signature>> cs;
      for (const auto& sample : samples) {
        std::vector<Signature> sigs;
        for (const Signature& s : sample)
          sigs.push_back(coarsen_signature(s, bins));
        cs.push_back(std::move(sigs));
      }
      coarse.emplace_back(subject, std::move(cs));
    }
  }

  EvalReport report;
  report.config = config;
  for (int train : config.train_counts)
    for (FusionRule rule : config.rules)
      for (int bins : config.bin_counts) {
        const auto& data = by_bins[bins];
        uint64_t state = config.seed * 0x100000001b3ull +
                         static_cast<uint64_t>(train) * 131 +
                         static_cast<uint64_t>(bins);
        double rate_sum = 0.0;
        for (int trial = 0; trial < config.trials; ++trial) {
          Gallery gallery;
          gallery.config = config.pipeline;
          gallery.config.bins = bins;
          std::vector<std::pair<std::string, const std::vector<Signature>*>>
              probes;
          for (const auto& [subject, samples] : data) {
            std::vector<size_t> idx(samples.size());
            std::iota(idx.begin(), idx.end(), size_t{0});
            shuffle_indices(idx, state);
            auto& enrolled = gallery.subjects[subject];
            for (int k = 0; k < train; ++k)
              enrolled.push_back(samples[idx[k]]);
            for (size_t k = train; k < idx.size(); ++k)
              probes.emplace_back(subject, &samples[idx[k]]);
          }
          size_t correct = 0;
          for (const auto& [truth, sigs] : probes)
            if (identify(*sigs, gallery, config.pipeline.metric, rule) ==
                truth)
              ++correct;
          rate_sum += probes.empty()
                          ? 1.0
                          : static_cast<double>(correct) / probes.size();
        }
        report.rows.push_back(
            {train, rule, bins, rate_sum / config.trials});
      }
  return report;
}

EvalReport run_identification_experiment(const LabeledImageSet& dataset,
                                         const ExperimentConfig& config) {
  std::vector<std::pair<std::string, std::vector<std::vector<Signature>>>>
      signatures;
  for (const auto& [subject, images] : dataset) {
    std::vector<std::vector<Signature>> samples;
    for (const PlanarImage& img : images)
      samples.push_back(extract_signatures(img, config.pipeline));
    signatures.emplace_back(subject, std::move(samples));
  }
  return run_identification_experiment(signatures, config);
}

}  // namespace clbp

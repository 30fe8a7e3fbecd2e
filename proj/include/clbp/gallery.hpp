#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "clbp/illumination.hpp"
#include "clbp/matching.hpp"

namespace clbp {

// Pipeline settings shared by enrollment and identification. Stored in
// the gallery header so probes are extracted the same way.
struct PipelineConfig {
  std::vector<Channel> channels = {Channel::H, Channel::S, Channel::I};
  int grid_rows = 4;
  int grid_cols = 4;
  int bins = 256;
  Metric metric = Metric::KLD;
  ZetaMethod enhancement = ZetaMethod::NORM_RATIO;
  Colorspace enhance_space = Colorspace::HSI;
  std::string neighbor_order = "tl-cw";  // frozen LBP bit order tag

  bool compatible_with(const PipelineConfig& other) const;
};

struct Gallery {
  static constexpr int kFormatVersion = 1;
  PipelineConfig config;
  // subject -> samples; each sample holds one Signature per configured
  // channel, in channel order
  std::map<std::string, std::vector<std::vector<Signature>>> subjects;
};

struct DistanceTable {
  std::string probe_id;
  Metric metric = Metric::KLD;
  // channel -> subject -> distance (min over enrolled samples)
  std::map<Channel, std::map<std::string, double>> entries;
};

struct DatasetIndex {
  std::filesystem::path root;
  std::vector<std::pair<std::string, std::vector<std::filesystem::path>>>
      subjects;  // lexicographic subject order, lexicographic paths
  int skipped = 0;
};

// enhance -> segment -> per-channel LBP signatures
std::vector<Signature> extract_signatures(const PlanarImage& rgb,
                                          const PipelineConfig& cfg);

// Distance from a probe's per-channel signatures to every enrolled
// subject, per channel; subject score is the min over its samples.
DistanceTable distance_table(const std::vector<Signature>& probe,
                             const Gallery& gallery, Metric metric);

RankedResult nearest_subject(const std::vector<Signature>& probe,
                             const Gallery& gallery, Metric metric,
                             size_t top_k);
RankedResult nearest_subject_fvf(const FusedSignature& probe,
                                 const Gallery& gallery, Metric metric,
                                 size_t top_k);

FusedSignature fuse_sample(const std::vector<Signature>& sigs);

// Scan root (one subdirectory per subject); undecodable files are
// skipped and counted.
DatasetIndex ingest(const std::filesystem::path& root);

Gallery enroll(const DatasetIndex& index, const PipelineConfig& cfg);
Gallery enroll_images(
    const std::vector<std::pair<std::string, std::vector<PlanarImage>>>& data,
    const PipelineConfig& cfg);

void save_gallery(const Gallery& g, const std::filesystem::path& path);
Gallery load_gallery(const std::filesystem::path& path);

}  // namespace clbp

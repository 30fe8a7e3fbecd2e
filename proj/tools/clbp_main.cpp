// Command-line front end: enhancement, face detection, enrollment,
// identification, evaluation and channel analysis.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "clbp/analysis.hpp"
#include "clbp/imageio.hpp"

using namespace clbp;
namespace fs = std::filesystem;

namespace {

struct PipelineOpts {
  std::string channels = "H,S,I";
  int grid_rows = 4;
  int grid_cols = 4;
  int bins = 256;
  std::string metric = "KLD";
  std::string method = "norm";
  std::string space = "hsi";
};

void add_pipeline_options(CLI::App* cmd, PipelineOpts& o) {
  cmd->add_option("--channels", o.channels,
                  "Comma-separated channels (H,S,I,Y,Cb,Cr,GRAY)");
  cmd->add_option("--grid-rows", o.grid_rows, "Histogram grid rows")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid-cols", o.grid_cols, "Histogram grid columns")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--bins", o.bins, "Histogram bins per region")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--metric", o.metric, "Distance metric (kld|l1|l2|xcorr)");
  cmd->add_option("--method", o.method,
                  "Correction coefficient estimator (svd|norm)")
      ->check(CLI::IsMember({"svd", "norm"}));
  cmd->add_option("--space", o.space,
                  "Colorspace the enhancement runs in (rgb|hsi|ycbcr|gray)")
      ->check(CLI::IsMember({"rgb", "hsi", "ycbcr", "gray"}));
}

ZetaMethod parse_method(const std::string& s) {
  return s == "svd" ? ZetaMethod::SVD_RATIO : ZetaMethod::NORM_RATIO;
}

Colorspace parse_space(const std::string& s) {
  if (s == "rgb") return Colorspace::RGB;
  if (s == "hsi") return Colorspace::HSI;
  if (s == "ycbcr") return Colorspace::YCbCr;
  return Colorspace::GRAY;
}

PipelineConfig make_config(const PipelineOpts& o) {
  PipelineConfig cfg;
  cfg.channels.clear();
  std::stringstream ss(o.channels);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto ch = channel_from_string(tok);
    if (!ch)
      throw Error(ErrorCode::BadArgument, "unknown channel '" + tok + "'");
    cfg.channels.push_back(*ch);
  }
  if (cfg.channels.empty())
    throw Error(ErrorCode::BadArgument, "no channels selected");
  cfg.grid_rows = o.grid_rows;
  cfg.grid_cols = o.grid_cols;
  cfg.bins = o.bins;
  auto m = metric_from_string(o.metric);
  if (!m)
    throw Error(ErrorCode::BadArgument, "unknown metric '" + o.metric + "'");
  cfg.metric = *m;
  cfg.enhancement = parse_method(o.method);
  cfg.enhance_space = parse_space(o.space);
  return cfg;
}

// For non-RGB spaces the enhanced result has no faithful RGB rendering
// (the inverse transforms are out of scope), so write the luminance-like
// plane as grayscale instead.
void write_enhanced(const PlanarImage& img, const fs::path& out) {
  if (img.colorspace == Colorspace::RGB || img.colorspace == Colorspace::GRAY) {
    write_image(img, out);
    return;
  }
  PlanarImage gray(img.width, img.height, Colorspace::GRAY);
  gray.planes[0] =
      img.colorspace == Colorspace::HSI ? img.planes[2] : img.planes[0];
  write_image(gray, out);
}

std::map<std::string, double> aggregate_scores(const ChannelScores& scores,
                                               bool median) {
  std::map<std::string, std::vector<double>> per_subject;
  for (const auto& [ch, row] : scores.scores)
    for (const auto& [subject, s] : row) per_subject[subject].push_back(s);
  std::map<std::string, double> out;
  for (auto& [subject, vals] : per_subject) {
    if (median) {
      std::sort(vals.begin(), vals.end());
      size_t n = vals.size();
      out[subject] =
          n % 2 ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
    } else {
      double sum = 0.0;
      for (double v : vals) sum += v;
      out[subject] = sum;
    }
  }
  return out;
}

void print_ranking(const std::map<std::string, double>& agg, size_t top_k) {
  std::vector<std::pair<std::string, double>> rows(agg.begin(), agg.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) {
                     return a.second < b.second;
                   });
  size_t n = std::min(top_k, rows.size());
  for (size_t i = 0; i < n; ++i)
    std::printf("%4zu  %-24s %.6f\n", i + 1, rows[i].first.c_str(),
                rows[i].second);
}

LabeledImageSet load_dataset(const fs::path& root, int skipped_warn = 1) {
  DatasetIndex index = ingest(root);
  if (index.skipped > 0 && skipped_warn)
    std::fprintf(stderr, "warning: skipped %d undecodable file(s)\n",
                 index.skipped);
  LabeledImageSet out;
  for (const auto& [subject, files] : index.subjects) {
    std::vector<PlanarImage> images;
    for (const fs::path& f : files) images.push_back(read_image(f));
    out.emplace_back(subject, std::move(images));
  }
  return out;
}

int cmd_enhance(const std::string& in, const std::string& out,
                const PipelineOpts& opts) {
  PlanarImage img = read_image(in);
  PlanarImage enhanced =
      enhance_image(img, parse_space(opts.space), parse_method(opts.method));
  write_enhanced(enhanced, out);
  std::printf("enhanced %s -> %s (space=%s method=%s)\n", in.c_str(),
              out.c_str(), opts.space.c_str(), opts.method.c_str());
  return 0;
}

int cmd_detect(const std::string& in, const std::string& crop_out,
               const std::string& mask_out) {
  PlanarImage img = read_image(in);
  FaceRegion face = segment_face(img);
  std::printf("bbox x=%d y=%d w=%d h=%d skin_pixels=%zu\n", face.bbox.x,
              face.bbox.y, face.bbox.w, face.bbox.h, face.mask.count());
  if (!crop_out.empty()) {
    // segmentation ran in HSI; re-crop the original RGB for output
    PlanarImage crop(face.bbox.w, face.bbox.h, Colorspace::RGB);
    for (int p = 0; p < 3; ++p)
      for (int y = 0; y < face.bbox.h; ++y)
        for (int x = 0; x < face.bbox.w; ++x)
          crop.planes[p].at(x, y) =
              img.planes[p].at(face.bbox.x + x, face.bbox.y + y);
    write_image(crop, crop_out);
  }
  if (!mask_out.empty()) {
    PlanarImage m(face.mask.width, face.mask.height, Colorspace::GRAY);
    for (int y = 0; y < m.height; ++y)
      for (int x = 0; x < m.width; ++x)
        m.planes[0].at(x, y) = face.mask.at(x, y) ? 255.0 : 0.0;
    write_image(m, mask_out);
  }
  return 0;
}

int cmd_enroll(const std::string& root, const std::string& gallery_path,
               const PipelineOpts& opts) {
  PipelineConfig cfg = make_config(opts);
  Gallery g = enroll(ingest(root), cfg);
  save_gallery(g, gallery_path);
  size_t samples = 0;
  for (const auto& [subject, s] : g.subjects) samples += s.size();
  std::printf("enrolled %zu subject(s), %zu sample(s) -> %s\n",
              g.subjects.size(), samples, gallery_path.c_str());
  return 0;
}

int cmd_identify(const std::string& image, const std::string& gallery_path,
                 const std::string& fusion, size_t top_k) {
  Gallery g = load_gallery(gallery_path);
  auto rule = fusion_from_string(fusion);
  if (!rule)
    throw Error(ErrorCode::BadArgument, "unknown fusion rule '" + fusion + "'");
  std::vector<Signature> probe =
      extract_signatures(read_image(image), g.config);

  if (*rule == FusionRule::FVF) {
    RankedResult res =
        nearest_subject_fvf(fuse_sample(probe), g, g.config.metric, top_k);
    std::printf("decision: %s\n", res.decision.c_str());
    size_t n = std::min(top_k, res.ranking.size());
    for (size_t i = 0; i < n; ++i)
      std::printf("%4zu  %-24s %.6f\n", i + 1,
                  res.ranking[i].subject_id.c_str(), res.ranking[i].score);
    return 0;
  }

  ChannelScores scores =
      normalize_scores(distance_table(probe, g, g.config.metric));
  std::string decision;
  switch (*rule) {
    case FusionRule::SUM: decision = sum_rule(scores); break;
    case FusionRule::MEDIAN: decision = median_rule(scores); break;
    default:
      decision = majority_vote(channel_decisions(scores), scores);
      break;
  }
  std::printf("decision: %s\n", decision.c_str());
  if (*rule == FusionRule::MV) {
    std::vector<std::string> votes = channel_decisions(scores);
    size_t i = 0;
    for (const auto& [ch, row] : scores.scores)
      std::printf("  vote %-4s -> %s\n", to_string(ch).c_str(),
                  votes[i++].c_str());
  }
  if (top_k > 0)
    print_ranking(aggregate_scores(scores, *rule == FusionRule::MEDIAN),
                  top_k);
  return 0;
}

int cmd_evaluate(const std::string& root, const PipelineOpts& opts,
                 std::vector<int> train_counts, std::vector<int> bin_counts,
                 std::vector<std::string> rule_names, int trials,
                 uint64_t seed, const std::string& out_path) {
  ExperimentConfig cfg;
  cfg.pipeline = make_config(opts);
  if (!train_counts.empty()) cfg.train_counts = train_counts;
  if (!bin_counts.empty()) cfg.bin_counts = bin_counts;
  if (!rule_names.empty()) {
    cfg.rules.clear();
    for (const std::string& r : rule_names) {
      auto rule = fusion_from_string(r);
      if (!rule)
        throw Error(ErrorCode::BadArgument, "unknown fusion rule '" + r + "'");
      cfg.rules.push_back(*rule);
    }
  }
  cfg.trials = trials;
  cfg.seed = seed;
  EvalReport rep = run_identification_experiment(load_dataset(root), cfg);

  std::printf("%-6s %-7s %-5s %s\n", "train", "rule", "bins", "rank1_rate");
  for (const EvalRow& row : rep.rows)
    std::printf("%-6d %-7s %-5d %.4f\n", row.train_count,
                to_string(row.rule).c_str(), row.bins, row.rate);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out)
      throw Error(ErrorCode::IoError, "cannot write " + out_path);
    out << "train\trule\tbins\trank1_rate\n";
    for (const EvalRow& row : rep.rows) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", row.rate);
      out << row.train_count << "\t" << to_string(row.rule) << "\t"
          << row.bins << "\t" << buf << "\n";
    }
  }
  return 0;
}

int cmd_analyze(const std::string& root, const PipelineOpts& opts,
                const std::string& report, const std::string& out_path) {
  PipelineConfig cfg = make_config(opts);
  LabeledImageSet data = load_dataset(root);

  if (report == "theta") {
    std::map<Channel, std::vector<LabeledSignature>> by_channel;
    for (const auto& [subject, images] : data)
      for (const PlanarImage& img : images) {
        std::vector<Signature> sigs = extract_signatures(img, cfg);
        for (const Signature& s : sigs)
          by_channel[s.channel].push_back({subject, s});
      }
    std::printf("%-6s %-12s %-12s %s\n", "chan", "avg_within", "avg_between",
                "theta");
    std::string tsv = "channel\tavg_within\tavg_between\ttheta\n";
    for (const auto& [ch, sigs] : by_channel) {
      ChannelDiscrimination d = class_discrimination(sigs, cfg.metric);
      std::printf("%-6s %-12.6f %-12.6f %.4f\n", to_string(ch).c_str(),
                  d.avg_within, d.avg_between, d.theta_c);
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s\t%.17g\t%.17g\t%.17g\n",
                    to_string(ch).c_str(), d.avg_within, d.avg_between,
                    d.theta_c);
      tsv += buf;
    }
    if (!out_path.empty()) std::ofstream(out_path) << tsv;
    return 0;
  }

  if (report == "mi") {
    // average pairwise normalized mutual information between channel
    // planes of each segmented face
    std::map<std::pair<Channel, Channel>, std::pair<double, int>> acc;
    for (const auto& [subject, images] : data)
      for (const PlanarImage& img : images) {
        FaceRegion face = segment_face(img);
        std::map<Channel, Plane> planes;
        for (Channel ch : cfg.channels)
          planes[ch] = channel_plane(face.crop, ch);
        for (auto a = planes.begin(); a != planes.end(); ++a)
          for (auto b = std::next(a); b != planes.end(); ++b) {
            Plane pa = a->second, pb = b->second;
            // H and S live in [0,1]; spread onto the 8-bit lattice
            auto spread = [](Plane& p, Channel ch) {
              if (ch == Channel::H || ch == Channel::S)
                for (double& v : p.data) v *= 255.0;
            };
            spread(pa, a->first);
            spread(pb, b->first);
            auto& cell = acc[{a->first, b->first}];
            cell.first += channel_mutual_information(pa, pb);
            cell.second += 1;
          }
      }
    std::printf("%-6s %-6s %s\n", "chanA", "chanB", "nmi");
    std::string tsv = "channel_a\tchannel_b\tnmi\n";
    for (const auto& [key, cell] : acc) {
      double nmi = cell.first / cell.second;
      std::printf("%-6s %-6s %.4f\n", to_string(key.first).c_str(),
                  to_string(key.second).c_str(), nmi);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s\t%s\t%.17g\n",
                    to_string(key.first).c_str(),
                    to_string(key.second).c_str(), nmi);
      tsv += buf;
    }
    if (!out_path.empty()) std::ofstream(out_path) << tsv;
    return 0;
  }

  if (report == "roc") {
    struct Item {
      std::string subject;
      std::vector<Signature> sigs;
    };
    std::vector<Item> items;
    for (const auto& [subject, images] : data)
      for (const PlanarImage& img : images)
        items.push_back({subject, extract_signatures(img, cfg)});
    std::vector<double> genuine, impostor;
    for (size_t i = 0; i < items.size(); ++i)
      for (size_t j = i + 1; j < items.size(); ++j) {
        double d = 0.0;
        for (size_t c = 0; c < items[i].sigs.size(); ++c)
          d += signature_distance(items[i].sigs[c], items[j].sigs[c],
                                  cfg.metric);
        (items[i].subject == items[j].subject ? genuine : impostor)
            .push_back(d);
      }
    RocCurve curve = far_frr(genuine, impostor);
    std::printf("genuine=%zu impostor=%zu eer=%.4f\n", genuine.size(),
                impostor.size(), curve.eer);
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      out << "threshold\tfar\tfrr\n";
      for (size_t i = 0; i < curve.thresholds.size(); ++i) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.17g\t%.17g\t%.17g\n",
                      curve.thresholds[i], curve.far[i], curve.frr[i]);
        out << buf;
      }
    }
    return 0;
  }

  throw Error(ErrorCode::BadArgument, "unknown report '" + report + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"color local binary pattern face identification toolkit"};
  app.require_subcommand(1);
  app.set_config("--config")->envname("CLBP_CONFIG");

  PipelineOpts opts;

  std::string in, out, crop_out, mask_out, root, gallery_path, image;
  std::string fusion = "sum", report = "theta", out_path;
  size_t top_k = 5;
  std::vector<int> train_counts, bin_counts;
  std::vector<std::string> rule_names;
  int trials = 5;
  uint64_t seed = 0;

  CLI::App* enh = app.add_subcommand("enhance", "Illumination enhancement");
  enh->add_option("input", in, "Input image (PNG or BMP)")->required();
  enh->add_option("output", out, "Output image")->required();
  add_pipeline_options(enh, opts);

  CLI::App* det = app.add_subcommand("detect", "Skin-based face detection");
  det->add_option("input", in, "Input image")->required();
  det->add_option("--crop", crop_out, "Write the cropped face here");
  det->add_option("--mask", mask_out, "Write the binary skin mask here");

  CLI::App* enr = app.add_subcommand("enroll", "Build a gallery from a tree");
  enr->add_option("root", root, "Dataset root (one directory per subject)")
      ->required();
  enr->add_option("--gallery", gallery_path, "Gallery file to write")
      ->required();
  add_pipeline_options(enr, opts);

  CLI::App* ident = app.add_subcommand("identify", "Match a probe image");
  ident->add_option("image", image, "Probe image")->required();
  ident->add_option("--gallery", gallery_path, "Gallery file")->required();
  ident->add_option("--fusion", fusion, "Fusion rule (sum|median|mv|fvf)");
  ident->add_option("--top", top_k, "Ranking entries to print");

  CLI::App* eval = app.add_subcommand("evaluate", "Run split experiments");
  eval->add_option("root", root, "Dataset root")->required();
  eval->add_option("--train-counts", train_counts,
                   "Training images per subject")
      ->delimiter(',');
  eval->add_option("--eval-bins", bin_counts, "Histogram bin counts")
      ->delimiter(',');
  eval->add_option("--rules", rule_names, "Fusion rules")->delimiter(',');
  eval->add_option("--trials", trials, "Random splits per cell");
  eval->add_option("--seed", seed, "Split seed");
  eval->add_option("--out", out_path, "Write a TSV copy of the table here");
  add_pipeline_options(eval, opts);

  CLI::App* ana = app.add_subcommand("analyze", "Channel analysis reports");
  ana->add_option("root", root, "Dataset root")->required();
  ana->add_option("--report", report, "Report kind (theta|mi|roc)")
      ->check(CLI::IsMember({"theta", "mi", "roc"}));
  ana->add_option("--out", out_path, "Write a TSV copy here");
  add_pipeline_options(ana, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enh) return cmd_enhance(in, out, opts);
    if (*det) return cmd_detect(in, crop_out, mask_out);
    if (*enr) return cmd_enroll(root, gallery_path, opts);
    if (*ident) return cmd_identify(image, gallery_path, fusion, top_k);
    if (*eval)
      return cmd_evaluate(root, opts, train_counts, bin_counts, rule_names,
                          trials, seed, out_path);
    if (*ana) return cmd_analyze(root, opts, report, out_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

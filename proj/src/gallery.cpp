#include "clbp/gallery.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <fstream>
#include <iostream>
#include <sstream>

#include "clbp/imageio.hpp"
#include "clbp/segmentation.hpp"

namespace clbp {

namespace fs = std::filesystem;

bool PipelineConfig::compatible_with(const PipelineConfig& other) const {
  return channels == other.channels && grid_rows == other.grid_rows &&
         grid_cols == other.grid_cols && bins == other.bins &&
         neighbor_order == other.neighbor_order;
}

namespace {

bool derivable(Colorspace space, Channel ch) {
  switch (space) {
    case Colorspace::RGB: return true;
    case Colorspace::HSI:
      return ch == Channel::H || ch == Channel::S || ch == Channel::I;
    case Colorspace::YCbCr:
      return ch == Channel::Y || ch == Channel::Cb || ch == Channel::Cr;
    case Colorspace::GRAY: return ch == Channel::GRAY;
    default: return false;
  }
}

std::string zeta_name(ZetaMethod m) {
  return m == ZetaMethod::SVD_RATIO ? "SVD_RATIO" : "NORM_RATIO";
}

}  // namespace

std::vector<Signature> extract_signatures(const PlanarImage& rgb,
                                          const PipelineConfig& cfg) {
  // fall back to RGB-space enhancement when a configured channel cannot
  // be derived from the configured space (e.g. Y with enhance_space=HSI)
  Colorspace space = cfg.enhance_space;
  for (Channel c : cfg.channels)
    if (!derivable(space, c)) {
      space = Colorspace::RGB;
      break;
    }
  PlanarImage enhanced = enhance_image(rgb, space, cfg.enhancement);
  FaceRegion face = segment_face(enhanced);
  std::vector<Signature> sigs;
  sigs.reserve(cfg.channels.size());
  for (Channel c : cfg.channels)
    sigs.push_back(
        channel_signature(face, c, cfg.grid_rows, cfg.grid_cols, cfg.bins));
  return sigs;
}

FusedSignature fuse_sample(const std::vector<Signature>& sigs) {
  return fvf_signature(sigs);
}

DistanceTable distance_table(const std::vector<Signature>& probe,
                             const Gallery& gallery, Metric metric) {
  if (gallery.subjects.empty())
    throw Error(ErrorCode::EmptyInput, "distance_table: empty gallery");
  if (probe.size() != gallery.config.channels.size())
    throw Error(ErrorCode::SizeMismatch,
                "distance_table: probe channel count mismatch");
  DistanceTable table;
  table.metric = metric;
  for (size_t ci = 0; ci < probe.size(); ++ci) {
    Channel ch = gallery.config.channels[ci];
    if (probe[ci].channel != ch)
      throw Error(ErrorCode::BadArgument,
                  "distance_table: probe channel order mismatch");
    auto& per_subject = table.entries[ch];
    for (const auto& [subject, samples] : gallery.subjects) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& sample : samples)
        best = std::min(best,
                        signature_distance(probe[ci], sample[ci], metric));
      per_subject[subject] = best;
    }
  }
  return table;
}

namespace {
RankedResult rank_scores(std::map<std::string, double> scores, size_t top_k) {
  RankedResult res;
  for (auto& [id, score] : scores) res.ranking.push_back({id, score});
  std::stable_sort(res.ranking.begin(), res.ranking.end(),
                   [](const RankedEntry& a, const RankedEntry& b) {
                     return a.score < b.score;
                   });
  if (top_k > 0 && res.ranking.size() > top_k) res.ranking.resize(top_k);
  res.decision = res.ranking.front().subject_id;
  return res;
}
}  // namespace

RankedResult nearest_subject(const std::vector<Signature>& probe,
                             const Gallery& gallery, Metric metric,
                             size_t top_k) {
  if (gallery.subjects.empty())
    throw Error(ErrorCode::EmptyInput, "nearest_subject: empty gallery");
  if (probe.size() != gallery.config.channels.size())
    throw Error(ErrorCode::SizeMismatch,
                "nearest_subject: probe channel count mismatch");
  std::map<std::string, double> scores;
  for (const auto& [subject, samples] : gallery.subjects) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& sample : samples) {
      double d = 0.0;
      for (size_t ci = 0; ci < probe.size(); ++ci)
        d += signature_distance(probe[ci], sample[ci], metric);
      best = std::min(best, d);
    }
    scores[subject] = best;
  }
  return rank_scores(std::move(scores), top_k);
}

RankedResult nearest_subject_fvf(const FusedSignature& probe,
                                 const Gallery& gallery, Metric metric,
                                 size_t top_k) {
  if (gallery.subjects.empty())
    throw Error(ErrorCode::EmptyInput, "nearest_subject: empty gallery");
  std::map<std::string, double> scores;
  for (const auto& [subject, samples] : gallery.subjects) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& sample : samples)
      best = std::min(best,
                      signature_distance(probe, fuse_sample(sample), metric));
    scores[subject] = best;
  }
  return rank_scores(std::move(scores), top_k);
}

DatasetIndex ingest(const fs::path& root) {
  if (!fs::is_directory(root))
    throw Error(ErrorCode::IoError, "not a directory: " + root.string());
  DatasetIndex index;
  index.root = root;
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  for (const fs::path& dir : dirs) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<fs::path> kept;
    for (const fs::path& f : files) {
      std::ifstream in(f, std::ios::binary);
      uint8_t magic[8] = {};
      in.read(reinterpret_cast<char*>(magic), 8);
      static const uint8_t png_sig[4] = {0x89, 'P', 'N', 'G'};
      bool ok = in.gcount() >= 2 &&
                (std::equal(png_sig, png_sig + 4, magic) ||
                 (magic[0] == 'B' && magic[1] == 'M'));
      if (ok) {
        kept.push_back(f);
      } else {
        std::cerr << "warning: skipping non-image file " << f << "\n";
        ++index.skipped;
      }
    }
    if (!kept.empty())
      index.subjects.emplace_back(dir.filename().string(), std::move(kept));
  }
  if (index.subjects.empty())
    throw Error(ErrorCode::EmptyInput,
                "no subjects with images under " + root.string());
  return index;
}

Gallery enroll(const DatasetIndex& index, const PipelineConfig& cfg) {
  Gallery g;
  g.config = cfg;
  for (const auto& [subject, paths] : index.subjects) {
    std::vector<std::vector<Signature>> samples;
    for (const fs::path& p : paths) {
      try {
        samples.push_back(extract_signatures(read_image(p), cfg));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::NoSkinRegion ||
            e.code() == ErrorCode::FormatError) {
          std::cerr << "warning: skipping " << p << ": " << e.what() << "\n";
          continue;
        }
        throw;
      }
    }
    if (samples.empty())
      throw Error(ErrorCode::EmptyInput,
                  "no usable images for subject " + subject);
    g.subjects[subject] = std::move(samples);
  }
  return g;
}

Gallery enroll_images(
    const std::vector<std::pair<std::string, std::vector<PlanarImage>>>& data,
    const PipelineConfig& cfg) {
  Gallery g;
  g.config = cfg;
  for (const auto& [subject, images] : data) {
    std::vector<std::vector<Signature>> samples;
    for (const PlanarImage& img : images) {
      try {
        samples.push_back(extract_signatures(img, cfg));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::NoSkinRegion) continue;
        throw;
      }
    }
    if (samples.empty())
      throw Error(ErrorCode::EmptyInput,
                  "no usable images for subject " + subject);
    g.subjects[subject] = std::move(samples);
  }
  return g;
}

namespace {

std::string grid_string(const PipelineConfig& c) {
  return std::to_string(c.grid_rows) + "x" + std::to_string(c.grid_cols);
}

std::string channels_string(const std::vector<Channel>& chs) {
  std::string s;
  for (size_t i = 0; i < chs.size(); ++i) {
    if (i) s += ",";
    s += to_string(chs[i]);
  }
  return s;
}

}  // namespace

void save_gallery(const Gallery& g, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  size_t records = 0;
  for (const auto& [subject, samples] : g.subjects)
    records += samples.size() * g.config.channels.size();
  out << "CLBP-GALLERY v1\n";
  out << "grid=" << grid_string(g.config) << "\n";
  out << "bins=" << g.config.bins << "\n";
  out << "channels=" << channels_string(g.config.channels) << "\n";
  out << "metric=" << to_string(g.config.metric) << "\n";
  out << "enhancement=" << zeta_name(g.config.enhancement) << "\n";
  out << "enhance_space=" << to_string(g.config.enhance_space) << "\n";
  out << "neighbor_order=" << g.config.neighbor_order << "\n";
  out << "records=" << records << "\n";
  out << "\n";
  char buf[64];
  for (const auto& [subject, samples] : g.subjects)
    for (size_t si = 0; si < samples.size(); ++si)
      for (size_t ci = 0; ci < g.config.channels.size(); ++ci) {
        const Signature& sig = samples[si][ci];
        out << subject << "\t" << to_string(sig.channel) << "\t" << si << "\t";
        for (size_t i = 0; i < sig.values.size(); ++i) {
          std::snprintf(buf, sizeof buf, "%.17g", sig.values[i]);
          if (i) out << ' ';
          out << buf;
        }
        out << "\n";
      }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

Gallery load_gallery(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> Error {
    return Error(ErrorCode::FormatError,
                 path.string() + ":" + std::to_string(lineno) + ": " + msg);
  };
  if (!std::getline(in, line)) throw fail("empty file");
  ++lineno;
  if (line != "CLBP-GALLERY v1") throw fail("unknown gallery format/version");

  Gallery g;
  long expected_records = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) break;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw fail("malformed header line");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    if (key == "grid") {
      auto x = value.find('x');
      if (x == std::string::npos) throw fail("bad grid value");
      g.config.grid_rows = std::stoi(value.substr(0, x));
      g.config.grid_cols = std::stoi(value.substr(x + 1));
    } else if (key == "bins") {
      g.config.bins = std::stoi(value);
    } else if (key == "channels") {
      g.config.channels.clear();
      std::stringstream ss(value);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        auto ch = channel_from_string(tok);
        if (!ch) throw fail("unknown channel " + tok);
        g.config.channels.push_back(*ch);
      }
    } else if (key == "metric") {
      auto m = metric_from_string(value);
      if (!m) throw fail("unknown metric " + value);
      g.config.metric = *m;
    } else if (key == "enhancement") {
      if (value == "SVD_RATIO")
        g.config.enhancement = ZetaMethod::SVD_RATIO;
      else if (value == "NORM_RATIO")
        g.config.enhancement = ZetaMethod::NORM_RATIO;
      else
        throw fail("unknown enhancement " + value);
    } else if (key == "enhance_space") {
      if (value == "RGB") g.config.enhance_space = Colorspace::RGB;
      else if (value == "HSI") g.config.enhance_space = Colorspace::HSI;
      else if (value == "YCbCr") g.config.enhance_space = Colorspace::YCbCr;
      else if (value == "GRAY") g.config.enhance_space = Colorspace::GRAY;
      else throw fail("unknown enhance_space " + value);
    } else if (key == "neighbor_order") {
      g.config.neighbor_order = value;
    } else if (key == "records") {
      expected_records = std::stol(value);
    } else {
      throw fail("unknown header key " + key);
    }
  }
  if (in.eof() && expected_records != 0)
    throw fail("truncated header (missing blank separator)");

  const size_t expect_values = static_cast<size_t>(g.config.grid_rows) *
                               g.config.grid_cols * g.config.bins;
  long records = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string subject, channel_s, index_s, rest;
    if (!std::getline(ss, subject, '\t') ||
        !std::getline(ss, channel_s, '\t') ||
        !std::getline(ss, index_s, '\t') || !std::getline(ss, rest))
      throw fail("malformed record");
    auto ch = channel_from_string(channel_s);
    if (!ch) throw fail("unknown channel " + channel_s);
    size_t sample_index = static_cast<size_t>(std::stoul(index_s));
    Signature sig;
    sig.channel = *ch;
    sig.grid_rows = g.config.grid_rows;
    sig.grid_cols = g.config.grid_cols;
    sig.bins = g.config.bins;
    sig.region_weights.assign(
        static_cast<size_t>(sig.grid_rows) * sig.grid_cols, 1.0);
    sig.values.reserve(expect_values);
    const char* p = rest.c_str();
    char* end = nullptr;
    while (*p) {
      double v = std::strtod(p, &end);
      if (end == p) throw fail("bad float in record");
      sig.values.push_back(v);
      p = end;
      while (*p == ' ') ++p;
    }
    if (sig.values.size() != expect_values)
      throw fail("record has " + std::to_string(sig.values.size()) +
                 " values, expected " + std::to_string(expect_values));
    auto& samples = g.subjects[subject];
    if (samples.size() <= sample_index) samples.resize(sample_index + 1);
    size_t ci = 0;
    for (; ci < g.config.channels.size(); ++ci)
      if (g.config.channels[ci] == *ch) break;
    if (ci == g.config.channels.size())
      throw fail("record channel not in header channel set");
    if (samples[sample_index].empty())
      samples[sample_index].resize(g.config.channels.size());
    samples[sample_index][ci] = std::move(sig);
    ++records;
  }
  if (expected_records >= 0 && records != expected_records)
    throw Error(ErrorCode::FormatError,
                path.string() + ": truncated gallery, expected " +
                    std::to_string(expected_records) + " records, found " +
                    std::to_string(records));
  for (const auto& [subject, samples] : g.subjects)
    for (const auto& sample : samples)
      for (const Signature& s : sample)
        if (s.values.empty())
          throw Error(ErrorCode::FormatError,
                      path.string() + ": incomplete sample for subject " +
                          subject);
  return g;
}

}  // namespace clbp

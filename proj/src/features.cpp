#include "clbp/features.hpp"

#include <algorithm>

namespace clbp {

std::string to_string(Channel c) {
  switch (c) {
    case Channel::H: return "H";
    case Channel::S: return "S";
    case Channel::I: return "I";
    case Channel::Y: return "Y";
    case Channel::Cb: return "Cb";
    case Channel::Cr: return "Cr";
    case Channel::GRAY: return "GRAY";
  }
  return "?";
}

std::optional<Channel> channel_from_string(const std::string& s) {
  if (s == "H" || s == "h") return Channel::H;
  if (s == "S" || s == "s") return Channel::S;
  if (s == "I" || s == "i") return Channel::I;
  if (s == "Y" || s == "y") return Channel::Y;
  if (s == "Cb" || s == "cb") return Channel::Cb;
  if (s == "Cr" || s == "cr") return Channel::Cr;
  if (s == "GRAY" || s == "gray") return Channel::GRAY;
  return std::nullopt;
}

LbpImage lbp(const Plane& plane) {
  if (plane.width < 3 || plane.height < 3)
    throw Error(ErrorCode::BadDimensions, "lbp: plane smaller than 3x3");
  // top-left, clockwise
  static const int dx[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
  static const int dy[8] = {-1, -1, -1, 0, 1, 1, 1, 0};
  LbpImage out;
  out.width = plane.width - 2;
  out.height = plane.height - 2;
  out.labels.resize(static_cast<size_t>(out.width) * out.height);
  for (int y = 1; y < plane.height - 1; ++y)
    for (int x = 1; x < plane.width - 1; ++x) {
      double center = plane.at(x, y);
      int code = 0;
      for (int n = 0; n < 8; ++n)
        if (plane.at(x + dx[n], y + dy[n]) - center >= 0.0) code |= 1 << n;
      out.labels[static_cast<size_t>(y - 1) * out.width + (x - 1)] = code;
    }
  return out;
}

std::vector<double> regional_histograms(const LbpImage& img, int grid_rows,
                                        int grid_cols, int bins,
                                        const BinaryMask* mask) {
  if (grid_rows < 1 || grid_cols < 1)
    throw Error(ErrorCode::BadArgument, "regional_histograms: bad grid");
  if (grid_rows > img.height || grid_cols > img.width)
    throw Error(ErrorCode::BadDimensions,
                "regional_histograms: grid larger than label image");
  if (mask && (mask->width != img.width || mask->height != img.height))
    throw Error(ErrorCode::SizeMismatch,
                "regional_histograms: mask size mismatch");
  const int cell_w = img.width / grid_cols;
  const int cell_h = img.height / grid_rows;
  std::vector<double> counts(
      static_cast<size_t>(grid_rows) * grid_cols * bins, 0.0);
  for (int y = 0; y < img.height; ++y) {
    int gy = std::min(y / cell_h, grid_rows - 1);
    for (int x = 0; x < img.width; ++x) {
      if (mask && !mask->at(x, y)) continue;
      int gx = std::min(x / cell_w, grid_cols - 1);
      int region = gy * grid_cols + gx;
      int bin = img.at(x, y) * bins / 256;
      counts[static_cast<size_t>(region) * bins + bin] += 1.0;
    }
  }
  return counts;
}

Plane channel_plane(const PlanarImage& crop, Channel channel) {
  auto pick = [&](const PlanarImage& img, int idx) { return img.planes[idx]; };
  switch (crop.colorspace) {
    case Colorspace::RGB:
      switch (channel) {
        case Channel::H: return pick(rgb_to_hsi(crop), 0);
        case Channel::S: return pick(rgb_to_hsi(crop), 1);
        case Channel::I: return pick(rgb_to_hsi(crop), 2);
        case Channel::Y: return pick(rgb_to_ycbcr(crop), 0);
        case Channel::Cb: return pick(rgb_to_ycbcr(crop), 1);
        case Channel::Cr: return pick(rgb_to_ycbcr(crop), 2);
        case Channel::GRAY: return pick(rgb_to_gray(crop), 0);
      }
      break;
    case Colorspace::HSI:
      switch (channel) {
        case Channel::H: return crop.planes[0];
        case Channel::S: return crop.planes[1];
        case Channel::I: return crop.planes[2];
        default: break;
      }
      break;
    case Colorspace::YCbCr:
      switch (channel) {
        case Channel::Y: return crop.planes[0];
        case Channel::Cb: return crop.planes[1];
        case Channel::Cr: return crop.planes[2];
        default: break;
      }
      break;
    case Colorspace::GRAY:
      if (channel == Channel::GRAY) return crop.planes[0];
      break;
    default:
      break;
  }
  throw Error(ErrorCode::WrongColorspace,
              "channel_plane: channel " + to_string(channel) +
                  " not derivable from " + to_string(crop.colorspace));
}

Signature channel_signature(const FaceRegion& face, Channel channel,
                            int grid_rows, int grid_cols, int bins) {
  if (face.crop.width < 3 || face.crop.height < 3)
    throw Error(ErrorCode::BadDimensions, "channel_signature: crop too small");
  Plane plane = channel_plane(face.crop, channel);
  LbpImage codes = lbp(plane);
  // mask shrinks by the 1-pixel LBP border
  BinaryMask inner(codes.width, codes.height);
  bool use_mask = face.mask.width == face.crop.width &&
                  face.mask.height == face.crop.height;
  if (use_mask)
    for (int y = 0; y < codes.height; ++y)
      for (int x = 0; x < codes.width; ++x)
        inner.set(x, y, face.mask.at(x + 1, y + 1));
  std::vector<double> counts = regional_histograms(
      codes, grid_rows, grid_cols, bins, use_mask ? &inner : nullptr);

  Signature sig;
  sig.channel = channel;
  sig.grid_rows = grid_rows;
  sig.grid_cols = grid_cols;
  sig.bins = bins;
  sig.values = std::move(counts);
  sig.region_weights.assign(static_cast<size_t>(grid_rows) * grid_cols, 1.0);
  for (int r = 0; r < sig.regions(); ++r) {
    double total = 0.0;
    double* block = sig.values.data() + static_cast<size_t>(r) * bins;
    for (int b = 0; b < bins; ++b) total += block[b];
    if (total > 0.0) {
      for (int b = 0; b < bins; ++b) block[b] /= total;
    } else {
      for (int b = 0; b < bins; ++b) block[b] = 1.0 / bins;
    }
  }
  return sig;
}

FusedSignature fvf_signature(const std::vector<Signature>& sigs) {
  if (sigs.empty())
    throw Error(ErrorCode::EmptyInput, "fvf_signature: no signatures");
  std::vector<const Signature*> ordered;
  for (const Signature& s : sigs) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const Signature* a, const Signature* b) {
              return static_cast<int>(a->channel) < static_cast<int>(b->channel);
            });
  FusedSignature fused;
  fused.grid_rows = sigs.front().grid_rows;
  fused.grid_cols = sigs.front().grid_cols;
  fused.bins = sigs.front().bins;
  for (size_t i = 0; i < ordered.size(); ++i) {
    const Signature& s = *ordered[i];
    if (s.grid_rows != fused.grid_rows || s.grid_cols != fused.grid_cols ||
        s.bins != fused.bins)
      throw Error(ErrorCode::SizeMismatch,
                  "fvf_signature: mismatched grid or bins");
    if (i > 0 && s.channel == ordered[i - 1]->channel)
      throw Error(ErrorCode::BadArgument,
                  "fvf_signature: duplicate channel " + to_string(s.channel));
    fused.channels.push_back(s.channel);
    fused.values.insert(fused.values.end(), s.values.begin(), s.values.end());
  }
  return fused;
}

Signature coarsen_signature(const Signature& sig, int bins) {
  if (bins < 2 || sig.bins % bins != 0)
    throw Error(ErrorCode::BadArgument,
                "coarsen_signature: bins must evenly divide source bins");
  const int factor = sig.bins / bins;
  Signature out = sig;
  out.bins = bins;
  out.values.assign(static_cast<size_t>(sig.regions()) * bins, 0.0);
  for (int r = 0; r < sig.regions(); ++r)
    for (int b = 0; b < sig.bins; ++b)
      out.values[static_cast<size_t>(r) * bins + b / factor] +=
          sig.values[static_cast<size_t>(r) * sig.bins + b];
  return out;
}

}  // namespace clbp

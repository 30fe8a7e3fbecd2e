#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clbp/image.hpp"
#include "clbp/segmentation.hpp"

namespace clbp {

enum class Channel { H, S, I, Y, Cb, Cr, GRAY };

std::string to_string(Channel c);
std::optional<Channel> channel_from_string(const std::string& s);

struct LbpImage {
  int width = 0;   // input width minus 2
  int height = 0;  // input height minus 2
  std::vector<int> labels;  // values in [0,255]

  int at(int x, int y) const {
    return labels[static_cast<size_t>(y) * width + x];
  }
};

struct Signature {
  Channel channel = Channel::GRAY;
  int grid_rows = 4;
  int grid_cols = 4;
  int bins = 256;
  std::vector<double> values;          // grid_rows*grid_cols*bins
  std::vector<double> region_weights;  // one per region, default 1

  int regions() const { return grid_rows * grid_cols; }
};

struct FusedSignature {
  std::vector<Channel> channels;  // canonical order
  int grid_rows = 4;
  int grid_cols = 4;
  int bins = 256;
  std::vector<double> values;
};

// 8-neighbor code per interior pixel; s(x)=1 iff x>=0, neighbor order
// starts top-left and proceeds clockwise.
LbpImage lbp(const Plane& plane);

// Per-region label counts (unnormalized); regions tile the label image,
// remainder absorbed by the last row/column. Optional mask excludes
// pixels (mask aligned to the label image).
std::vector<double> regional_histograms(const LbpImage& img, int grid_rows,
                                        int grid_cols, int bins,
                                        const BinaryMask* mask = nullptr);

// LBP signature of one channel of a segmented face: per-region PDFs over
// LBP codes, non-skin pixels excluded, empty regions uniform.
Signature channel_signature(const FaceRegion& face, Channel channel,
                            int grid_rows, int grid_cols, int bins);

// Canonical-order concatenation of per-channel signatures.
FusedSignature fvf_signature(const std::vector<Signature>& sigs);

// Extract the requested channel plane from a crop in RGB, HSI or YCbCr.
Plane channel_plane(const PlanarImage& crop, Channel channel);

// Exact block-sum coarsening of per-region PDFs (bins must divide evenly).
Signature coarsen_signature(const Signature& sig, int bins);

}  // namespace clbp

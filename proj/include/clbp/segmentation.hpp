#pragma once

#include <vector>

#include "clbp/image.hpp"

namespace clbp {

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> bits;  // row-major, 0/1

  BinaryMask() = default;
  BinaryMask(int w, int h, bool fill = false)
      : width(w), height(h), bits(static_cast<size_t>(w) * h, fill ? 1 : 0) {}

  bool at(int x, int y) const {
    return bits[static_cast<size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v) {
    bits[static_cast<size_t>(y) * width + x] = v ? 1 : 0;
  }
  size_t count() const;
};

struct SmqtLabels {
  int level = 1;
  int width = 0;
  int height = 0;
  std::vector<int> labels;  // values in [0, 2^level - 1]
};

struct Rect {
  int x = 0, y = 0, w = 0, h = 0;
  bool operator==(const Rect&) const = default;
};

struct FaceRegion {
  Rect bbox;
  PlanarImage crop;  // same colorspace as the segmentation input
  BinaryMask mask;   // aligned to crop; true = skin
};

// Successive mean quantization: recursive mean split, pixels >= mean take
// the upper branch (bit 1). Gain/bias insensitive for strict splits.
SmqtLabels smqt(const Plane& region, int level);

// Hue/saturation threshold rule: (H < 0.17 or H > 0.63) and S > 0.1.
BinaryMask skin_mask(const PlanarImage& img);

// Fill background components (4-connected) not reachable from the border.
BinaryMask fill_holes(const BinaryMask& mask);

// Tight bbox of the largest 8-connected component; ties go to the
// component whose first pixel in row-major order comes first.
Rect largest_component_bbox(const BinaryMask& mask);

// Full pipeline: skin mask -> hole fill -> largest component -> crop.
// Accepts RGB (converted internally) or HSI input.
FaceRegion segment_face(const PlanarImage& img);

}  // namespace clbp

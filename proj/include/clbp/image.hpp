#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "clbp/error.hpp"

namespace clbp {

// A single 2D array of real-valued samples, row-major.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // size width*height

  Plane() = default;
  Plane(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

  double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  double at(int x, int y) const {
    return data[static_cast<size_t>(y) * width + x];
  }
  size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }
};

enum class Colorspace { RGB, HSI, YCbCr, GRAY, LABELS };

std::string to_string(Colorspace cs);
int plane_count(Colorspace cs);

// Multi-plane raster; the unit every pipeline stage consumes and produces.
// Immutable by convention after construction.
struct PlanarImage {
  int width = 0;
  int height = 0;
  Colorspace colorspace = Colorspace::GRAY;
  std::vector<Plane> planes;

  PlanarImage() = default;
  PlanarImage(int w, int h, Colorspace cs)
      : width(w), height(h), colorspace(cs) {
    planes.assign(plane_count(cs), Plane(w, h));
  }

  void validate() const;
};

struct PdfVector {
  int bins = 256;
  std::vector<double> values;
};

// Quantize a real sample in [0,255] to the nearest 8-bit level.
inline int quantize8(double v) {
  long q = std::lround(v);
  if (q < 0) q = 0;
  if (q > 255) q = 255;
  return static_cast<int>(q);
}

PlanarImage rgb_to_hsi(const PlanarImage& img);
PlanarImage rgb_to_ycbcr(const PlanarImage& img);
PlanarImage rgb_to_gray(const PlanarImage& img);

// Global histogram equalization: v -> floor(255 * CDF(v)).
Plane ghe(const Plane& plane);

// Normalized histogram over uniform partitions of [0,256).
PdfVector pdf(const Plane& plane, int bins = 256);

}  // namespace clbp

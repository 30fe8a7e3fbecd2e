#pragma once

#include "clbp/image.hpp"

namespace clbp {

// One-level orthonormal Haar decomposition of a single plane.
struct SubbandSet {
  Plane ll, lh, hl, hh;
  int original_width = 0;
  int original_height = 0;
};

// Analysis: rows first, then columns. Odd dimensions are edge-replicated
// to even before analysis; the original size is recorded for the inverse.
SubbandSet dwt2(const Plane& plane);

// Synthesis inverse of dwt2, cropped to the recorded original size.
Plane idwt2(const SubbandSet& sub);

}  // namespace clbp

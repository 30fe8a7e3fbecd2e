#pragma once

#include "clbp/image.hpp"
#include "clbp/wavelet.hpp"

namespace clbp {

enum class ZetaMethod { SVD_RATIO, NORM_RATIO };

struct CorrectionCoefficient {
  double zeta = 1.0;
  ZetaMethod method = ZetaMethod::NORM_RATIO;
};

// Ratio of largest singular values, sv(ll_ref) / sv(ll_a).
CorrectionCoefficient zeta_svd(const Plane& ll_a, const Plane& ll_ref);

// Same ratio via the spectral norm (power iteration).
CorrectionCoefficient zeta_norm(const Plane& ll_a, const Plane& ll_ref);

// Largest singular value by power iteration on A^T A.
double spectral_norm(const Plane& a);

struct EnhanceResult {
  Plane pre_clamp;   // reconstruction before clamping to [0,255]
  Plane output;      // clamped result
  double zeta = 1.0;
};

// LL-band scaling against the GHE reference of the same plane.
EnhanceResult enhance_plane_detail(const Plane& plane, ZetaMethod method);
Plane enhance_plane(const Plane& plane, ZetaMethod method);

// Route enhancement through the requested colorspace: I for HSI, Y for
// YCbCr, all three planes for RGB. The result stays in that colorspace.
PlanarImage enhance_image(const PlanarImage& img, Colorspace space,
                          ZetaMethod method = ZetaMethod::NORM_RATIO);

}  // namespace clbp

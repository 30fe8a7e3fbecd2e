#include "clbp/illumination.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace clbp {

namespace {
Eigen::MatrixXd to_eigen(const Plane& p) {
  Eigen::MatrixXd m(p.height, p.width);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) m(y, x) = p.at(x, y);
  return m;
}
}  // namespace

double spectral_norm(const Plane& a) {
  if (a.empty())
    throw Error(ErrorCode::EmptyInput, "spectral_norm: empty plane");
  const int rows = a.height, cols = a.width;
  bool all_zero = true;
  for (double x : a.data)
    if (x != 0.0) { all_zero = false; break; }
  if (all_zero) return 0.0;

  // power iteration on A^T A, deterministic pseudo-random start so the
  // initial vector is not orthogonal to the dominant direction
  std::vector<double> v(cols);
  uint64_t state = 0x9e3779b97f4a7c15ull;
  for (int c = 0; c < cols; ++c) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    v[c] = 0.5 + static_cast<double>(state >> 11) / 9007199254740992.0;
  }
  std::vector<double> av(rows), atav(cols);
  double sigma = 0.0;
  for (int it = 0; it < 10000; ++it) {
    double vn = 0.0;
    for (double x : v) vn += x * x;
    vn = std::sqrt(vn);
    for (double& x : v) x /= vn;
    for (int r = 0; r < rows; ++r) {
      double s = 0.0;
      for (int c = 0; c < cols; ++c) s += a.at(c, r) * v[c];
      av[r] = s;
    }
    for (int c = 0; c < cols; ++c) {
      double s = 0.0;
      for (int r = 0; r < rows; ++r) s += a.at(c, r) * av[r];
      atav[c] = s;
    }
    double next = 0.0;
    for (double x : av) next += x * x;
    next = std::sqrt(next);
    bool converged = it > 0 && std::abs(next - sigma) <= 1e-10 * next;
    sigma = next;
    double an = 0.0;
    for (double x : atav) an += x * x;
    if (an == 0.0) break;  // v landed in the null space of A
    v = atav;
    if (converged) break;
  }
  return sigma;
}

CorrectionCoefficient zeta_svd(const Plane& ll_a, const Plane& ll_ref) {
  if (ll_a.empty() || ll_ref.empty())
    throw Error(ErrorCode::EmptyInput, "zeta_svd: empty input");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_a(to_eigen(ll_a));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_r(to_eigen(ll_ref));
  double denom = svd_a.singularValues()(0);
  if (denom == 0.0)
    throw Error(ErrorCode::DegenerateInput, "zeta_svd: zero input matrix");
  return {svd_r.singularValues()(0) / denom, ZetaMethod::SVD_RATIO};
}

CorrectionCoefficient zeta_norm(const Plane& ll_a, const Plane& ll_ref) {
  if (ll_a.empty() || ll_ref.empty())
    throw Error(ErrorCode::EmptyInput, "zeta_norm: empty input");
  double denom = spectral_norm(ll_a);
  if (denom == 0.0)
    throw Error(ErrorCode::DegenerateInput, "zeta_norm: zero input matrix");
  return {spectral_norm(ll_ref) / denom, ZetaMethod::NORM_RATIO};
}

EnhanceResult enhance_plane_detail(const Plane& plane, ZetaMethod method) {
  Plane ref = ghe(plane);
  SubbandSet sa = dwt2(plane);
  SubbandSet sr = dwt2(ref);
  CorrectionCoefficient cc = method == ZetaMethod::SVD_RATIO
                                 ? zeta_svd(sa.ll, sr.ll)
                                 : zeta_norm(sa.ll, sr.ll);
  for (double& v : sa.ll.data) v *= cc.zeta;
  EnhanceResult res;
  res.zeta = cc.zeta;
  res.pre_clamp = idwt2(sa);
  res.output = res.pre_clamp;
  for (double& v : res.output.data) v = std::clamp(v, 0.0, 255.0);
  return res;
}

Plane enhance_plane(const Plane& plane, ZetaMethod method) {
  return enhance_plane_detail(plane, method).output;
}

PlanarImage enhance_image(const PlanarImage& img, Colorspace space,
                          ZetaMethod method) {
  if (img.colorspace != Colorspace::RGB)
    throw Error(ErrorCode::WrongColorspace, "enhance_image: RGB input required");
  switch (space) {
    case Colorspace::RGB: {
      PlanarImage out = img;
      for (Plane& p : out.planes) p = enhance_plane(p, method);
      return out;
    }
    case Colorspace::HSI: {
      PlanarImage out = rgb_to_hsi(img);
      out.planes[2] = enhance_plane(out.planes[2], method);
      return out;
    }
    case Colorspace::YCbCr: {
      PlanarImage out = rgb_to_ycbcr(img);
      out.planes[0] = enhance_plane(out.planes[0], method);
      return out;
    }
    case Colorspace::GRAY: {
      PlanarImage out = rgb_to_gray(img);
      out.planes[0] = enhance_plane(out.planes[0], method);
      return out;
    }
    default:
      throw Error(ErrorCode::BadArgument,
                  "enhance_image: unsupported target colorspace");
  }
}

}  // namespace clbp

#include "clbp/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace clbp {

std::string to_string(Colorspace cs) {
  switch (cs) {
    case Colorspace::RGB: return "RGB";
    case Colorspace::HSI: return "HSI";
    case Colorspace::YCbCr: return "YCbCr";
    case Colorspace::GRAY: return "GRAY";
    case Colorspace::LABELS: return "LABELS";
  }
  return "?";
}

int plane_count(Colorspace cs) {
  switch (cs) {
    case Colorspace::RGB:
    case Colorspace::HSI:
    case Colorspace::YCbCr: return 3;
    case Colorspace::GRAY:
    case Colorspace::LABELS: return 1;
  }
  return 0;
}

void PlanarImage::validate() const {
  if (static_cast<int>(planes.size()) != plane_count(colorspace))
    throw Error(ErrorCode::BadDimensions,
                "plane count does not match colorspace " +
                    to_string(colorspace));
  for (const Plane& p : planes)
    if (p.width != width || p.height != height)
      throw Error(ErrorCode::BadDimensions, "plane dimensions mismatch");
}

static void require_colorspace(const PlanarImage& img, Colorspace want,
                               const char* op) {
  if (img.colorspace != want)
    throw Error(ErrorCode::WrongColorspace,
                std::string(op) + ": expected " + to_string(want) +
                    " input, got " + to_string(img.colorspace));
}

PlanarImage rgb_to_hsi(const PlanarImage& img) {
  require_colorspace(img, Colorspace::RGB, "rgb_to_hsi");
  PlanarImage out(img.width, img.height, Colorspace::HSI);
  const Plane& rp = img.planes[0];
  const Plane& gp = img.planes[1];
  const Plane& bp = img.planes[2];
  for (size_t i = 0; i < rp.size(); ++i) {
    double r = rp.data[i], g = gp.data[i], b = bp.data[i];
    double sum = r + g + b;
    double intensity = sum / 3.0;
    double mn = std::min({r, g, b});
    double sat = sum > 0.0 ? 1.0 - 3.0 * mn / sum : 0.0;
    double hue = 0.0;
    if (sat > 0.0) {
      double num = 0.5 * ((r - g) + (r - b));
      double den = std::sqrt((r - g) * (r - g) + (r - b) * (g - b));
      if (den > 0.0) {
        double c = std::clamp(num / den, -1.0, 1.0);
        double theta = std::acos(c);  // [0, pi]
        if (b > g) theta = 2.0 * std::numbers::pi - theta;
        hue = theta / (2.0 * std::numbers::pi);
        if (hue >= 1.0) hue -= 1.0;
      }
    }
    out.planes[0].data[i] = hue;
    out.planes[1].data[i] = sat;
    out.planes[2].data[i] = intensity;
  }
  return out;
}

PlanarImage rgb_to_ycbcr(const PlanarImage& img) {
  require_colorspace(img, Colorspace::RGB, "rgb_to_ycbcr");
  PlanarImage out(img.width, img.height, Colorspace::YCbCr);
  const Plane& rp = img.planes[0];
  const Plane& gp = img.planes[1];
  const Plane& bp = img.planes[2];
  for (size_t i = 0; i < rp.size(); ++i) {
    double r = rp.data[i], g = gp.data[i], b = bp.data[i];
    // full-range BT.601
    double y = 0.299 * r + 0.587 * g + 0.114 * b;
    double cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b;
    double cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b;
    out.planes[0].data[i] = y;
    out.planes[1].data[i] = cb;
    out.planes[2].data[i] = cr;
  }
  return out;
}

PlanarImage rgb_to_gray(const PlanarImage& img) {
  require_colorspace(img, Colorspace::RGB, "rgb_to_gray");
  PlanarImage out(img.width, img.height, Colorspace::GRAY);
  for (size_t i = 0; i < out.planes[0].size(); ++i) {
    out.planes[0].data[i] = 0.299 * img.planes[0].data[i] +
                            0.587 * img.planes[1].data[i] +
                            0.114 * img.planes[2].data[i];
  }
  return out;
}

Plane ghe(const Plane& plane) {
  if (plane.empty())
    throw Error(ErrorCode::EmptyInput, "ghe: empty plane");
  std::array<size_t, 256> hist{};
  for (double v : plane.data) hist[quantize8(v)]++;
  const double n = static_cast<double>(plane.size());
  std::array<double, 256> lut{};
  size_t cum = 0;
  for (int l = 0; l < 256; ++l) {
    cum += hist[l];
    lut[l] = std::floor(255.0 * static_cast<double>(cum) / n);
  }
  Plane out(plane.width, plane.height);
  for (size_t i = 0; i < plane.size(); ++i)
    out.data[i] = lut[quantize8(plane.data[i])];
  return out;
}

PdfVector pdf(const Plane& plane, int bins) {
  if (plane.empty())
    throw Error(ErrorCode::EmptyInput, "pdf: empty plane");
  if (bins < 2)
    throw Error(ErrorCode::BadArgument, "pdf: bins must be >= 2");
  PdfVector out;
  out.bins = bins;
  out.values.assign(bins, 0.0);
  for (double v : plane.data) out.values[quantize8(v) * bins / 256] += 1.0;
  for (double& p : out.values) p /= static_cast<double>(plane.size());
  return out;
}

}  // namespace clbp

#include "clbp/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace clbp {

namespace {
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

Plane pad_to_even(const Plane& p) {
  int w = p.width + (p.width % 2);
  int h = p.height + (p.height % 2);
  if (w == p.width && h == p.height) return p;
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    int sy = std::min(y, p.height - 1);
    for (int x = 0; x < w; ++x)
      out.at(x, y) = p.at(std::min(x, p.width - 1), sy);
  }
  return out;
}
}  // namespace

SubbandSet dwt2(const Plane& plane) {
  if (plane.width < 2 || plane.height < 2)
    throw Error(ErrorCode::BadDimensions, "dwt2: plane smaller than 2x2");
  Plane p = pad_to_even(plane);
  const int w = p.width, h = p.height;
  const int hw = w / 2, hh2 = h / 2;

  // rows
  Plane lo(hw, h), hi(hw, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < hw; ++x) {
      double a = p.at(2 * x, y), b = p.at(2 * x + 1, y);
      lo.at(x, y) = (a + b) * kInvSqrt2;
      hi.at(x, y) = (a - b) * kInvSqrt2;
    }

  // columns
  SubbandSet s;
  s.ll = Plane(hw, hh2);
  s.lh = Plane(hw, hh2);
  s.hl = Plane(hw, hh2);
  s.hh = Plane(hw, hh2);
  s.original_width = plane.width;
  s.original_height = plane.height;
  for (int y = 0; y < hh2; ++y)
    for (int x = 0; x < hw; ++x) {
      double la = lo.at(x, 2 * y), lb = lo.at(x, 2 * y + 1);
      double ha = hi.at(x, 2 * y), hb = hi.at(x, 2 * y + 1);
      s.ll.at(x, y) = (la + lb) * kInvSqrt2;
      s.lh.at(x, y) = (la - lb) * kInvSqrt2;
      s.hl.at(x, y) = (ha + hb) * kInvSqrt2;
      s.hh.at(x, y) = (ha - hb) * kInvSqrt2;
    }
  return s;
}

Plane idwt2(const SubbandSet& sub) {
  const int hw = sub.ll.width, hh2 = sub.ll.height;
  auto same = [&](const Plane& p) {
    return p.width == hw && p.height == hh2;
  };
  if (!same(sub.lh) || !same(sub.hl) || !same(sub.hh))
    throw Error(ErrorCode::SizeMismatch, "idwt2: sub-band shapes differ");
  if (hw == 0 || hh2 == 0)
    throw Error(ErrorCode::EmptyInput, "idwt2: empty sub-bands");

  const int w = 2 * hw, h = 2 * hh2;

  // columns
  Plane lo(hw, h), hi(hw, h);
  for (int y = 0; y < hh2; ++y)
    for (int x = 0; x < hw; ++x) {
      lo.at(x, 2 * y) = (sub.ll.at(x, y) + sub.lh.at(x, y)) * kInvSqrt2;
      lo.at(x, 2 * y + 1) = (sub.ll.at(x, y) - sub.lh.at(x, y)) * kInvSqrt2;
      hi.at(x, 2 * y) = (sub.hl.at(x, y) + sub.hh.at(x, y)) * kInvSqrt2;
      hi.at(x, 2 * y + 1) = (sub.hl.at(x, y) - sub.hh.at(x, y)) * kInvSqrt2;
    }

  // rows
  Plane full(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < hw; ++x) {
      full.at(2 * x, y) = (lo.at(x, y) + hi.at(x, y)) * kInvSqrt2;
      full.at(2 * x + 1, y) = (lo.at(x, y) - hi.at(x, y)) * kInvSqrt2;
    }

  int ow = sub.original_width > 0 ? sub.original_width : w;
  int oh = sub.original_height > 0 ? sub.original_height : h;
  if (ow == w && oh == h) return full;
  Plane out(ow, oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) out.at(x, y) = full.at(x, y);
  return out;
}

}  // namespace clbp

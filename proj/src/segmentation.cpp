#include "clbp/segmentation.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace clbp {

size_t BinaryMask::count() const {
  size_t n = 0;
  for (uint8_t b : bits) n += b;
  return n;
}

namespace {

void smqt_split(const Plane& region, std::vector<int>& labels,
                std::vector<size_t>& idx, int depth, int level) {
  if (depth == level || idx.empty()) return;
  double mean = 0.0;
  for (size_t i : idx) mean += region.data[i];
  mean /= static_cast<double>(idx.size());
  std::vector<size_t> lower, upper;
  for (size_t i : idx) {
    if (region.data[i] >= mean) {
      labels[i] = labels[i] * 2 + 1;
      upper.push_back(i);
    } else {
      labels[i] = labels[i] * 2;
      lower.push_back(i);
    }
  }
  smqt_split(region, labels, lower, depth + 1, level);
  smqt_split(region, labels, upper, depth + 1, level);
}

}  // namespace

SmqtLabels smqt(const Plane& region, int level) {
  if (region.empty())
    throw Error(ErrorCode::EmptyInput, "smqt: empty region");
  if (level < 1 || level > 8)
    throw Error(ErrorCode::BadArgument, "smqt: level must be in [1,8]");
  std::vector<int> labels(region.size(), 0);
  std::vector<size_t> idx(region.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  smqt_split(region, labels, idx, 0, level);
  return {level, region.width, region.height, std::move(labels)};
}

BinaryMask skin_mask(const PlanarImage& img) {
  if (img.colorspace != Colorspace::HSI)
    throw Error(ErrorCode::WrongColorspace, "skin_mask: HSI input required");
  BinaryMask mask(img.width, img.height);
  const Plane& h = img.planes[0];
  const Plane& s = img.planes[1];
  for (size_t i = 0; i < h.size(); ++i)
    mask.bits[i] =
        ((h.data[i] < 0.17 || h.data[i] > 0.63) && s.data[i] > 0.1) ? 1 : 0;
  return mask;
}

BinaryMask fill_holes(const BinaryMask& mask) {
  const int w = mask.width, h = mask.height;
  BinaryMask reached(w, h);
  std::deque<std::pair<int, int>> queue;
  auto push = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return;
    if (mask.at(x, y) || reached.at(x, y)) return;
    reached.set(x, y, true);
    queue.emplace_back(x, y);
  };
  for (int x = 0; x < w; ++x) {
    push(x, 0);
    push(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    push(0, y);
    push(w - 1, y);
  }
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    push(x - 1, y);
    push(x + 1, y);
    push(x, y - 1);
    push(x, y + 1);
  }
  BinaryMask out(w, h);
  for (size_t i = 0; i < out.bits.size(); ++i)
    out.bits[i] = (mask.bits[i] || !reached.bits[i]) ? 1 : 0;
  return out;
}

Rect largest_component_bbox(const BinaryMask& mask) {
  const int w = mask.width, h = mask.height;
  std::vector<int> comp(static_cast<size_t>(w) * h, -1);
  Rect best;
  size_t best_size = 0;
  int next_id = 0;
  std::deque<std::pair<int, int>> queue;
  for (int sy = 0; sy < h; ++sy)
    for (int sx = 0; sx < w; ++sx) {
      size_t si = static_cast<size_t>(sy) * w + sx;
      if (!mask.bits[si] || comp[si] >= 0) continue;
      int id = next_id++;
      comp[si] = id;
      queue.emplace_back(sx, sy);
      size_t size = 0;
      int minx = sx, maxx = sx, miny = sy, maxy = sy;
      while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        ++size;
        minx = std::min(minx, x);
        maxx = std::max(maxx, x);
        miny = std::min(miny, y);
        maxy = std::max(maxy, y);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            size_t ni = static_cast<size_t>(ny) * w + nx;
            if (mask.bits[ni] && comp[ni] < 0) {
              comp[ni] = id;
              queue.emplace_back(nx, ny);
            }
          }
      }
      // row-major scan order means ties keep the earlier (topmost, then
      // leftmost) component
      if (size > best_size) {
        best_size = size;
        best = {minx, miny, maxx - minx + 1, maxy - miny + 1};
      }
    }
  if (best_size == 0)
    throw Error(ErrorCode::NoSkinRegion, "no skin region");
  return best;
}

FaceRegion segment_face(const PlanarImage& img) {
  const PlanarImage* hsi = &img;
  PlanarImage converted;
  if (img.colorspace == Colorspace::RGB) {
    converted = rgb_to_hsi(img);
    hsi = &converted;
  } else if (img.colorspace != Colorspace::HSI) {
    throw Error(ErrorCode::WrongColorspace,
                "segment_face: RGB or HSI input required");
  }
  BinaryMask mask = fill_holes(skin_mask(*hsi));
  Rect box = largest_component_bbox(mask);

  FaceRegion face;
  face.bbox = box;
  face.crop = PlanarImage(box.w, box.h, img.colorspace);
  for (size_t p = 0; p < img.planes.size(); ++p)
    for (int y = 0; y < box.h; ++y)
      for (int x = 0; x < box.w; ++x)
        face.crop.planes[p].at(x, y) = img.planes[p].at(box.x + x, box.y + y);
  face.mask = BinaryMask(box.w, box.h);
  for (int y = 0; y < box.h; ++y)
    for (int x = 0; x < box.w; ++x)
      face.mask.set(x, y, mask.at(box.x + x, box.y + y));
  return face;
}

}  // namespace clbp

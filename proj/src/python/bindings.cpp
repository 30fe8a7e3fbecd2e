#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "clbp/analysis.hpp"
#include "clbp/imageio.hpp"

namespace py = pybind11;
using namespace clbp;

namespace {

Plane plane_from_array(py::array_t<double, py::array::c_style |
                                               py::array::forcecast> arr) {
  if (arr.ndim() != 2)
    throw Error(ErrorCode::BadDimensions, "expected a 2-d array");
  Plane p(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
  std::copy(arr.data(), arr.data() + arr.size(), p.data.begin());
  return p;
}

py::array_t<double> plane_to_array(const Plane& p) {
  py::array_t<double> out({p.height, p.width});
  std::copy(p.data.begin(), p.data.end(), out.mutable_data());
  return out;
}

PlanarImage image_from_array(
    py::array_t<double, py::array::c_style | py::array::forcecast> arr,
    Colorspace cs) {
  if (arr.ndim() == 2 && cs == Colorspace::GRAY) {
    PlanarImage img(static_cast<int>(arr.shape(1)),
                    static_cast<int>(arr.shape(0)), cs);
    img.planes[0] = plane_from_array(arr);
    return img;
  }
  if (arr.ndim() != 3 || arr.shape(2) != plane_count(cs))
    throw Error(ErrorCode::BadDimensions,
                "expected an H x W x " + std::to_string(plane_count(cs)) +
                    " array");
  PlanarImage img(static_cast<int>(arr.shape(1)),
                  static_cast<int>(arr.shape(0)), cs);
  auto r = arr.unchecked<3>();
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < plane_count(cs); ++c)
        img.planes[c].at(x, y) = r(y, x, c);
  return img;
}

py::array_t<double> image_to_array(const PlanarImage& img) {
  if (img.planes.size() == 1) return plane_to_array(img.planes[0]);
  py::array_t<double> out(
      {img.height, img.width, static_cast<int>(img.planes.size())});
  auto w = out.mutable_unchecked<3>();
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (size_t c = 0; c < img.planes.size(); ++c)
        w(y, x, c) = img.planes[c].at(x, y);
  return out;
}

Colorspace space_from_string(const std::string& s) {
  if (s == "rgb") return Colorspace::RGB;
  if (s == "hsi") return Colorspace::HSI;
  if (s == "ycbcr") return Colorspace::YCbCr;
  if (s == "gray") return Colorspace::GRAY;
  throw Error(ErrorCode::BadArgument, "unknown colorspace '" + s + "'");
}

ZetaMethod method_from_string(const std::string& s) {
  if (s == "svd") return ZetaMethod::SVD_RATIO;
  if (s == "norm") return ZetaMethod::NORM_RATIO;
  throw Error(ErrorCode::BadArgument, "unknown method '" + s + "'");
}

PipelineConfig config_from_kwargs(const std::vector<std::string>& channels,
                                  int grid_rows, int grid_cols, int bins,
                                  const std::string& metric,
                                  const std::string& method,
                                  const std::string& space) {
  PipelineConfig cfg;
  cfg.channels.clear();
  for (const std::string& name : channels) {
    auto ch = channel_from_string(name);
    if (!ch)
      throw Error(ErrorCode::BadArgument, "unknown channel '" + name + "'");
    cfg.channels.push_back(*ch);
  }
  cfg.grid_rows = grid_rows;
  cfg.grid_cols = grid_cols;
  cfg.bins = bins;
  auto m = metric_from_string(metric);
  if (!m) throw Error(ErrorCode::BadArgument, "unknown metric '" + metric + "'");
  cfg.metric = *m;
  cfg.enhancement = method_from_string(method);
  cfg.enhance_space = space_from_string(space);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_clbp, m) {
  m.doc() = "color local binary pattern face identification core";

  py::register_exception<Error>(m, "ClbpError");

  m.def(
      "read_image",
      [](const std::string& path) { return image_to_array(read_image(path)); },
      py::arg("path"), "Decode a PNG or BMP file to an H x W x 3 RGB array.");

  m.def(
      "write_image",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> arr,
         const std::string& path) {
        Colorspace cs = arr.ndim() == 2 ? Colorspace::GRAY : Colorspace::RGB;
        write_image(image_from_array(arr, cs), path);
      },
      py::arg("image"), py::arg("path"),
      "Write an RGB (H x W x 3) or grayscale (H x W) array as PNG or BMP.");

  m.def(
      "enhance",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> rgb,
         const std::string& space, const std::string& method) {
        PlanarImage img = image_from_array(rgb, Colorspace::RGB);
        return image_to_array(enhance_image(img, space_from_string(space),
                                            method_from_string(method)));
      },
      py::arg("rgb"), py::arg("space") = "hsi", py::arg("method") = "norm",
      "Wavelet-domain illumination enhancement; the result stays in the "
      "requested colorspace.");

  m.def(
      "lbp",
      [](py::array_t<double, py::array::c_style | py::array::forcecast>
             plane) {
        LbpImage img = lbp(plane_from_array(plane));
        py::array_t<int> out({img.height, img.width});
        std::copy(img.labels.begin(), img.labels.end(), out.mutable_data());
        return out;
      },
      py::arg("plane"),
      "8-neighbor local binary pattern codes of the interior pixels.");

  m.def(
      "detect",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> rgb) {
        FaceRegion face =
            segment_face(image_from_array(rgb, Colorspace::RGB));
        py::array_t<uint8_t> mask({face.mask.height, face.mask.width});
        std::copy(face.mask.bits.begin(), face.mask.bits.end(),
                  mask.mutable_data());
        return py::make_tuple(
            py::make_tuple(face.bbox.x, face.bbox.y, face.bbox.w,
                           face.bbox.h),
            mask);
      },
      py::arg("rgb"),
      "Skin-based face localization; returns ((x, y, w, h), mask).");

  m.def(
      "signatures",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> rgb,
         const std::vector<std::string>& channels, int grid_rows,
         int grid_cols, int bins, const std::string& metric,
         const std::string& method, const std::string& space) {
        PipelineConfig cfg = config_from_kwargs(
            channels, grid_rows, grid_cols, bins, metric, method, space);
        std::vector<Signature> sigs =
            extract_signatures(image_from_array(rgb, Colorspace::RGB), cfg);
        py::dict out;
        for (const Signature& s : sigs) {
          std::vector<py::ssize_t> shape{
              static_cast<py::ssize_t>(s.values.size())};
          py::array_t<double> v(shape);
          std::copy(s.values.begin(), s.values.end(), v.mutable_data());
          out[to_string(s.channel).c_str()] = v;
        }
        return out;
      },
      py::arg("rgb"),
      py::arg("channels") = std::vector<std::string>{"H", "S", "I"},
      py::arg("grid_rows") = 4, py::arg("grid_cols") = 4,
      py::arg("bins") = 256, py::arg("metric") = "kld",
      py::arg("method") = "norm", py::arg("space") = "hsi",
      "Per-channel regional LBP signatures of the detected face.");

  m.def(
      "distance",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> a,
         py::array_t<double, py::array::c_style | py::array::forcecast> b,
         const std::string& metric, int block_size) {
        auto m2 = metric_from_string(metric);
        if (!m2)
          throw Error(ErrorCode::BadArgument,
                      "unknown metric '" + metric + "'");
        std::vector<double> pa(a.data(), a.data() + a.size());
        std::vector<double> pb(b.data(), b.data() + b.size());
        return metric_distance(pa, pb, *m2, block_size);
      },
      py::arg("a"), py::arg("b"), py::arg("metric") = "kld",
      py::arg("block_size") = 0,
      "Distance between two flattened signatures.");

  m.def(
      "enroll",
      [](const std::string& root, const std::string& gallery_path,
         const std::vector<std::string>& channels, int grid_rows,
         int grid_cols, int bins, const std::string& metric,
         const std::string& method, const std::string& space) {
        PipelineConfig cfg = config_from_kwargs(
            channels, grid_rows, grid_cols, bins, metric, method, space);
        Gallery g = enroll(ingest(root), cfg);
        save_gallery(g, gallery_path);
        return g.subjects.size();
      },
      py::arg("root"), py::arg("gallery_path"),
      py::arg("channels") = std::vector<std::string>{"H", "S", "I"},
      py::arg("grid_rows") = 4, py::arg("grid_cols") = 4,
      py::arg("bins") = 256, py::arg("metric") = "kld",
      py::arg("method") = "norm", py::arg("space") = "hsi",
      "Enroll a dataset tree into a gallery file; returns the subject "
      "count.");

  m.def(
      "identify",
      [](const std::string& image, const std::string& gallery_path,
         const std::string& fusion, size_t top_k) {
        Gallery g = load_gallery(gallery_path);
        auto rule = fusion_from_string(fusion);
        if (!rule)
          throw Error(ErrorCode::BadArgument,
                      "unknown fusion rule '" + fusion + "'");
        std::vector<Signature> probe =
            extract_signatures(read_image(image), g.config);
        if (*rule == FusionRule::FVF) {
          RankedResult res = nearest_subject_fvf(fuse_sample(probe), g,
                                                 g.config.metric, top_k);
          py::list ranking;
          for (const RankedEntry& e : res.ranking)
            ranking.append(py::make_tuple(e.subject_id, e.score));
          return py::make_tuple(res.decision, ranking);
        }
        ChannelScores scores =
            normalize_scores(distance_table(probe, g, g.config.metric));
        std::string decision;
        switch (*rule) {
          case FusionRule::SUM: decision = sum_rule(scores); break;
          case FusionRule::MEDIAN: decision = median_rule(scores); break;
          default:
            decision = majority_vote(channel_decisions(scores), scores);
            break;
        }
        return py::make_tuple(decision, py::list());
      },
      py::arg("image"), py::arg("gallery_path"), py::arg("fusion") = "fvf",
      py::arg("top_k") = 5,
      "Identify a probe image against a gallery file; returns "
      "(decision, ranking).");

  m.def(
      "mutual_information",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> a,
         py::array_t<double, py::array::c_style | py::array::forcecast> b) {
        return channel_mutual_information(plane_from_array(a),
                                          plane_from_array(b));
      },
      py::arg("a"), py::arg("b"),
      "Normalized mutual information (percent) of two planes.");
}

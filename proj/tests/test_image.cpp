#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "clbp/image.hpp"
#include "support/synth.hpp"

using namespace clbp;

namespace {

PlanarImage single_pixel_rgb(double r, double g, double b) {
  PlanarImage img(1, 1, Colorspace::RGB);
  img.planes[0].data[0] = r;
  img.planes[1].data[0] = g;
  img.planes[2].data[0] = b;
  return img;
}

PlanarImage random_rgb(int w, int h, uint64_t& state) {
  PlanarImage img(w, h, Colorspace::RGB);
  for (Plane& p : img.planes)
    for (double& v : p.data) v = 255.0 * synth::uniform(state);
  return img;
}

}  // namespace

TEST_CASE("rgb_to_hsi handles the zero-saturation singularity") {
  PlanarImage hsi = rgb_to_hsi(single_pixel_rgb(100, 100, 100));
  CHECK(hsi.planes[0].data[0] == 0.0);
  CHECK(hsi.planes[1].data[0] == doctest::Approx(0.0));
  CHECK(hsi.planes[2].data[0] == doctest::Approx(100.0));
}

TEST_CASE("rgb_to_hsi pure red") {
  PlanarImage hsi = rgb_to_hsi(single_pixel_rgb(255, 0, 0));
  CHECK(hsi.planes[0].data[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hsi.planes[1].data[0] == doctest::Approx(1.0));
  CHECK(hsi.planes[2].data[0] == doctest::Approx(85.0));
}

TEST_CASE("rgb_to_hsi matches an independent arccos evaluation") {
  const double r = 200, g = 150, b = 100;
  // independent route: direct formula evaluation
  double theta = std::acos(0.5 * ((r - g) + (r - b)) /
                           std::sqrt((r - g) * (r - g) + (r - b) * (g - b)));
  if (b > g) theta = 2.0 * std::numbers::pi - theta;
  double want_h = theta / (2.0 * std::numbers::pi);
  double want_s = 1.0 - 3.0 * std::min({r, g, b}) / (r + g + b);
  double want_i = (r + g + b) / 3.0;

  PlanarImage hsi = rgb_to_hsi(single_pixel_rgb(r, g, b));
  CHECK(hsi.planes[0].data[0] == doctest::Approx(want_h).epsilon(1e-12));
  CHECK(hsi.planes[1].data[0] == doctest::Approx(want_s).epsilon(1e-12));
  CHECK(hsi.planes[2].data[0] == doctest::Approx(want_i).epsilon(1e-12));
}

TEST_CASE("rgb_to_hsi requires RGB input") {
  PlanarImage g(2, 2, Colorspace::GRAY);
  CHECK_THROWS_AS(rgb_to_hsi(g), Error);
}

TEST_CASE("H and S are invariant to global intensity scaling") {
  uint64_t state = 7;
  PlanarImage img = random_rgb(16, 16, state);
  PlanarImage scaled = img;
  for (Plane& p : scaled.planes)
    for (double& v : p.data) v *= 0.5;
  PlanarImage a = rgb_to_hsi(img), b = rgb_to_hsi(scaled);
  for (size_t i = 0; i < a.planes[0].size(); ++i) {
    if (a.planes[1].data[i] < 1e-9) continue;  // S singularity
    CHECK(a.planes[0].data[i] == doctest::Approx(b.planes[0].data[i]).epsilon(1e-9));
    CHECK(a.planes[1].data[i] == doctest::Approx(b.planes[1].data[i]).epsilon(1e-9));
  }
}

TEST_CASE("rgb_to_ycbcr achromatic axis and white point") {
  for (double v : {0.0, 100.0, 255.0}) {
    PlanarImage out = rgb_to_ycbcr(single_pixel_rgb(v, v, v));
    CHECK(out.planes[0].data[0] == doctest::Approx(v));
    CHECK(out.planes[1].data[0] == doctest::Approx(128.0));
    CHECK(out.planes[2].data[0] == doctest::Approx(128.0));
  }
}

TEST_CASE("rgb_to_ycbcr matrix evaluation for pure red") {
  PlanarImage out = rgb_to_ycbcr(single_pixel_rgb(255, 0, 0));
  CHECK(out.planes[0].data[0] == doctest::Approx(0.299 * 255).epsilon(1e-12));
  CHECK(out.planes[1].data[0] ==
        doctest::Approx(128.0 - 0.168736 * 255).epsilon(1e-12));
  CHECK(out.planes[2].data[0] ==
        doctest::Approx(128.0 + 0.5 * 255).epsilon(1e-12));
}

TEST_CASE("ghe maps a constant plane to 255") {
  Plane p(8, 8, 42.0);
  Plane out = ghe(p);
  for (double v : out.data) CHECK(v == 255.0);
}

TEST_CASE("ghe on an exactly uniform raster is near identity") {
  // 256 levels, 4 pixels each
  Plane p(32, 32);
  for (int i = 0; i < 1024; ++i) p.data[i] = i / 4;
  Plane out = ghe(p);
  for (int i = 0; i < 1024; ++i) {
    double level = p.data[i];
    // CDF(l) = (l+1)/256, mapped value round(255(l+1)/256)
    CHECK(std::abs(out.data[i] - level) <= 1.0);
  }
}

TEST_CASE("ghe two-level plane maps to 127 and 255") {
  Plane p(4, 2);
  for (int i = 0; i < 4; ++i) p.data[i] = 0.0;
  for (int i = 4; i < 8; ++i) p.data[i] = 255.0;
  Plane out = ghe(p);
  for (int i = 0; i < 4; ++i) CHECK(out.data[i] == 127.0);  // floor(255*0.5)
  for (int i = 4; i < 8; ++i) CHECK(out.data[i] == 255.0);
}

TEST_CASE("ghe is idempotent up to one level") {
  uint64_t state = 11;
  Plane p(24, 24);
  for (double& v : p.data) v = 255.0 * synth::uniform(state);
  Plane once = ghe(p);
  Plane twice = ghe(once);
  for (size_t i = 0; i < p.size(); ++i)
    CHECK(std::abs(once.data[i] - twice.data[i]) <= 1.0);
}

TEST_CASE("ghe rejects an empty plane") {
  CHECK_THROWS_AS(ghe(Plane{}), Error);
}

TEST_CASE("pdf point mass and uniform cases") {
  Plane c(5, 5, 17.0);
  PdfVector mass = pdf(c, 256);
  CHECK(mass.values[17] == 1.0);
  for (int i = 0; i < 256; ++i)
    if (i != 17) CHECK(mass.values[i] == 0.0);

  Plane u(64, 8);
  for (int i = 0; i < 512; ++i) u.data[i] = i / 2;
  PdfVector flat = pdf(u, 256);
  for (double v : flat.values) CHECK(v == doctest::Approx(1.0 / 256));
}

TEST_CASE("coarse pdf bins are exact block sums of the 256-bin pdf") {
  uint64_t state = 3;
  Plane p(31, 17);
  for (double& v : p.data) v = 255.0 * synth::uniform(state);
  PdfVector fine = pdf(p, 256);
  for (int bins : {32, 64, 128}) {
    PdfVector coarse = pdf(p, bins);
    int factor = 256 / bins;
    for (int b = 0; b < bins; ++b) {
      double sum = 0.0;
      for (int k = 0; k < factor; ++k) sum += fine.values[b * factor + k];
      CHECK(coarse.values[b] == doctest::Approx(sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("pdf sums to one") {
  uint64_t state = 5;
  for (int trial = 0; trial < 20; ++trial) {
    Plane p(9 + trial, 7);
    for (double& v : p.data) v = 255.0 * synth::uniform(state);
    for (int bins : {32, 64, 128, 256}) {
      PdfVector h = pdf(p, bins);
      double sum = 0.0;
      for (double v : h.values) {
        CHECK(v >= 0.0);
        sum += v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

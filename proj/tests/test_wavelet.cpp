#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "clbp/illumination.hpp"
#include "clbp/wavelet.hpp"
#include "support/synth.hpp"

using namespace clbp;

namespace {

Plane random_plane(int w, int h, uint64_t& state, double scale = 255.0) {
  Plane p(w, h);
  for (double& v : p.data) v = scale * synth::uniform(state);
  return p;
}

double max_abs_diff(const Plane& a, const Plane& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

double mean(const Plane& p) {
  double s = 0.0;
  for (double v : p.data) s += v;
  return s / static_cast<double>(p.size());
}

}  // namespace

TEST_CASE("dwt2 of a constant plane concentrates everything in LL") {
  Plane p(4, 4, 7.0);
  SubbandSet s = dwt2(p);
  for (double v : s.ll.data) CHECK(v == doctest::Approx(14.0).epsilon(1e-12));
  for (const Plane* d : {&s.lh, &s.hl, &s.hh})
    for (double v : d->data) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("dwt2 2x2 matches the hand-evaluated Haar kernel") {
  Plane p(2, 2);
  double a = 1.0, b = 2.0, c = 3.0, d = 4.0;
  p.at(0, 0) = a;
  p.at(1, 0) = b;
  p.at(0, 1) = c;
  p.at(1, 1) = d;
  SubbandSet s = dwt2(p);
  CHECK(s.ll.data[0] == doctest::Approx((a + b + c + d) / 2).epsilon(1e-12));
  CHECK(s.lh.data[0] == doctest::Approx((a + b - c - d) / 2).epsilon(1e-12));
  CHECK(s.hl.data[0] == doctest::Approx((a - b + c - d) / 2).epsilon(1e-12));
  CHECK(s.hh.data[0] == doctest::Approx((a - b - c + d) / 2).epsilon(1e-12));
}

TEST_CASE("round trip is exact for even and odd shapes") {
  uint64_t state = 42;
  for (int w : {2, 3, 8, 15, 33})
    for (int h : {2, 5, 16, 33}) {
      Plane p = random_plane(w, h, state);
      CHECK(max_abs_diff(idwt2(dwt2(p)), p) <= 1e-9);
    }
}

TEST_CASE("idwt2 of zero sub-bands is a zero plane") {
  SubbandSet s;
  s.ll = s.lh = s.hl = s.hh = Plane(3, 3, 0.0);
  s.original_width = 6;
  s.original_height = 6;
  Plane out = idwt2(s);
  for (double v : out.data) CHECK(v == 0.0);
}

TEST_CASE("idwt2 rejects mismatched sub-band shapes") {
  SubbandSet s;
  s.ll = Plane(3, 3);
  s.lh = Plane(2, 3);
  s.hl = s.hh = Plane(3, 3);
  CHECK_THROWS_AS(idwt2(s), Error);
}

TEST_CASE("dwt2 rejects planes smaller than 2x2") {
  CHECK_THROWS_AS(dwt2(Plane(1, 5)), Error);
}

TEST_CASE("scaling LL alone scales the reconstruction mean") {
  uint64_t state = 9;
  Plane p = random_plane(16, 12, state);
  SubbandSet s = dwt2(p);
  for (double& v : s.ll.data) v *= 1.7;
  Plane out = idwt2(s);
  CHECK(mean(out) == doctest::Approx(1.7 * mean(p)).epsilon(1e-9));
}

TEST_CASE("zeta is 1 for identical inputs and homogeneous in the reference") {
  uint64_t state = 13;
  Plane a = random_plane(8, 8, state);
  CHECK(zeta_svd(a, a).zeta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(zeta_norm(a, a).zeta == doctest::Approx(1.0).epsilon(1e-9));
  Plane doubled = a;
  for (double& v : doubled.data) v *= 2.0;
  CHECK(zeta_svd(a, doubled).zeta == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(zeta_norm(a, doubled).zeta == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("zeta_norm on rank-1 matrices") {
  Plane u(6, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 6; ++x) u.at(x, y) = (y + 1.0) * (x + 0.5);
  Plane tripled = u;
  for (double& v : tripled.data) v *= 3.0;
  CHECK(zeta_norm(u, tripled).zeta == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("zeta_svd rejects an all-zero input matrix") {
  Plane z(4, 4, 0.0);
  Plane r(4, 4, 1.0);
  CHECK_THROWS_AS(zeta_svd(z, r), Error);
  CHECK_THROWS_AS(zeta_norm(z, r), Error);
}

TEST_CASE("spectral norm matches a power-iteration oracle on random 8x8") {
  uint64_t state = 77;
  for (int trial = 0; trial < 20; ++trial) {
    Plane a = random_plane(8, 8, state, 1.0);
    Plane b = random_plane(8, 8, state, 1.0);
    double zs = zeta_svd(a, b).zeta;
    double zn = zeta_norm(a, b).zeta;
    CHECK(std::abs(zs - zn) <= 1e-6 * zn);
  }
}

TEST_CASE("enhance_plane fixed point when the plane equals its GHE") {
  // GHE of this plane is itself: levels spread exactly uniformly
  Plane p(16, 16);
  for (int i = 0; i < 256; ++i) p.data[i] = i;
  Plane g = ghe(p);
  // use the actual fixed point of ghe as input
  Plane fp = g;
  for (int i = 0; i < 3; ++i) fp = ghe(fp);
  EnhanceResult res = enhance_plane_detail(fp, ZetaMethod::NORM_RATIO);
  CHECK(res.zeta == doctest::Approx(1.0).epsilon(1e-9));
  for (size_t i = 0; i < fp.size(); ++i)
    CHECK(std::abs(res.output.data[i] - fp.data[i]) <= 1.0);
}

TEST_CASE("darkened images brighten under enhancement") {
  uint64_t state = 21;
  Plane p = random_plane(32, 32, state);
  Plane dark = p;
  for (double& v : dark.data) v *= 0.5;
  EnhanceResult res = enhance_plane_detail(dark, ZetaMethod::NORM_RATIO);
  CHECK(res.zeta > 1.0);
  CHECK(mean(res.output) > mean(dark));
}

TEST_CASE("pre-clamp mean law holds for even dimensions") {
  uint64_t state = 33;
  for (int trial = 0; trial < 10; ++trial) {
    Plane p = random_plane(16 + 2 * trial, 20, state);
    EnhanceResult res = enhance_plane_detail(p, ZetaMethod::NORM_RATIO);
    CHECK(mean(res.pre_clamp) ==
          doctest::Approx(res.zeta * mean(p)).epsilon(1e-6));
  }
}

TEST_CASE("enhancement preserves plane dimensions") {
  uint64_t state = 55;
  for (auto [w, h] : {std::pair{9, 13}, {16, 7}, {21, 21}}) {
    Plane p = random_plane(w, h, state);
    Plane out = enhance_plane(p, ZetaMethod::NORM_RATIO);
    CHECK(out.width == w);
    CHECK(out.height == h);
  }
}

TEST_CASE("enhance_image HSI routing leaves H and S untouched") {
  uint64_t state = 88;
  PlanarImage rgb(24, 24, Colorspace::RGB);
  for (Plane& p : rgb.planes)
    for (double& v : p.data) v = 40.0 + 150.0 * synth::uniform(state);
  PlanarImage hsi = rgb_to_hsi(rgb);
  PlanarImage out = enhance_image(rgb, Colorspace::HSI);
  CHECK(out.colorspace == Colorspace::HSI);
  CHECK(out.planes[0].data == hsi.planes[0].data);
  CHECK(out.planes[1].data == hsi.planes[1].data);
}

TEST_CASE("enhance_image rejects non-RGB input") {
  PlanarImage g(8, 8, Colorspace::GRAY);
  CHECK_THROWS_AS(enhance_image(g, Colorspace::HSI), Error);
}

TEST_CASE("enhancement pulls renderings of one scene together") {
  uint64_t state = 99;
  Plane base = random_plane(32, 32, state);
  for (double& v : base.data) v = 60.0 + 0.5 * v;  // mid-range scene
  Plane dark = base, bright = base;
  for (double& v : dark.data) v *= 0.55;
  for (double& v : bright.data) v = std::min(255.0, v * 1.35);

  auto mad = [](const Plane& a, const Plane& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
      s += std::abs(a.data[i] - b.data[i]);
    return s / static_cast<double>(a.size());
  };
  double before = mad(dark, base) + mad(bright, base) + mad(dark, bright);
  Plane eb = enhance_plane(base, ZetaMethod::NORM_RATIO);
  Plane ed = enhance_plane(dark, ZetaMethod::NORM_RATIO);
  Plane ebr = enhance_plane(bright, ZetaMethod::NORM_RATIO);
  double after = mad(ed, eb) + mad(ebr, eb) + mad(ed, ebr);
  CHECK(after < before);
}

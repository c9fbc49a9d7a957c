#include <doctest.h>

#include <algorithm>

#include "holodyn/errors.hpp"
#include "holodyn/julia.hpp"
#include "../support/oracles.hpp"

using namespace holodyn;

namespace {

using K = CellCode::Kind;

double real_repelling_point() {
  return oracle::bisect([](double x) { return 0.3 * std::exp(x) - x; }, 1.0, 3.0);
}

RasterGrid synthetic(int w, int h) {
  RasterGrid g;
  g.box = Box::square(1.0);
  g.width = w;
  g.height = h;
  g.cells.assign(static_cast<std::size_t>(w) * h, CellCode{});
  return g;
}

}  // namespace

TEST_CASE("raster_escape: 0.3 e^z is dominated by one basin on [-3,3]^2") {
  const RasterGrid g = raster_escape(parse("0.3*exp(z)"), Box::square(3.0), 200, 200, 200);
  CHECK(g.count(K::Converged) >= 0.99 * 200 * 200);
  REQUIRE(g.attractors.size() == 1);
}

TEST_CASE("raster_escape: real-axis transition brackets the repelling fixed point") {
  const double x0 = real_repelling_point();
  CHECK(std::abs(x0 - 1.7806) < 1e-3);
  // 201 rows put the middle row exactly on the real axis.
  const RasterGrid g = raster_escape(parse("0.3*exp(z)"), Box{0, 10, -5, 5}, 200, 201, 200);
  CHECK(g.count(K::Converged) > 0);
  CHECK(g.count(K::EscapeStep) > 0);
  const int row = 100;
  REQUIRE(g.center(0, row).imag() == 0.0);
  int first = -1;
  for (int c = 0; c < g.width; ++c)
    if (g.at(c, row).kind == K::EscapeStep) {
      first = c;
      break;
    }
  REQUIRE(first > 0);
  CHECK(g.at(first - 1, row).kind == K::Converged);
  const double cw = g.box.width() / g.width;
  CHECK(g.center(first - 1, row).real() <= x0);
  CHECK(g.center(first, row).real() >= x0);
  CHECK(g.center(first, row).real() - g.center(first - 1, row).real() <= cw + 1e-12);

  const RasterGrid b = boundary_extract(g);
  CHECK(b.at(first, row).kind == K::JNear);
  CHECK(b.at(first - 1, row).kind == K::JNear);
}

TEST_CASE("raster_escape: escaping points are dense for e^z") {
  const RasterGrid g = raster_escape(parse("exp(z)"), Box::square(2.0), 100, 100, 50);
  for (int bi = 0; bi < 10; ++bi)
    for (int bj = 0; bj < 10; ++bj) {
      bool any = false;
      for (int c = 0; c < 10 && !any; ++c)
        for (int r = 0; r < 10 && !any; ++r) any = g.at(bi * 10 + c, bj * 10 + r).kind == K::EscapeStep;
      CHECK(any);
    }
}

TEST_CASE("raster_preimage: 2 tan z marks only the real axis") {
  const RasterGrid g = raster_preimage(parse("2*tan(z)"), Box::square(4.0), 200, 200, 2);
  REQUIRE(g.count(K::JNear) > 0);
  const double ch = g.box.height() / g.height;
  for (int r = 0; r < g.height; ++r)
    for (int c = 0; c < g.width; ++c)
      if (g.at(c, r).kind == K::JNear) CHECK(std::abs(g.center(c, r).imag()) < ch);
}

TEST_CASE("raster_preimage: 0.5 tan z leaves every row broken") {
  const RasterGrid g = raster_preimage(parse("0.5*tan(z)"), Box::square(4.0), 100, 100, 3);
  for (int r = 0; r < g.height; ++r) {
    bool gap = false;
    for (int c = 0; c < g.width && !gap; ++c) gap = g.at(c, r).kind != K::JNear;
    CHECK(gap);
  }
}

TEST_CASE("raster_preimage: poles of tan at depth 1") {
  const RasterGrid g = raster_preimage(parse("tan(z)"), Box::square(5.0), 50, 50, 1);
  std::vector<std::pair<int, int>> expect;
  for (double x : {-1.5 * kPi, -0.5 * kPi, 0.5 * kPi, 1.5 * kPi}) {
    int c = 0, r = 0;
    REQUIRE(g.locate(x, c, r));
    expect.emplace_back(c, r);
  }
  CHECK(g.count(K::JNear) == expect.size());
  for (auto [c, r] : expect) CHECK(g.at(c, r).kind == K::JNear);
}

TEST_CASE("raster_preimage: exceptional target propagates") {
  CHECK_THROWS_AS(raster_preimage(parse("exp(z)"), Box::square(2.0), 20, 20, 1, Complex(0.0)), TargetExceptional);
}

TEST_CASE("raster_preimage: images of JNear cells stay near JNear") {
  const MeroFn f = parse("2*tan(z)");
  // An odd row count puts cell centers on the real axis. With an even count the
  // half-cell offset is stretched by |f'| > 2 and the images leave the band.
  const RasterGrid g = raster_preimage(f, Box::square(4.0), 200, 201, 3);
  int total = 0, good = 0;
  for (int r = 0; r < g.height; ++r)
    for (int c = 0; c < g.width; ++c) {
      if (g.at(c, r).kind != K::JNear) continue;
      ++total;
      const EvalOutcome v = f.eval(g.center(c, r));
      int cc = 0, rr = 0;
      if (!v.ok() || !g.locate(v.value, cc, rr)) {
        ++good;
        continue;
      }
      bool near = false;
      for (int dc = -1; dc <= 1; ++dc)
        for (int dr = -1; dr <= 1; ++dr) {
          const int x = cc + dc, y = rr + dr;
          if (x >= 0 && y >= 0 && x < g.width && y < g.height && g.at(x, y).kind == K::JNear) near = true;
        }
      good += near;
    }
  REQUIRE(total > 0);
  CHECK(good >= 0.95 * total);
}

TEST_CASE("boundary_extract: synthetic grids") {
  RasterGrid flat = synthetic(8, 8);
  for (auto& c : flat.cells) c = {K::Converged, 0};
  CHECK(boundary_extract(flat).count(K::JNear) == 0);

  RasterGrid check = synthetic(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c)
      check.at(c, r) = (r + c) % 2 ? CellCode{K::EscapeStep, 3} : CellCode{K::Converged, 0};
  CHECK(boundary_extract(check).count(K::JNear) == 64);
}

TEST_CASE("raster determinism and refinement stability") {
  const MeroFn f = parse("0.3*exp(z)");
  const Box box{0, 10, -5, 5};
  const RasterGrid a = raster_escape(f, box, 100, 100, 200);
  const RasterGrid b = raster_escape(f, box, 100, 100, 200);
  CHECK(a.cells == b.cells);

  const RasterGrid coarse = boundary_extract(a);
  const RasterGrid fine = boundary_extract(raster_escape(f, box, 200, 200, 200));
  // Any run of >= 4 JNear cells in a coarse row still has JNear cells in the
  // corresponding band of the fine grid, padded by one fine cell.
  for (int r = 0; r < coarse.height; ++r) {
    int run = 0;
    for (int c = 0; c <= coarse.width; ++c) {
      if (c < coarse.width && coarse.at(c, r).kind == K::JNear) {
        ++run;
        continue;
      }
      if (run >= 4) {
        bool found = false;
        for (int fc = std::max(0, 2 * (c - run) - 1); fc < std::min(fine.width, 2 * c + 1) && !found; ++fc)
          for (int fr = std::max(0, 2 * r - 1); fr < std::min(fine.height, 2 * r + 3) && !found; ++fr)
            found = fine.at(fc, fr).kind == K::JNear;
        CHECK(found);
      }
      run = 0;
    }
  }
}

TEST_CASE("render and PGM layout") {
  RasterGrid g = synthetic(3, 2);
  g.at(0, 0) = {K::Undecided, 0};
  g.at(1, 0) = {K::PoleHit, 0};
  g.at(2, 0) = {K::Converged, 5};
  g.at(0, 1) = {K::JNear, 0};
  g.at(1, 1) = {K::EscapeStep, 1};
  g.at(2, 1) = {K::EscapeStep, 9};
  const GrayImage img = render(g);
  REQUIRE(img.pixels.size() == 6);
  CHECK(img.pixels[0] == 0);
  CHECK(img.pixels[1] == 16);
  CHECK(img.pixels[2] == 32 + 16);
  CHECK(img.pixels[3] == 255);
  CHECK(img.pixels[4] >= 96);
  CHECK(img.pixels[4] < img.pixels[5]);
  CHECK(img.pixels[5] <= 254);

  const std::string pgm = encode_pgm(img);
  const std::string header = "P5\n3 2\n255\n";
  REQUIRE(pgm.size() == header.size() + 6);
  CHECK(pgm.substr(0, header.size()) == header);
  CHECK(static_cast<unsigned char>(pgm[header.size() + 3]) == 255);
}

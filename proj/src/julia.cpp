#include "holodyn/julia.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "holodyn/errors.hpp"
#include "holodyn/parallel.hpp"

namespace holodyn {

const char* to_string(CellCode::Kind k) {
  switch (k) {
    case CellCode::Kind::Undecided: return "Undecided";
    case CellCode::Kind::EscapeStep: return "EscapeStep";
    case CellCode::Kind::Converged: return "Converged";
    case CellCode::Kind::PoleHit: return "PoleHit";
    case CellCode::Kind::JNear: return "JNear";
  }
  return "?";
}

bool RasterGrid::locate(Complex z, int& col, int& row) const {
  if (!box.contains(z)) return false;
  col = static_cast<int>(std::floor((z.real() - box.re_min) / box.width() * width));
  row = static_cast<int>(std::floor((box.im_max - z.imag()) / box.height() * height));
  col = std::clamp(col, 0, width - 1);
  row = std::clamp(row, 0, height - 1);
  return true;
}

std::size_t RasterGrid::count(CellCode::Kind k) const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [k](const CellCode& c) { return c.kind == k; }));
}

namespace {

void check_raster(const Box& box, int width, int height) {
  if (!box.nondegenerate()) throw InvalidArgument("raster box is degenerate");
  if (width < 1 || height < 1) throw InvalidArgument("raster dimensions must be positive");
}

bool point_less(Complex a, Complex b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

}  // namespace

RasterGrid raster_escape(const MeroFn& f, const Box& box, int width, int height, int max_iters,
                         const OrbitParams& params) {
  check_raster(box, width, height);
  RasterGrid g;
  g.box = box;
  g.width = width;
  g.height = height;
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  g.cells.resize(n);
  std::vector<Complex> limits(n);
  std::vector<char> has_limit(n, 0);

  parallel_for(n, [&](std::size_t i) {
    const int col = static_cast<int>(i % width);
    const int row = static_cast<int>(i / width);
    const OrbitRecord rec = iterate(f, g.center(col, row), max_iters, params);
    CellCode& c = g.cells[i];
    switch (rec.fate.kind) {
      case Fate::Kind::Escaped: c = {CellCode::Kind::EscapeStep, rec.fate.step}; break;
      case Fate::Kind::HitPole: c = {CellCode::Kind::PoleHit, rec.fate.step}; break;
      case Fate::Kind::ConvergedTo:
      case Fate::Kind::CycleOfPeriod:
        c = {CellCode::Kind::Converged, 0};
        limits[i] = rec.fate.point;
        has_limit[i] = 1;
        break;
      case Fate::Kind::Undecided: break;
    }
  });

  // Attractor ids from the sorted list of distinct limits.
  std::vector<Complex> all;
  for (std::size_t i = 0; i < n; ++i)
    if (has_limit[i]) all.push_back(limits[i]);
  g.attractors = dedup_points(std::move(all), 1e-6);
  for (std::size_t i = 0; i < n; ++i) {
    if (!has_limit[i]) continue;
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    auto it = std::lower_bound(g.attractors.begin(), g.attractors.end(),
                               Complex(limits[i].real() - 1e-6, -1e300), point_less);
    for (; it != g.attractors.end() && it->real() <= limits[i].real() + 1e-6; ++it) {
      const double d = std::abs(*it - limits[i]);
      if (d < bd) {
        bd = d;
        best = static_cast<int>(it - g.attractors.begin());
      }
    }
    g.cells[i].value = best;
  }
  return g;
}

RasterGrid raster_preimage(const MeroFn& f, const Box& box, int width, int height, int depth,
                           ExtendedComplex target, const PreimageRasterParams& params) {
  check_raster(box, width, height);
  if (depth < 1) throw InvalidArgument("preimage depth must be >= 1");
  RasterGrid g;
  g.box = box;
  g.width = width;
  g.height = height;
  g.cells.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  const int seeds = params.seeds > 0 ? params.seeds : std::max(width, height);
  for (int k = 1; k <= depth; ++k) {
    std::vector<Complex> pts = preimages(f, target, k, box, seeds, params.preimage).points;
    if (pts.size() > params.cap) {
      // Stratified thinning: evenly spaced picks from the sorted list.
      std::vector<Complex> thin;
      thin.reserve(params.cap);
      for (std::size_t j = 0; j < params.cap; ++j) thin.push_back(pts[j * pts.size() / params.cap]);
      pts.swap(thin);
    }
    for (Complex p : pts) {
      int col = 0, row = 0;
      if (g.locate(p, col, row)) g.at(col, row) = {CellCode::Kind::JNear, k};
    }
  }
  return g;
}

RasterGrid boundary_extract(const RasterGrid& grid) {
  RasterGrid out = grid;
  auto escaping = [&](int c, int r) { return grid.at(c, r).kind == CellCode::Kind::EscapeStep; };
  for (int r = 0; r < grid.height; ++r) {
    for (int c = 0; c < grid.width; ++c) {
      bool esc = false, other = false;
      auto look = [&](int cc, int rr) {
        if (cc < 0 || rr < 0 || cc >= grid.width || rr >= grid.height) return;
        (escaping(cc, rr) ? esc : other) = true;
      };
      look(c, r);
      look(c - 1, r);
      look(c + 1, r);
      look(c, r - 1);
      look(c, r + 1);
      if (esc && other) out.at(c, r) = {CellCode::Kind::JNear, 0};
    }
  }
  return out;
}

GrayImage render(const RasterGrid& grid) {
  GrayImage img;
  img.width = grid.width;
  img.height = grid.height;
  img.pixels.resize(grid.cells.size());

  // Histogram equalization of escape steps onto 96..254.
  std::map<int, std::size_t> hist;
  for (const auto& c : grid.cells)
    if (c.kind == CellCode::Kind::EscapeStep) ++hist[c.value];
  std::map<int, std::uint8_t> level;
  std::size_t total = 0;
  for (const auto& [k, cnt] : hist) total += cnt;
  if (!hist.empty()) {
    const std::size_t first = hist.begin()->second;
    std::size_t cum = 0;
    for (const auto& [k, cnt] : hist) {
      cum += cnt;
      const double t = total > first ? static_cast<double>(cum - first) / static_cast<double>(total - first) : 0.5;
      level[k] = static_cast<std::uint8_t>(96 + std::lround(158.0 * t));
    }
  }
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    const CellCode& c = grid.cells[i];
    std::uint8_t v = 0;
    switch (c.kind) {
      case CellCode::Kind::Undecided: v = 0; break;
      case CellCode::Kind::PoleHit: v = 16; break;
      case CellCode::Kind::Converged: v = static_cast<std::uint8_t>(32 + 16 * (c.value % 4)); break;
      case CellCode::Kind::EscapeStep: v = level[c.value]; break;
      case CellCode::Kind::JNear: v = 255; break;
    }
    img.pixels[i] = v;
  }
  return img;
}

}  // namespace holodyn

// Raster indicators of the Julia set: escape time, preimage accumulation
// and the boundary of the escaping set.
#pragma once

#include <cstdint>
#include <vector>

#include "holodyn/core.hpp"
#include "holodyn/fnkit.hpp"
#include "holodyn/image.hpp"
#include "holodyn/orbit.hpp"

namespace holodyn {

struct CellCode {
  enum class Kind : std::uint8_t { Undecided, EscapeStep, Converged, PoleHit, JNear };
  Kind kind = Kind::Undecided;
  int value = 0;  // escape step (EscapeStep) or attractor id (Converged)
  bool operator==(const CellCode&) const = default;
};

const char* to_string(CellCode::Kind k);

struct RasterGrid {
  Box box;
  int width = 0;
  int height = 0;
  std::vector<CellCode> cells;     // row-major, row 0 at the top (largest Im)
  std::vector<Complex> attractors;  // Converged id -> limit point or cycle representative

  CellCode& at(int col, int row) { return cells[static_cast<std::size_t>(row) * width + col]; }
  const CellCode& at(int col, int row) const {
    return cells[static_cast<std::size_t>(row) * width + col];
  }
  /// Sample point of a cell (its center).
  Complex center(int col, int row) const { return box.lattice_point(col, row, width, height); }
  /// Cell containing z, or false when z is outside the box.
  bool locate(Complex z, int& col, int& row) const;
  std::size_t count(CellCode::Kind k) const;
};

/// Escape-time raster: each cell center is iterated with iterate().
/// Meaningful as J = boundary of the escaping set for entire maps only.
RasterGrid raster_escape(const MeroFn& f, const Box& box, int width, int height, int max_iters,
                         const OrbitParams& params = {});

struct PreimageRasterParams {
  int seeds = 0;  // lattice size per axis for the preimage search; 0 = max(width, height)
  std::size_t cap = 50000;  // points kept per level
  PreimageParams preimage;
};

/// Marks JNear on every cell containing a solution of f^k(z) = target for
/// some 1 <= k <= depth. Levels above the cap are thinned evenly in sorted
/// order. Propagates TargetExceptional.
RasterGrid raster_preimage(const MeroFn& f, const Box& box, int width, int height, int depth,
                           ExtendedComplex target = ExtendedComplex::infinity(),
                           const PreimageRasterParams& params = {});

/// JNear on each cell whose 4-neighbourhood (itself included) holds both an
/// EscapeStep and a non-EscapeStep code; other cells keep their code.
RasterGrid boundary_extract(const RasterGrid& grid);

/// Gray levels: Undecided 0, PoleHit 16, Converged 32 + 16 * (id mod 4),
/// EscapeStep 96..254 after histogram equalization, JNear 255.
GrayImage render(const RasterGrid& grid);

}  // namespace holodyn

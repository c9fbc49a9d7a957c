// Basic value types shared by every module: complex points, the extended
// plane, sampling rectangles and the engine-wide numerical constants.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

namespace holodyn {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Distance below which a known pole triggers PoleHit.
inline constexpr double kPoleTolerance = 1e-9;
/// Magnitude above which a division is treated as having hit a pole and
/// any other value as overflow.
inline constexpr double kOverflowCap = 1e300;

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// A point of the Riemann sphere: either a finite complex number or the
/// distinguished point at infinity.
class ExtendedComplex {
 public:
  constexpr ExtendedComplex() = default;
  constexpr ExtendedComplex(Complex z) : value_(z) {}  // NOLINT(implicit)
  constexpr ExtendedComplex(double x) : value_(x, 0.0) {}  // NOLINT(implicit)

  static constexpr ExtendedComplex infinity() {
    ExtendedComplex e;
    e.infinite_ = true;
    return e;
  }

  constexpr bool is_infinite() const { return infinite_; }
  /// Finite value; meaningless when is_infinite().
  constexpr Complex value() const { return value_; }

  friend constexpr bool operator==(const ExtendedComplex& a, const ExtendedComplex& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

 private:
  Complex value_{};
  bool infinite_ = false;
};

/// Axis-aligned rectangle [re_min, re_max] x [im_min, im_max].
struct Box {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  bool nondegenerate() const {
    return std::isfinite(re_min) && std::isfinite(re_max) && std::isfinite(im_min) &&
           std::isfinite(im_max) && re_max > re_min && im_max > im_min;
  }
  bool contains(Complex z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
  /// Center of lattice cell (i, j) of an n x n lattice, row 0 at the top.
  Complex lattice_point(int col, int row, int cols, int rows) const {
    const double x = re_min + width() * ((col + 0.5) / cols);
    const double y = im_min + height() * ((rows - row - 0.5) / rows);
    return {x, y};
  }

  static Box square(double half) { return Box{-half, half, -half, half}; }
};

}  // namespace holodyn

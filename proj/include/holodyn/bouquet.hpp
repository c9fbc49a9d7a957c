// Symbolic dynamics of E(z) = lambda e^z for 0 < lambda < 1/e: strip
// itineraries, endpoints by backward branches, and the shift check.
#pragma once

#include <span>
#include <vector>

#include "holodyn/core.hpp"

namespace holodyn {

struct BouquetConfig {
  double lambda = 0.3;
  int N = 1;
  int c = 2;       // right edge of the rectangles
  double q = 0.0;  // attracting real fixed point
};

/// lambda e^c > c + (2N + 1) pi
bool rectangle_condition(double lambda, int N, double c);

/// Throws LambdaOutOfRange unless 0 < lambda < 1/e, InvalidArgument if N < 1.
BouquetConfig configure(double lambda, int N);

Complex exp_lambda(const BouquetConfig& cfg, Complex z);

/// Strip index j of z (1 < Re z < c, |Im z - 2 pi j| < pi, |j| <= N), or
/// false when z lies in no strip.
bool strip_index(const BouquetConfig& cfg, Complex z, int& j);

struct ItineraryResult {
  bool complete = false;      // all k points lie in the strips
  std::vector<int> symbols;   // symbols of the points that did
  int exit_step = -1;         // first step outside the strips
};

ItineraryResult itinerary(const BouquetConfig& cfg, Complex z, int k);

/// Point whose first s.size() orbit points visit R_{s_0}, R_{s_1}, ...
/// Throws SymbolOutOfRange or BranchMiss.
Complex endpoint_from_itinerary(const BouquetConfig& cfg, std::span<const int> s);

/// itinerary(E(endpoint(s)), k) equals (s_1, ..., s_k). Requires s.size() >= k + 1.
bool verify_conjugacy(const BouquetConfig& cfg, std::span<const int> s, int k);

}  // namespace holodyn

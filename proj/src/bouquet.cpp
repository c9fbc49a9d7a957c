#include "holodyn/bouquet.hpp"

#include <cmath>

#include "holodyn/errors.hpp"

namespace holodyn {

bool rectangle_condition(double lambda, int N, double c) {
  return lambda * std::exp(c) > c + (2.0 * N + 1.0) * kPi;
}

BouquetConfig configure(double lambda, int N) {
  if (!(lambda > 0.0 && lambda < std::exp(-1.0))) throw LambdaOutOfRange(lambda);
  if (N < 1) throw InvalidArgument("symbol bound N must be >= 1");
  BouquetConfig cfg;
  cfg.lambda = lambda;
  cfg.N = N;
  // Bisection for lambda e^x = x on (0, 1); lambda e^x - x changes sign there.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (lambda * std::exp(mid) - mid > 0.0) lo = mid;
    else hi = mid;
  }
  cfg.q = 0.5 * (lo + hi);
  int c = 2;
  while (!rectangle_condition(lambda, N, c)) ++c;
  cfg.c = c;
  return cfg;
}

Complex exp_lambda(const BouquetConfig& cfg, Complex z) { return cfg.lambda * std::exp(z); }

bool strip_index(const BouquetConfig& cfg, Complex z, int& j) {
  if (!(z.real() > 1.0 && z.real() < cfg.c)) return false;
  const double k = std::round(z.imag() / kTwoPi);
  if (std::abs(z.imag() - kTwoPi * k) >= kPi || std::abs(k) > cfg.N) return false;
  j = static_cast<int>(k);
  return true;
}

ItineraryResult itinerary(const BouquetConfig& cfg, Complex z, int k) {
  if (k < 1) throw InvalidArgument("itinerary length must be >= 1");
  ItineraryResult r;
  Complex w = z;
  for (int step = 0; step < k; ++step) {
    int j = 0;
    if (!is_finite(w) || !strip_index(cfg, w, j)) {
      r.exit_step = step;
      return r;
    }
    r.symbols.push_back(j);
    w = exp_lambda(cfg, w);
  }
  r.complete = true;
  return r;
}

Complex endpoint_from_itinerary(const BouquetConfig& cfg, std::span<const int> s) {
  if (s.empty()) throw InvalidArgument("itinerary must be non-empty");
  for (int sym : s)
    if (std::abs(sym) > cfg.N) throw SymbolOutOfRange(sym, cfg.N);
  Complex w(0.5 * (1.0 + cfg.c), kTwoPi * s.back());
  for (std::size_t i = s.size() - 1; i-- > 0;) {
    w = std::log(w / cfg.lambda) + Complex(0.0, kTwoPi * s[i]);
    int j = 0;
    if (!strip_index(cfg, w, j) || j != s[i])
      throw BranchMiss("backward branch left rectangle R_" + std::to_string(s[i]) +
                       " at position " + std::to_string(i) + "; choose a larger c");
  }
  return w;
}

bool verify_conjugacy(const BouquetConfig& cfg, std::span<const int> s, int k) {
  if (k < 1 || s.size() < static_cast<std::size_t>(k) + 1)
    throw InvalidArgument("verify_conjugacy needs an itinerary of length >= k + 1");
  const Complex z = endpoint_from_itinerary(cfg, s);
  const ItineraryResult r = itinerary(cfg, exp_lambda(cfg, z), k);
  if (!r.complete) return false;
  for (int i = 0; i < k; ++i)
    if (r.symbols[static_cast<std::size_t>(i)] != s[static_cast<std::size_t>(i) + 1]) return false;
  return true;
}

}  // namespace holodyn

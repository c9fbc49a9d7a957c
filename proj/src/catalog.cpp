#include "holodyn/cli.hpp"

namespace holodyn::cli {

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"fatou1", "z + 1 + exp(-z)", FnClass::E,
       "invariant Baker domain containing the right half-plane",
       {"orbit", "periodic", "classify", "julia-escape"}},
      {"baker2", "1/z - exp(z)", FnClass::M, "meromorphic map with a 2-cycle of Baker domains",
       {"orbit", "periodic", "classify", "julia-preimage"}},
      {"wander1", "z - 1 + exp(-z) + 6.283185307179586*i", FnClass::E,
       "wandering domains drifting by 2 pi i per step",
       {"orbit", "periodic", "classify", "julia-escape"}},
      {"exp03", "0.3*exp(z)", FnClass::E, "lambda e^z with an attracting real fixed point",
       {"orbit", "periodic", "classify", "julia-escape", "bouquet"}},
      {"exp", "exp(z)", FnClass::E, "the exponential map; its Julia set is the whole plane",
       {"orbit", "periodic", "classify", "julia-escape"}},
      {"expz", "exp(z) + z", FnClass::E, "entire map without fixed points",
       {"orbit", "periodic", "classify", "julia-escape"}},
      {"tan2", "2*tan(z)", FnClass::M, "lambda tan z with real Julia set (lambda >= 1)",
       {"orbit", "periodic", "classify", "julia-preimage"}},
      {"tan05", "0.5*tan(z)", FnClass::M, "lambda tan z with a Cantor Julia set (|lambda| < 1)",
       {"orbit", "periodic", "classify", "julia-preimage"}},
      {"smale2", "z^3 - z + 0.7071067811865476", FnClass::Rational,
       "cubic whose Newton map has a superattracting 2-cycle",
       {"orbit", "periodic", "classify", "newton"}},
  };
  return entries;
}

const CatalogEntry* find_catalog(std::string_view key) {
  for (const auto& e : catalog())
    if (e.key == key) return &e;
  return nullptr;
}

}  // namespace holodyn::cli

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "holodyn/core.hpp"
#include "holodyn/expr.hpp"

namespace holodyn::poly {

/// Upper bound on the degree when the tree is a polynomial in z, nullopt otherwise.
std::optional<int> degree_bound(const expr::NodePtr& n);

/// Coefficients c[0] + c[1] z + ... of a polynomial tree, trailing
/// (numerically zero) leading terms trimmed. Requires degree_bound(n).
std::vector<Complex> coefficients(const expr::NodePtr& n);

Complex horner(std::span<const Complex> c, Complex z);

/// All complex roots (with repetition) by Aberth-Ehrlich iteration.
std::vector<Complex> roots(std::span<const Complex> c);

/// Groups of nearby roots: center is the cluster mean, count its size.
struct Cluster {
  Complex center;
  int count = 1;
};
std::vector<Cluster> cluster(std::span<const Complex> roots, double tol);

/// A root of multiplicity m is a simple root of p^(m-1): polish the cluster
/// center there by Newton. Returns the center unchanged if Newton wanders off.
Complex refine_multiple(std::span<const Complex> c, const Cluster& cl);

/// Roots grouped within tol and refined, multiplicities in count.
std::vector<Cluster> distinct_roots(std::span<const Complex> c, double tol);

}  // namespace holodyn::poly

#pragma once

#include <string>
#include <vector>

#include "gem3/complex.hpp"

namespace gem3 {

struct HomologyResult {
  long betti_1 = 0;
  std::vector<long> torsion;  // invariant factors > 1, each dividing the next
  bool operator==(const HomologyResult&) const = default;
  std::string str() const;
};

// H1 with integer coefficients of the closed pseudo-complex: cells are the
// gluing-groupoid orbits of vertices/edges/triangles, boundary matrices are
// reduced by Smith normal form over arbitrary-precision integers. If some
// edge orbit is orientation-inconsistent (identified with itself reversed),
// the complex is barycentrically subdivided once first, which makes every
// gluing label-preserving and hence orientable cell-by-cell.
HomologyResult homology_h1(const PseudoComplex& x);

// Smith-normal-form helpers over arbitrary precision integers (exposed for
// tests). Rows of `m` are relations; returns nonzero diagonal entries.
std::vector<std::string> smith_diagonal(std::vector<std::vector<long>> m);

}  // namespace gem3

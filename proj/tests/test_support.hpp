#pragma once

#include <random>
#include <string>

#include "gem3/complex.hpp"
#include "gem3/gem.hpp"

namespace gem3::test {

inline std::string fixture(const std::string& name) {
  return std::string(GEM3_FIXTURE_DIR) + "/" + name;
}

inline std::string rule_path(const std::string& name) {
  return std::string(GEM3_RULE_DIR) + "/" + name;
}

// Relabel vertices by a random permutation (colors fixed).
inline Gem permuted(const Gem& g, std::mt19937& rng) {
  std::vector<Vertex> perm(static_cast<size_t>(g.size()));
  for (Vertex v = 0; v < g.size(); ++v) perm[static_cast<size_t>(v)] = v;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<AdjRow> table(static_cast<size_t>(g.size()));
  for (Vertex v = 0; v < g.size(); ++v)
    for (Color c = 0; c < kColors; ++c)
      table[static_cast<size_t>(perm[static_cast<size_t>(v)])][c] =
          perm[static_cast<size_t>(g.nbr(v, c))];
  return Gem::build(table);
}

// One closed (not necessarily manifold) tetrahedron: face 0 <-> 1, 2 <-> 3.
inline PseudoComplex one_tet_closed() {
  PseudoComplex t;
  t.tets = 1;
  t.glue.assign(1, {});
  auto set = [&](int f, int f2, std::array<int, 4> map) {
    FaceGluing fg;
    fg.tet = 0;
    fg.face = f2;
    fg.map = map;
    t.glue[0][f] = fg;
  };
  set(0, 1, {-1, 0, 2, 3});
  set(1, 0, {1, -1, 2, 3});
  set(2, 3, {0, 1, -1, 2});
  set(3, 2, {0, 1, 3, -1});
  t.check_involutive();
  return t;
}

}  // namespace gem3::test

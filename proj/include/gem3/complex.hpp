#pragma once

#include <array>
#include <string>
#include <vector>

#include "gem3/gem.hpp"

namespace gem3 {

// One face gluing: face `face` of some tetrahedron maps onto face `face` of
// tetrahedron `tet` via `map` on the three labels != source face. Faces are
// labeled by their opposite vertex. tet < 0 means boundary.
struct FaceGluing {
  int tet = -1;
  int face = -1;
  std::array<int, 4> map{-1, -1, -1, -1};  // map[src label] = dst label
  bool boundary() const { return tet < 0; }
};

// Pseudo-triangulation: tetrahedra with involutive face gluings; faces may
// self-identify across distinct faces of one tetrahedron.
struct PseudoComplex {
  int tets = 0;
  std::vector<std::array<FaceGluing, 4>> glue;  // [tet][face]

  bool closed() const;
  bool connected() const;
  void check_involutive() const;  // throws NonInvolutiveGluing
};

// `.tri` format: "tri <n>"; lines "t f -> t' f' : abc" (1-based tets; the
// sorted non-f labels of t map to labels a,b,c of t'), or "t f -> boundary".
PseudoComplex parse_triangulation(const std::string& text);
PseudoComplex parse_triangulation(const std::string& text, bool allow_boundary);
std::string write_triangulation(const PseudoComplex& t);
PseudoComplex load_tri_file(const std::string& path);

// Barycentric subdivision. Chambers are flags (tet, permutation pi of
// {0,1,2,3}); the label-d vertex of a chamber is the barycenter of
// {pi0..pid}, so vertex labels are exactly the dimension colors and every
// chamber gluing is label-preserving:
//   color c in {0,1,2}: (t, pi) ~ (t, pi with positions c,c+1 swapped)
//   color 3:            across the gluing at face pi3 of t
PseudoComplex barycentric_subdivide(const PseudoComplex& t);

// True iff every gluing is total and label-preserving (the flag structure
// produced by barycentric_subdivide and gem_to_complex).
bool label_preserving(const PseudoComplex& t);

// Dual gem of a colored subdivision: one vertex per tetrahedron, the
// c-colored edge joins the tetrahedra glued along their c-faces.
Gem dual_gem(const PseudoComplex& t_prime);

// One tetrahedron per gem vertex, face c glued to face c of the c-neighbor
// by the label-preserving bijection.
PseudoComplex gem_to_complex(const Gem& g);

// Cross-regluing connected sum: unglue one interior face pair in each
// summand and reglue crosswise. Used by the linear-growth experiments.
PseudoComplex connected_sum(const PseudoComplex& a, const PseudoComplex& b);

}  // namespace gem3

#pragma once

#include <string>
#include <vector>

#include "gem3/gem.hpp"
#include "gem3/moves.hpp"

namespace gem3 {

// Combinatorial map view of a crystallization through a chosen color j:
// black vertices are jk-gons, white vertices ij-gons, one knit edge per
// j-colored gem edge, edge sides are the gem vertices (matched by 0-edges),
// map faces are the ik-gons. Rotations are induced by the canonical sphere
// embedding of the 0-missing residue.
struct KnitEdge {
  int black = -1, white = -1;
  Vertex side_left = -1;   // class-0 endpoint of the j-edge (black->white)
  Vertex side_right = -1;  // class-1 endpoint
};

struct KnitVertexView {
  bool black = false;
  std::vector<int> rotation;  // edge ids in cyclic face order of the gon
};

struct Knit {
  ColorTriple colors;
  std::vector<KnitEdge> edges;
  std::vector<KnitVertexView> blacks;
  std::vector<KnitVertexView> whites;
  std::vector<int> black_of_vertex;  // per gem vertex: its jk-gon id
  std::vector<int> white_of_vertex;  // per gem vertex: its ij-gon id
  std::vector<int> face_of_vertex;   // per gem vertex: its ik-gon id
  int face_count = 0;
  int outer_face = 0;
  Vertex outer_rep = 0;  // gem vertex whose ik-gon is the outer face

  int edge_of_vertex(Vertex side) const;  // knit edge carrying this side
  bool edge_touches_outer(int e) const;
  std::string dump() const;
};

// Requires a crystallization (unique 0-missing residue). The outer face is
// the ik-gon through `outer_rep` (default: gem vertex 0).
Knit gem_to_knit(const Gem& g, const ColorTriple& colors, Vertex outer_rep = 0);

// Rebuild the gem from rotations, side order and the side matching
// (0-edges); exact inverse of gem_to_knit on its outputs.
Gem knit_to_gem(const Knit& n, const std::vector<Vertex>& side_matching);
Gem knit_to_gem_of(const Gem& g, const ColorTriple& colors);  // round trip helper

// Structural predicates.
bool euler_ok(const Knit& n);  // V - E + F == 2
bool is_cactus(const Gem& g, const Knit& n);
bool has_black_trivial_angles(const Gem& g, const Knit& n);  // monovalent blacks

// Knit passes; each mutates the gem through the session (2-dipole creations
// only) and works relative to the outer face of the session's current knit.
struct KnitStageResult {
  Gem gem;
  MoveLog log;
};

KnitStageResult cactify(const Gem& g, const ColorTriple& colors);
KnitStageResult remove_black_trivial_angles(const Gem& g, const ColorTriple& colors);
KnitStageResult add_spikes(const Gem& g, const ColorTriple& colors);

// Session-level variants used by the pipeline (logs accumulate in s).
void cactify_in_session(MoveSession& s, const ColorTriple& colors, Vertex outer_rep);
void remove_black_trivial_angles_in_session(MoveSession& s, const ColorTriple& colors,
                                            Vertex outer_rep);
void add_spikes_in_session(MoveSession& s, const ColorTriple& colors, Vertex outer_rep);

}  // namespace gem3

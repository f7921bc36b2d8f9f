#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gem3/gem.hpp"
#include "gem3/moves.hpp"
#include "gem3/rules.hpp"

namespace gem3 {

enum class PairKind { None, Twistor, Antipole, PreTwistor, PreAntipole };

// Classification of a vertex pair against the twistor/antipole taxonomy.
// strong is the twistor color B; weak is the pre-variant partner A (the pair
// shares the 0B- and (nonzero minus B)-gons and is separated in 0A and the
// remaining pair). Full twistors leave weak = -1.
struct PairClass {
  PairKind kind = PairKind::None;
  Color strong = -1;
  Color weak = -1;
  bool same_class = false;
  int witness_zero = -1;   // shared {0,strong}-gon id
  int witness_mixed = -1;  // the other shared gon id
  std::string str() const;
};

// All six bigon partitions of a gem, for bulk classification.
struct BigonTable {
  std::array<std::array<ResiduePartition, 4>, 4> part;
  static BigonTable build(const Gem& g);
  int id(Color a, Color b, Vertex v) const {
    return a < b ? part[static_cast<size_t>(a)][static_cast<size_t>(b)].id_of[v]
                 : part[static_cast<size_t>(b)][static_cast<size_t>(a)].id_of[v];
  }
};

PairClass classify_pair(const Gem& g, Vertex u, Vertex v, const ColorTriple& colors);
PairClass classify_pair(const Gem& g, const BigonTable& bt, Vertex u, Vertex v,
                        const ColorTriple& colors);
// True iff the pair is one of the four i-pair variants (ji/ki pre-twistor or
// pre-antipole).
bool is_i_pair(const PairClass& pc, const ColorTriple& colors);

struct GjkEdge {
  int node_u = -1, node_v = -1;  // jk-gon ids
  Vertex u = -1, v = -1;         // the labeling i-pair
  PairClass tag;
};

// Multigraph on the jk-gons whose edges are the i-pairs. Parallel edges
// allowed, loops impossible.
struct GjkGraph {
  int nodes = 0;
  std::vector<int> node_of_vertex;
  std::vector<GjkEdge> edges;
  bool connected() const;
};

GjkGraph build_gjk(const Gem& g, const ColorTriple& colors);

struct SpanningTree {
  std::vector<int> edge_ids;  // p = nodes - 1 edges into GjkGraph::edges
};

// Deterministic spanning tree preferring pre-twistor edges with pairwise
// disjoint labels; NoPreTwistorTree if only mixed trees exist.
SpanningTree spanning_tree(const GjkGraph& h);

struct TwistorRecord {
  Vertex u = -1, v = -1;
  Color strong = -1;  // j or k; the twist exchanges (strong, i)-neighbors
  int node_u = -1, node_v = -1;
  int shared_zero = -1, shared_mixed = -1;
};

// Double-8 promotion of a pre-twistor tree edge into a full twistor whose
// labels avoid `used`. Returns the selected label pair.
TwistorRecord promote_pretwistor(MoveSession& s, const GjkEdge& edge,
                                 const ColorTriple& colors,
                                 const std::vector<Vertex>& used);

// Exchange the a- and b-colored neighbors of a confirmed twistor pair.
MoveOutcome ji_twist(const Gem& g, Vertex u, Vertex v, Color a, Color b);
void ji_twist_in_session(MoveSession& s, Vertex u, Vertex v, Color a, Color b,
                         const ColorTriple& colors);

// The 2-by-34 hinge localization; returns the designated pair inside the
// fresh gadget. The gadget rule is permuted to the run's colors and to the
// record's strong color.
struct LocalizeResult {
  Vertex new_u = -1, new_v = -1;
};
LocalizeResult localize_hinge(MoveSession& s, const RewriteRule& gadget,
                              const TwistorRecord& rec, const ColorTriple& colors);
RewriteRule gadget_rule_for(const RewriteRule& gadget_base,
                            const ColorTriple& colors, Color strong);

struct HingeDescriptor {
  Vertex u = -1, v = -1;
  PairClass tag;
  int shared_zero = -1, shared_mixed = -1;
  // dual triangles t_ui, t_uB, t_vB, t_vi as (gem vertex, color) refs in
  // cyclic strip order; consecutive triangles share a dual edge
  std::array<std::pair<Vertex, Color>, 4> strip;
  std::array<int, 4> strip_link_gons{};  // bigon ids realizing the adjacency
  std::string line(const ColorTriple& colors) const;
};

HingeDescriptor hinge_descriptor(const Gem& g, Vertex u, Vertex v, Color strong,
                                 const ColorTriple& colors);

struct ClusterSite {
  Vertex center = -1;
  std::vector<Vertex> closure;  // 9 vertices including the center
};

// Best-effort 94-cluster probe: vertices with four length-4 bigons whose
// closure has nine vertices.
std::vector<ClusterSite> find_94_clusters(const Gem& g);

}  // namespace gem3

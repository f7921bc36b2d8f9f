#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gem3 {

using Vertex = std::int32_t;
using Color = int;

inline constexpr int kColors = 4;

// Single exception type; `kind` carries the spec-level error name
// (NonSymmetricAdjacency, NotBipartite, StaleDipole, ...).
struct Error : std::runtime_error {
  std::string kind;
  Error(std::string k, const std::string& msg)
      : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
  throw Error(kind, msg);
}

using AdjRow = std::array<Vertex, 4>;

// A gem: finite 4-regular multigraph with a proper edge coloring by
// {0,1,2,3} and a vertex bipartition. Vertices are dense ids 0..n-1.
// Immutable after build; mutation goes through MoveSession (moves.hpp).
class Gem {
 public:
  Gem() = default;

  // Validates symmetry (adj[adj[v][c]][c] == v), absence of half-loops and
  // bipartiteness. The manifold condition is checked separately by
  // validate_manifold so damaged gems stay representable.
  static Gem build(const std::vector<AdjRow>& table);

  Vertex size() const { return static_cast<Vertex>(adj_.size()); }
  Vertex nbr(Vertex v, Color c) const { return adj_[v][c]; }
  const AdjRow& row(Vertex v) const { return adj_[v]; }
  const std::vector<AdjRow>& table() const { return adj_; }
  int cls(Vertex v) const { return cls_[v]; }
  bool connected() const;

 private:
  std::vector<AdjRow> adj_;
  std::vector<std::int8_t> cls_;
};

// The unique 2-vertex gem (minimal S^3 gem).
Gem gem_s3_2();

struct Residue {
  std::vector<Color> colors;     // 2 or 3 colors, increasing
  std::vector<Vertex> vertices;  // cyclic order for bigons, BFS order else
  int id = 0;
};

// Partition of V(G) into residues of a color set, with per-vertex ids.
struct ResiduePartition {
  std::vector<int> id_of;  // residue id per vertex
  int count = 0;
};

std::vector<Residue> residues(const Gem& g, const std::vector<Color>& colors);
ResiduePartition bigon_partition(const Gem& g, Color a, Color b);
ResiduePartition triple_partition(const Gem& g, Color missing);
// Cyclic vertex order of one bigon through `v`.
std::vector<Vertex> bigon_through(const Gem& g, Color a, Color b, Vertex v);

struct ManifoldReportLine {
  std::array<Color, 3> colors;
  int residue_id;
  Vertex v;
  long e;
  long b;
  bool pass;
};

struct ManifoldReport {
  bool pass = false;
  bool connected = false;
  std::vector<ManifoldReportLine> lines;
  std::string summary() const;
};

// Per 3-residue Euler check v - e + b = 2 (e = 3v/2). Overall pass iff all
// residues pass; disconnectedness is flagged but does not fail the report.
ManifoldReport validate_manifold(const Gem& g);

struct CrystallizationCheck {
  bool ok = false;
  // witness 1-dipole (vertex, color of joining edge) when not a crystallization
  std::optional<std::pair<Vertex, Color>> witness;
};

CrystallizationCheck is_crystallization(const Gem& g);

// Deterministic canonical form: BFS relabeling minimized over all start
// vertices. Returned string is the normalized `.gem` serialization, equal
// exactly for color-preserving-isomorphic connected gems.
std::string canonical_code(const Gem& g);

bool isomorphic(const Gem& a, const Gem& b);

// `.gem` text format: "gem <v>" then v rows of 4 one-based neighbor ids
// ordered by color. '#' starts a comment.
std::string write_gem(const Gem& g);
Gem parse_gem(const std::string& text);
Gem load_gem_file(const std::string& path);
void save_gem_file(const Gem& g, const std::string& path);

// Colors (i,j,k): a permutation of (1,2,3) fixed per pipeline run.
struct ColorTriple {
  Color i = 1, j = 2, k = 3;
  bool valid() const;
};

}  // namespace gem3

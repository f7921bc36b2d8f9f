#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gem3/gem.hpp"

namespace gem3 {

struct Dipole {
  Vertex u = -1, v = -1;
  std::vector<Color> colors;  // the k parallel colors, increasing
};

// One replayable move. The patch records complete pre/post rows for every
// touched vertex (session ids), which makes replay and inversion uniform
// for dipole moves, twists and rule applications alike.
struct RowPatch {
  Vertex v = -1;
  bool pre_alive = false, post_alive = false;
  AdjRow pre{-1, -1, -1, -1};
  AdjRow post{-1, -1, -1, -1};
};

struct MoveEntry {
  std::string kind;  // create | cancel | twist | rule:<name>
  std::string note;  // site parameters, composite group tag
  std::vector<RowPatch> patch;
  std::vector<Vertex> created, deleted;
  MoveEntry inverted() const;
  std::string line() const;
  static MoveEntry from_line(const std::string& line);
};

struct MoveLog {
  std::vector<MoveEntry> entries;
  std::string text() const;
  static MoveLog parse(const std::string& text);
};

// Mutable working copy of a gem. Deleted ids are never reused within one
// session; compact() renumbers at stage boundaries.
class MoveSession {
 public:
  explicit MoveSession(const Gem& g);

  Vertex capacity() const { return static_cast<Vertex>(adj_.size()); }
  bool alive(Vertex v) const { return alive_[static_cast<size_t>(v)] != 0; }
  Vertex nbr(Vertex v, Color c) const { return adj_[static_cast<size_t>(v)][c]; }
  int cls(Vertex v) const { return cls_[static_cast<size_t>(v)]; }
  Vertex live_count() const { return live_; }
  const MoveLog& log() const { return log_; }
  MoveLog take_log();

  // Parallel colors joining u and v.
  std::vector<Color> joining_colors(Vertex u, Vertex v) const;
  // True iff u and v lie in the same residue of the given colors.
  bool same_bigon(Vertex u, Vertex v, Color a, Color b) const;
  bool same_triple_residue(Vertex u, Vertex v, Color missing) const;
  std::vector<Vertex> bigon_vertices(Vertex v, Color a, Color b) const;
  bool dipole_valid(const Dipole& d) const;

  // Unified dipole creation at a vertex: all complement-colored edges of
  // site_v are rerouted through the new pair. |C| in {1,2}, site_c not in C.
  std::pair<Vertex, Vertex> create_dipole(Vertex site_v, Color site_c,
                                          std::vector<Color> C,
                                          const std::string& group = "");
  // 2-dipole creation splitting the complement bigon at two chosen edges
  // (the general form used by the knit passes). cut1 is an oriented d1-edge
  // (from,to); cut2 an unordered d2-edge on the same {d1,d2}-bigon.
  std::pair<Vertex, Vertex> create_dipole_cuts(
      std::array<Color, 2> C, std::pair<Vertex, Vertex> cut1,
      std::pair<Vertex, Vertex> cut2, const std::string& group = "");
  void cancel_dipole(const Dipole& d, const std::string& group = "");
  // Raw neighbor exchange; classification is the caller's business.
  void swap_neighbors(Vertex u, Vertex v, Color a, Color b,
                      const std::string& note = "");
  // Patch application with full pre-state verification (rules, replay).
  void apply_entry(const MoveEntry& e);
  void apply_inverse(const MoveEntry& e);

  struct Compaction {
    Gem gem;
    std::vector<Vertex> to_session;  // dense id -> session id
    std::vector<Vertex> to_dense;    // session id -> dense id or -1
  };
  Compaction compact() const;

 private:
  friend class RuleApplication;
  void commit(MoveEntry e);
  std::vector<AdjRow> adj_;
  std::vector<std::int8_t> cls_;
  std::vector<std::uint8_t> alive_;
  Vertex live_ = 0;
  MoveLog log_;
};

// Gem-level wrappers (pure functions returning the compacted result).
struct MoveOutcome {
  Gem gem;
  MoveLog log;
  std::vector<Vertex> to_dense;  // session id -> dense id in `gem`
};

std::vector<Dipole> find_dipoles(const Gem& g, int k);
MoveOutcome cancel_dipole(const Gem& g, const Dipole& d);
MoveOutcome create_dipole(const Gem& g, std::pair<Vertex, Color> site,
                          const std::vector<Color>& C);
MoveOutcome trisect_bigon(const Gem& g, const Residue& bigon);
// Two 2-dipole creations near v, separating v from everything in the 0k- and
// ij-gons while only splicing the other bigon types.
MoveOutcome double_8_move(const Gem& g, Vertex v, Color k);
// Greedy cancellation of 1- then 2-dipoles until none remain.
MoveOutcome simplify(const Gem& g);
void simplify_in_session(MoveSession& s);

Gem replay(const Gem& start, const MoveLog& log);

}  // namespace gem3

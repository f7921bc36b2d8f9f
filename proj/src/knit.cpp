#include "gem3/knit.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "gem3/twistor.hpp"

namespace gem3 {

namespace {

// Canonical oriented traversal of a bigon: from class-0 vertices step along
// `c0_step`, from class-1 along the other color. All rotations and side
// orders derive from these walks, which is what makes knit_to_gem an exact
// inverse.
std::vector<Vertex> traverse_gon(const Gem& g, Vertex start, Color c0_step,
                                 Color c1_step) {
  std::vector<Vertex> walk;
  Vertex cur = start;
  do {
    walk.push_back(cur);
    cur = g.nbr(cur, g.cls(cur) == 0 ? c0_step : c1_step);
  } while (cur != start);
  return walk;
}

}  // namespace

int Knit::edge_of_vertex(Vertex side) const {
  for (size_t e = 0; e < edges.size(); ++e)
    if (edges[e].side_left == side || edges[e].side_right == side)
      return static_cast<int>(e);
  return -1;
}

bool Knit::edge_touches_outer(int e) const {
  const KnitEdge& ke = edges[static_cast<size_t>(e)];
  return face_of_vertex[static_cast<size_t>(ke.side_left)] == outer_face ||
         face_of_vertex[static_cast<size_t>(ke.side_right)] == outer_face;
}

Knit gem_to_knit(const Gem& g, const ColorTriple& colors, Vertex outer_rep) {
  if (!colors.valid()) fail("BadSite", "colors must be a permutation of 1,2,3");
  if (!is_crystallization(g).ok)
    fail("NotCrystallization", "knit construction needs a crystallization");
  if (outer_rep < 0 || outer_rep >= g.size())
    fail("BadSite", "outer representative out of range");

  Knit n;
  n.colors = colors;
  const Color i = colors.i, j = colors.j, k = colors.k;

  ResiduePartition blacks = bigon_partition(g, std::min(j, k), std::max(j, k));
  ResiduePartition whites = bigon_partition(g, std::min(i, j), std::max(i, j));
  ResiduePartition faces = bigon_partition(g, std::min(i, k), std::max(i, k));
  n.black_of_vertex = blacks.id_of;
  n.white_of_vertex = whites.id_of;
  n.face_of_vertex = faces.id_of;
  n.face_count = faces.count;
  n.outer_rep = outer_rep;
  n.outer_face = faces.id_of[outer_rep];

  // one edge per j-colored gem edge, keyed by its class-0 endpoint
  std::vector<int> edge_of_c0(static_cast<size_t>(g.size()), -1);
  for (Vertex v = 0; v < g.size(); ++v) {
    if (g.cls(v) != 0) continue;
    KnitEdge e;
    e.side_left = v;
    e.side_right = g.nbr(v, j);
    e.black = blacks.id_of[v];
    e.white = whites.id_of[v];
    edge_of_c0[static_cast<size_t>(v)] = static_cast<int>(n.edges.size());
    n.edges.push_back(e);
  }

  n.blacks.assign(static_cast<size_t>(blacks.count), {});
  n.whites.assign(static_cast<size_t>(whites.count), {});
  for (auto& b : n.blacks) b.black = true;

  std::vector<Vertex> least_black(static_cast<size_t>(blacks.count), -1);
  std::vector<Vertex> least_white(static_cast<size_t>(whites.count), -1);
  for (Vertex v = 0; v < g.size(); ++v) {
    Vertex& lb = least_black[static_cast<size_t>(blacks.id_of[v])];
    if (lb < 0) lb = v;
    Vertex& lw = least_white[static_cast<size_t>(whites.id_of[v])];
    if (lw < 0) lw = v;
  }

  // jk-gon walk: class0 steps k, class1 steps j; j-steps emit the edge
  for (int b = 0; b < blacks.count; ++b) {
    std::vector<Vertex> walk = traverse_gon(g, least_black[static_cast<size_t>(b)], k, j);
    for (size_t idx = 0; idx < walk.size(); ++idx) {
      Vertex cur = walk[idx];
      if (g.cls(cur) == 1) {  // about to step j into a class-0 vertex
        Vertex nxt = g.nbr(cur, j);
        n.blacks[static_cast<size_t>(b)].rotation.push_back(
            edge_of_c0[static_cast<size_t>(nxt)]);
      }
    }
  }
  // ij-gon walk: class0 steps j (emitting the edge), class1 steps i
  for (int w = 0; w < whites.count; ++w) {
    std::vector<Vertex> walk = traverse_gon(g, least_white[static_cast<size_t>(w)], j, i);
    for (Vertex cur : walk) {
      if (g.cls(cur) == 0)
        n.whites[static_cast<size_t>(w)].rotation.push_back(
            edge_of_c0[static_cast<size_t>(cur)]);
    }
  }
  return n;
}

Gem knit_to_gem(const Knit& n, const std::vector<Vertex>& side_matching) {
  const size_t ne = n.edges.size();
  const Vertex nv = static_cast<Vertex>(2 * ne);
  std::vector<char> seen(static_cast<size_t>(nv), 0);
  for (const KnitEdge& e : n.edges) {
    for (Vertex s : {e.side_left, e.side_right}) {
      if (s < 0 || s >= nv || seen[static_cast<size_t>(s)])
        fail("InvalidKnit", "edge sides must enumerate vertices exactly once");
      seen[static_cast<size_t>(s)] = 1;
    }
  }
  if (side_matching.size() != static_cast<size_t>(nv))
    fail("InvalidKnit", "side matching size mismatch");
  for (Vertex s = 0; s < nv; ++s) {
    Vertex t = side_matching[static_cast<size_t>(s)];
    if (t < 0 || t >= nv || t == s || side_matching[static_cast<size_t>(t)] != s)
      fail("InvalidKnit", "side matching is not a fixed-point-free involution");
  }

  const Color i = n.colors.i, j = n.colors.j, k = n.colors.k;
  std::vector<AdjRow> table(static_cast<size_t>(nv), AdjRow{-1, -1, -1, -1});
  auto set_edge = [&](Vertex a, Color c, Vertex b) {
    if (a == b || table[static_cast<size_t>(a)][c] >= 0 ||
        table[static_cast<size_t>(b)][c] >= 0)
      fail("InvalidKnit", "conflicting rotations");
    table[static_cast<size_t>(a)][c] = b;
    table[static_cast<size_t>(b)][c] = a;
  };

  for (const KnitEdge& e : n.edges) set_edge(e.side_left, j, e.side_right);
  for (Vertex s = 0; s < nv; ++s)
    if (table[static_cast<size_t>(s)][0] < 0)
      set_edge(s, 0, side_matching[static_cast<size_t>(s)]);

  // angles at blacks are k-edges, at whites i-edges
  std::vector<int> edge_uses(ne, 0);
  for (const KnitVertexView& b : n.blacks) {
    const auto& rot = b.rotation;
    if (rot.empty()) fail("InvalidKnit", "empty black rotation");
    for (size_t m = 0; m < rot.size(); ++m) {
      const KnitEdge& cur = n.edges[static_cast<size_t>(rot[m])];
      const KnitEdge& nxt = n.edges[static_cast<size_t>(rot[(m + 1) % rot.size()])];
      edge_uses[static_cast<size_t>(rot[m])]++;
      set_edge(cur.side_left, k, nxt.side_right);
    }
  }
  for (const KnitVertexView& w : n.whites) {
    const auto& rot = w.rotation;
    if (rot.empty()) fail("InvalidKnit", "empty white rotation");
    for (size_t m = 0; m < rot.size(); ++m) {
      const KnitEdge& cur = n.edges[static_cast<size_t>(rot[m])];
      const KnitEdge& nxt = n.edges[static_cast<size_t>(rot[(m + 1) % rot.size()])];
      edge_uses[static_cast<size_t>(rot[m])] += 4;
      set_edge(cur.side_right, i, nxt.side_left);
    }
  }
  for (int uses : edge_uses)
    if (uses != 5)
      fail("InvalidKnit", "each edge must appear once per endpoint rotation");

  try {
    return Gem::build(table);
  } catch (const Error& e) {
    fail("InvalidKnit", std::string("rebuilt gem invalid: ") + e.what());
  }
}

Gem knit_to_gem_of(const Gem& g, const ColorTriple& colors) {
  Knit n = gem_to_knit(g, colors);
  std::vector<Vertex> matching(static_cast<size_t>(g.size()));
  for (Vertex v = 0; v < g.size(); ++v) matching[static_cast<size_t>(v)] = g.nbr(v, 0);
  return knit_to_gem(n, matching);
}

bool euler_ok(const Knit& n) {
  long v = static_cast<long>(n.blacks.size() + n.whites.size());
  long e = static_cast<long>(n.edges.size());
  long f = n.face_count;
  return v - e + f == 2;
}

bool is_cactus(const Gem& g, const Knit& n) {
  (void)g;
  for (size_t e = 0; e < n.edges.size(); ++e)
    if (!n.edge_touches_outer(static_cast<int>(e))) return false;

  // blocks of the bipartite multigraph must be cycles or bridges
  const int nb = static_cast<int>(n.blacks.size());
  const int total = nb + static_cast<int>(n.whites.size());
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(total));
  for (size_t e = 0; e < n.edges.size(); ++e) {
    int a = n.edges[e].black;
    int b = nb + n.edges[e].white;
    adj[static_cast<size_t>(a)].push_back({b, static_cast<int>(e)});
    adj[static_cast<size_t>(b)].push_back({a, static_cast<int>(e)});
  }
  std::vector<int> depth(static_cast<size_t>(total), -1), low(static_cast<size_t>(total), 0);
  std::vector<char> edge_seen(n.edges.size(), 0);
  std::vector<int> edge_stack;
  bool ok = true;

  struct Frame {
    int v;
    size_t it;
    int parent_edge;
  };
  for (int root = 0; root < total && ok; ++root) {
    if (depth[static_cast<size_t>(root)] >= 0) continue;
    std::vector<Frame> stack{{root, 0, -1}};
    depth[static_cast<size_t>(root)] = 0;
    low[static_cast<size_t>(root)] = 0;
    while (!stack.empty() && ok) {
      Frame& f = stack.back();
      if (f.it < adj[static_cast<size_t>(f.v)].size()) {
        auto [w, eid] = adj[static_cast<size_t>(f.v)][f.it++];
        if (edge_seen[static_cast<size_t>(eid)]) continue;
        edge_seen[static_cast<size_t>(eid)] = 1;
        edge_stack.push_back(eid);
        if (depth[static_cast<size_t>(w)] < 0) {
          depth[static_cast<size_t>(w)] = depth[static_cast<size_t>(f.v)] + 1;
          low[static_cast<size_t>(w)] = depth[static_cast<size_t>(w)];
          stack.push_back({w, 0, eid});
        } else {
          low[static_cast<size_t>(f.v)] =
              std::min(low[static_cast<size_t>(f.v)], depth[static_cast<size_t>(w)]);
        }
      } else {
        int child = f.v;
        int pedge = f.parent_edge;
        stack.pop_back();
        if (stack.empty()) break;
        int parent = stack.back().v;
        low[static_cast<size_t>(parent)] =
            std::min(low[static_cast<size_t>(parent)], low[static_cast<size_t>(child)]);
        if (low[static_cast<size_t>(child)] >= depth[static_cast<size_t>(parent)]) {
          // pop one block
          std::set<int> verts;
          int edges_in_block = 0;
          while (!edge_stack.empty()) {
            int eid = edge_stack.back();
            edge_stack.pop_back();
            ++edges_in_block;
            verts.insert(n.edges[static_cast<size_t>(eid)].black);
            verts.insert(nb + n.edges[static_cast<size_t>(eid)].white);
            if (eid == pedge) break;
          }
          if (edges_in_block != 1 &&
              edges_in_block != static_cast<int>(verts.size()))
            ok = false;
        }
      }
    }
  }
  return ok;
}

bool has_black_trivial_angles(const Gem& g, const Knit& n) {
  (void)g;
  for (const KnitVertexView& b : n.blacks)
    if (b.rotation.size() == 1) return true;
  return false;
}

std::string Knit::dump() const {
  std::ostringstream os;
  os << "knit colors=" << colors.i << colors.j << colors.k
     << " blacks=" << blacks.size() << " whites=" << whites.size()
     << " edges=" << edges.size() << " faces=" << face_count
     << " outer=" << outer_face << "\n";
  for (size_t b = 0; b < blacks.size(); ++b) {
    os << "black " << b << " rotation=";
    for (size_t m = 0; m < blacks[b].rotation.size(); ++m)
      os << (m ? "," : "") << blacks[b].rotation[m];
    os << "\n";
  }
  for (size_t w = 0; w < whites.size(); ++w) {
    os << "white " << w << " rotation=";
    for (size_t m = 0; m < whites[w].rotation.size(); ++m)
      os << (m ? "," : "") << whites[w].rotation[m];
    os << "\n";
  }
  for (size_t e = 0; e < edges.size(); ++e) {
    os << "edge " << e << " black=" << edges[e].black
       << " white=" << edges[e].white << " sides=" << edges[e].side_left << ","
       << edges[e].side_right << " faces="
       << face_of_vertex[static_cast<size_t>(edges[e].side_left)] << ","
       << face_of_vertex[static_cast<size_t>(edges[e].side_right)] << "\n";
  }
  return os.str();
}

namespace {

struct SessionView {
  MoveSession::Compaction c;
  Knit knit;
};

SessionView view_of(MoveSession& s, const ColorTriple& colors, Vertex outer_rep) {
  SessionView v;
  v.c = s.compact();
  Vertex rep = v.c.to_dense[static_cast<size_t>(outer_rep)];
  if (rep < 0) fail("BadSite", "outer representative died");
  v.knit = gem_to_knit(v.c.gem, colors, rep);
  return v;
}

}  // namespace

void cactify_in_session(MoveSession& s, const ColorTriple& colors,
                        Vertex outer_rep) {
  const Color i = colors.i, j = colors.j, k = colors.k;
  while (true) {
    SessionView v = view_of(s, colors, outer_rep);
    const Knit& n = v.knit;
    const Gem& g = v.c.gem;

    std::vector<int> interior;
    for (size_t e = 0; e < n.edges.size(); ++e)
      if (!n.edge_touches_outer(static_cast<int>(e))) interior.push_back(static_cast<int>(e));
    if (interior.empty()) break;
    std::sort(interior.begin(), interior.end(), [&](int a, int b) {
      return v.c.to_session[static_cast<size_t>(n.edges[static_cast<size_t>(a)].side_left)] <
             v.c.to_session[static_cast<size_t>(n.edges[static_cast<size_t>(b)].side_left)];
    });

    // sides on the outer face, grouped per white / black gon
    auto outer_side_in_white = [&](int w) -> Vertex {
      Vertex best = -1;
      for (Vertex x = 0; x < g.size(); ++x)
        if (n.white_of_vertex[static_cast<size_t>(x)] == w &&
            n.face_of_vertex[static_cast<size_t>(x)] == n.outer_face)
          if (best < 0 || v.c.to_session[static_cast<size_t>(x)] <
                              v.c.to_session[static_cast<size_t>(best)])
            best = x;
      return best;
    };
    auto outer_side_in_black = [&](int b) -> Vertex {
      Vertex best = -1;
      for (Vertex x = 0; x < g.size(); ++x)
        if (n.black_of_vertex[static_cast<size_t>(x)] == b &&
            n.face_of_vertex[static_cast<size_t>(x)] == n.outer_face)
          if (best < 0 || v.c.to_session[static_cast<size_t>(x)] <
                              v.c.to_session[static_cast<size_t>(best)])
            best = x;
      return best;
    };

    bool progressed = false;
    for (int eid : interior) {
      const KnitEdge& e = n.edges[static_cast<size_t>(eid)];
      Vertex sl = v.c.to_session[static_cast<size_t>(e.side_left)];
      Vertex sr = v.c.to_session[static_cast<size_t>(e.side_right)];
      Vertex white_anchor = outer_side_in_white(e.white);
      if (white_anchor >= 0) {
        // white split: cut the j-edge and an outer i-edge of the same ij-gon
        Vertex a = v.c.to_session[static_cast<size_t>(white_anchor)];
        Vertex a_i = s.nbr(a, i);
        std::array<Color, 2> C{0, k};
        std::sort(C.begin(), C.end());
        if (i < j)
          s.create_dipole_cuts(C, {a, a_i}, {sl, sr}, "cactify");
        else
          s.create_dipole_cuts(C, {sl, sr}, {a, a_i}, "cactify");
        progressed = true;
        break;
      }
      Vertex black_anchor = outer_side_in_black(e.black);
      if (black_anchor >= 0) {
        // black split: cut the j-edge and an outer k-edge of the same jk-gon
        Vertex a = v.c.to_session[static_cast<size_t>(black_anchor)];
        Vertex a_k = s.nbr(a, k);
        std::array<Color, 2> C{0, i};
        std::sort(C.begin(), C.end());
        if (j < k)
          s.create_dipole_cuts(C, {sl, sr}, {a, a_k}, "cactify");
        else
          s.create_dipole_cuts(C, {a, a_k}, {sl, sr}, "cactify");
        progressed = true;
        break;
      }
    }
    if (!progressed)
      fail("InvalidKnit", "cactification stalled; no outer-adjacent interior edge");
  }
}

void remove_black_trivial_angles_in_session(MoveSession& s,
                                            const ColorTriple& colors,
                                            Vertex outer_rep) {
  const Color i = colors.i, j = colors.j;
  while (true) {
    SessionView v = view_of(s, colors, outer_rep);
    const Knit& n = v.knit;
    Vertex site = -1;
    for (size_t b = 0; b < n.blacks.size(); ++b) {
      if (n.blacks[b].rotation.size() != 1) continue;
      const KnitEdge& e = n.edges[static_cast<size_t>(n.blacks[b].rotation[0])];
      Vertex cand = std::min(
          v.c.to_session[static_cast<size_t>(e.side_left)],
          v.c.to_session[static_cast<size_t>(e.side_right)]);
      if (site < 0 || cand < site) site = cand;
    }
    if (site < 0) break;
    // a white pendant at the monovalent black makes it bivalent
    std::array<Color, 2> C{i, j};
    std::sort(C.begin(), C.end());
    s.create_dipole(site, 0, {C[0], C[1]}, "black-angle");
  }
}

namespace {

// i-edges of the {0,i}-bigon through the oriented 0-edge (w,w0), in walk
// order, as session-id pairs.
std::vector<std::pair<Vertex, Vertex>> gamma_i_edges(const MoveSession& s,
                                                     Color i, Vertex w,
                                                     Vertex w0) {
  (void)w;
  std::vector<std::pair<Vertex, Vertex>> out;
  Vertex cur = w0;
  Color col = i;
  do {
    Vertex nxt = s.nbr(cur, col);
    if (col == i) out.push_back({cur, nxt});
    cur = nxt;
    col = (col == 0) ? i : 0;
  } while (!(cur == w0 && col == i));
  return out;
}

// All four blacks of a freshly spiked 0-edge must be linked in G^jk by
// i-pairs among the six local vertices.
bool chain_ok(const MoveSession& s, const ColorTriple& colors,
              const std::vector<Vertex>& six) {
  MoveSession::Compaction c = s.compact();
  BigonTable bt = BigonTable::build(c.gem);
  const Color j = colors.j, k = colors.k;
  auto black_of = [&](Vertex sess) {
    return bt.id(j, k, c.to_dense[static_cast<size_t>(sess)]);
  };
  std::set<int> targets;
  for (Vertex x : six) targets.insert(black_of(x));

  std::map<int, int> comp;
  for (int b : targets) comp[b] = b;
  std::function<int(int)> find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (size_t p = 0; p < six.size(); ++p) {
    for (size_t q = p + 1; q < six.size(); ++q) {
      Vertex du = c.to_dense[static_cast<size_t>(six[p])];
      Vertex dv = c.to_dense[static_cast<size_t>(six[q])];
      PairClass pc = classify_pair(c.gem, bt, du, dv, colors);
      if (!is_i_pair(pc, colors)) continue;
      int a = find(black_of(six[p])), b = find(black_of(six[q]));
      if (a != b) comp[a] = b;
    }
  }
  int root = find(*targets.begin());
  for (int b : targets)
    if (find(b) != root) return false;
  return true;
}

}  // namespace

void add_spikes_in_session(MoveSession& s, const ColorTriple& colors,
                           Vertex outer_rep) {
  (void)outer_rep;
  const Color i = colors.i, j = colors.j, k = colors.k;
  std::array<Color, 2> C{std::min(j, k), std::max(j, k)};

  std::vector<std::pair<Vertex, Vertex>> zero_edges;
  for (Vertex v = 0; v < s.capacity(); ++v) {
    if (!s.alive(v)) continue;
    Vertex w = s.nbr(v, 0);
    if (v < w) zero_edges.push_back({v, w});
  }

  std::vector<std::pair<Vertex, Vertex>> unchained;
  for (auto [w, w0] : zero_edges) {
    std::vector<std::pair<Vertex, Vertex>> f1s = gamma_i_edges(s, i, w, w0);
    // structured candidates first: own i-edges of w and w0
    auto promote_candidate = [](std::vector<std::pair<Vertex, Vertex>>& list,
                                Vertex member) {
      std::stable_partition(list.begin(), list.end(),
                            [&](const std::pair<Vertex, Vertex>& e) {
                              return e.first == member || e.second == member;
                            });
    };
    promote_candidate(f1s, w0);
    promote_candidate(f1s, w);

    bool chained = false;
    for (auto& f1 : f1s) {
      MoveSession probe1 = s;
      auto [x1, y1] = probe1.create_dipole_cuts(C, {w, w0}, f1, "spike");
      std::vector<std::pair<Vertex, Vertex>> f2s =
          gamma_i_edges(probe1, i, w0, y1);
      promote_candidate(f2s, y1);
      promote_candidate(f2s, w0);
      for (auto& f2 : f2s) {
        MoveSession probe2 = probe1;
        auto [x2, y2] = probe2.create_dipole_cuts(C, {w0, y1}, f2, "spike");
        if (chain_ok(probe2, colors, {w, w0, x1, y1, x2, y2})) {
          s.create_dipole_cuts(C, {w, w0}, f1, "spike");
          s.create_dipole_cuts(C, {w0, y1}, f2, "spike");
          chained = true;
          break;
        }
      }
      if (chained) break;
    }
    if (!chained) {
      // fall back to own-edge spikes; global connectivity decides later
      auto [x1, y1] = s.create_dipole_cuts(C, {w, w0}, {w, s.nbr(w, i)}, "spike");
      (void)x1;
      s.create_dipole_cuts(C, {w0, y1}, {w0, s.nbr(w0, i)}, "spike");
      unchained.push_back({w, w0});
    }
  }

  MoveSession::Compaction c = s.compact();
  GjkGraph h = build_gjk(c.gem, colors);
  if (!h.connected()) {
    std::ostringstream os;
    os << "spiked gem has a disconnected G^jk";
    if (!unchained.empty())
      os << "; first unchained 0-edge site {" << unchained.front().first << ","
         << unchained.front().second << "}";
    fail("CaseUndetermined", os.str());
  }
}

namespace {

KnitStageResult run_stage(const Gem& g, const ColorTriple& colors,
                          void (*pass)(MoveSession&, const ColorTriple&, Vertex)) {
  MoveSession s(g);
  pass(s, colors, 0);
  KnitStageResult out;
  out.gem = s.compact().gem;
  out.log = s.take_log();
  return out;
}

}  // namespace

KnitStageResult cactify(const Gem& g, const ColorTriple& colors) {
  return run_stage(g, colors, cactify_in_session);
}

KnitStageResult remove_black_trivial_angles(const Gem& g, const ColorTriple& colors) {
  return run_stage(g, colors, remove_black_trivial_angles_in_session);
}

KnitStageResult add_spikes(const Gem& g, const ColorTriple& colors) {
  return run_stage(g, colors, add_spikes_in_session);
}

}  // namespace gem3

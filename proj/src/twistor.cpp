#include "gem3/twistor.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace gem3 {

namespace {

std::array<Color, 2> nonzero_minus(Color b) {
  std::array<Color, 2> out{};
  int w = 0;
  for (Color c = 1; c < kColors; ++c)
    if (c != b) out[static_cast<size_t>(w++)] = c;
  return out;
}

}  // namespace

std::string PairClass::str() const {
  std::ostringstream os;
  switch (kind) {
    case PairKind::None: return "none";
    case PairKind::Twistor: os << strong << "-twistor"; break;
    case PairKind::Antipole: os << strong << "-antipole"; break;
    case PairKind::PreTwistor: os << strong << weak << "-pre-twistor"; break;
    case PairKind::PreAntipole: os << strong << weak << "-pre-antipole"; break;
  }
  return os.str();
}

BigonTable BigonTable::build(const Gem& g) {
  BigonTable bt;
  for (Color a = 0; a < kColors; ++a)
    for (Color b = a + 1; b < kColors; ++b)
      bt.part[static_cast<size_t>(a)][static_cast<size_t>(b)] =
          bigon_partition(g, a, b);
  return bt;
}

PairClass classify_pair(const Gem& g, Vertex u, Vertex v,
                        const ColorTriple& colors) {
  return classify_pair(g, BigonTable::build(g), u, v, colors);
}

PairClass classify_pair(const Gem& g, const BigonTable& bt, Vertex u, Vertex v,
                        const ColorTriple& colors) {
  if (u == v || u < 0 || v < 0 || u >= g.size() || v >= g.size())
    fail("BadSite", "classify_pair needs two distinct vertices");
  PairClass out;
  out.same_class = g.cls(u) == g.cls(v);

  auto same = [&](Color a, Color b) { return bt.id(a, b, u) == bt.id(a, b, v); };

  // full B-twistor / antipole, B scanned in (i,j,k) order
  for (Color b : {colors.i, colors.j, colors.k}) {
    auto [a1, a2] = nonzero_minus(b);
    bool shared = same(0, b) && same(a1, a2);
    bool separated = true;
    for (Color cb : {a1, a2})
      separated = separated && !same(0, cb);
    separated = separated && !same(b, a1) && !same(b, a2);
    if (shared && separated) {
      out.kind = out.same_class ? PairKind::Twistor : PairKind::Antipole;
      out.strong = b;
      out.witness_zero = bt.id(0, b, u);
      out.witness_mixed = bt.id(a1, a2, u);
      return out;
    }
  }
  // (B,A)-pre-twistor / pre-antipole; weak = i variants first
  const std::array<std::pair<Color, Color>, 6> variants{
      std::pair{colors.j, colors.i}, {colors.k, colors.i},
      {colors.i, colors.j},          {colors.k, colors.j},
      {colors.i, colors.k},          {colors.j, colors.k}};
  for (auto [b, a] : variants) {
    auto [m1, m2] = nonzero_minus(b);
    Color c = (m1 == a) ? m2 : m1;  // the third nonzero color
    bool shared = same(0, b) && same(m1, m2);
    bool separated = !same(0, a) && !same(b, c);
    if (shared && separated) {
      out.kind = out.same_class ? PairKind::PreTwistor : PairKind::PreAntipole;
      out.strong = b;
      out.weak = a;
      out.witness_zero = bt.id(0, b, u);
      out.witness_mixed = bt.id(m1, m2, u);
      return out;
    }
  }
  return out;
}

bool is_i_pair(const PairClass& pc, const ColorTriple& colors) {
  if (pc.kind != PairKind::PreTwistor && pc.kind != PairKind::PreAntipole)
    return false;
  return pc.weak == colors.i &&
         (pc.strong == colors.j || pc.strong == colors.k);
}

bool GjkGraph::connected() const {
  if (nodes <= 0) return false;
  std::vector<std::vector<int>> adj(static_cast<size_t>(nodes));
  for (const GjkEdge& e : edges) {
    adj[static_cast<size_t>(e.node_u)].push_back(e.node_v);
    adj[static_cast<size_t>(e.node_v)].push_back(e.node_u);
  }
  std::vector<char> seen(static_cast<size_t>(nodes), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y : adj[static_cast<size_t>(x)]) {
      if (!seen[static_cast<size_t>(y)]) {
        seen[static_cast<size_t>(y)] = 1;
        ++reached;
        stack.push_back(y);
      }
    }
  }
  return reached == nodes;
}

GjkGraph build_gjk(const Gem& g, const ColorTriple& colors) {
  BigonTable bt = BigonTable::build(g);
  GjkGraph out;
  const ResiduePartition& jk =
      colors.j < colors.k
          ? bt.part[static_cast<size_t>(colors.j)][static_cast<size_t>(colors.k)]
          : bt.part[static_cast<size_t>(colors.k)][static_cast<size_t>(colors.j)];
  out.nodes = jk.count;
  out.node_of_vertex = jk.id_of;

  // group vertices by shared-gon signature per pre-twistor variant so that
  // candidate pairs are found without the all-pairs scan
  std::set<std::pair<Vertex, Vertex>> taken;
  for (Color b : {colors.j, colors.k}) {
    auto [m1, m2] = nonzero_minus(b);
    std::map<std::pair<int, int>, std::vector<Vertex>> groups;
    for (Vertex v = 0; v < g.size(); ++v)
      groups[{bt.id(0, b, v), bt.id(m1, m2, v)}].push_back(v);
    for (auto& [sig, members] : groups) {
      for (size_t p = 0; p < members.size(); ++p) {
        for (size_t q = p + 1; q < members.size(); ++q) {
          Vertex u = members[p], v = members[q];
          if (taken.count({u, v})) continue;
          PairClass pc = classify_pair(g, bt, u, v, colors);
          if (!is_i_pair(pc, colors)) continue;
          taken.insert({u, v});
          GjkEdge e;
          e.u = u;
          e.v = v;
          e.node_u = out.node_of_vertex[u];
          e.node_v = out.node_of_vertex[v];
          e.tag = pc;
          if (e.node_u == e.node_v)
            fail("ImproperColoring", "G^jk loop; i-pair endpoints share a jk-gon");
          out.edges.push_back(e);
        }
      }
    }
  }
  std::sort(out.edges.begin(), out.edges.end(),
            [](const GjkEdge& a, const GjkEdge& b) {
              return std::tie(a.u, a.v) < std::tie(b.u, b.v);
            });
  return out;
}

SpanningTree spanning_tree(const GjkGraph& h) {
  if (h.nodes <= 0 || !h.connected())
    fail("Disconnected", "spanning tree needs a connected G^jk");

  struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(static_cast<size_t>(n)) {
      std::iota(p.begin(), p.end(), 0);
    }
    int find(int x) {
      while (p[static_cast<size_t>(x)] != x)
        x = p[static_cast<size_t>(x)] = p[static_cast<size_t>(p[static_cast<size_t>(x)])];
      return x;
    }
    bool unite(int a, int b) {
      a = find(a);
      b = find(b);
      if (a == b) return false;
      p[static_cast<size_t>(b)] = a;
      return true;
    }
  };

  std::vector<int> order(h.edges.size());
  std::iota(order.begin(), order.end(), 0);

  // pass 1: pre-twistor edges with labels disjoint from already-chosen ones;
  // pass 2: any pre-twistor edge
  SpanningTree tree;
  Dsu dsu(h.nodes);
  std::set<Vertex> used;
  for (int pass = 0; pass < 2; ++pass) {
    for (int idx : order) {
      const GjkEdge& e = h.edges[static_cast<size_t>(idx)];
      if (e.tag.kind != PairKind::PreTwistor) continue;
      if (pass == 0 && (used.count(e.u) || used.count(e.v))) continue;
      if (dsu.find(e.node_u) == dsu.find(e.node_v)) continue;
      dsu.unite(e.node_u, e.node_v);
      tree.edge_ids.push_back(idx);
      used.insert(e.u);
      used.insert(e.v);
    }
  }
  if (static_cast<int>(tree.edge_ids.size()) != h.nodes - 1)
    fail("NoPreTwistorTree",
         "no spanning tree of pre-twistor edges exists (mixed-type connectivity)");
  std::sort(tree.edge_ids.begin(), tree.edge_ids.end());
  return tree;
}

TwistorRecord promote_pretwistor(MoveSession& s, const GjkEdge& edge,
                                 const ColorTriple& colors,
                                 const std::vector<Vertex>& used) {
  const Color b = edge.tag.strong;
  if (edge.tag.kind != PairKind::PreTwistor || edge.tag.weak != colors.i)
    fail("NotPreTwistor", "tree edge is not a pre-twistor toward i");

  std::set<Vertex> used_set(used.begin(), used.end());
  auto classify_now = [&](Vertex u, Vertex v) {
    MoveSession::Compaction c = s.compact();
    Vertex du = c.to_dense[static_cast<size_t>(u)];
    Vertex dv = c.to_dense[static_cast<size_t>(v)];
    if (du < 0 || dv < 0) return PairClass{};
    return classify_pair(c.gem, du, dv, colors);
  };

  Vertex u = edge.u, v = edge.v;
  // candidate labels: the pair itself, then parallel copies minted by
  // further double-8 moves near whichever endpoint is already used
  for (int attempt = 0; attempt < 8; ++attempt) {
    bool u_free = !used_set.count(u), v_free = !used_set.count(v);
    if (u_free && v_free) {
      PairClass pc = classify_now(u, v);
      if (pc.kind == PairKind::Twistor && pc.strong == b) {
        TwistorRecord rec;
        rec.u = u;
        rec.v = v;
        rec.strong = b;
        rec.shared_zero = pc.witness_zero;
        rec.shared_mixed = pc.witness_mixed;
        return rec;
      }
      if (pc.kind == PairKind::PreTwistor && pc.strong == b &&
          pc.weak == colors.i) {
        // the strong double-8 at v separates the pair in the remaining gons
        Color k_of_move = b == colors.j ? colors.k : colors.j;
        std::array<Color, 2> cpl_a{0, k_of_move};
        std::array<Color, 2> c_a{colors.i, b};
        std::sort(c_a.begin(), c_a.end());
        s.create_dipole(v, cpl_a[0], {c_a[0], c_a[1]}, "double8");
        std::array<Color, 2> c_b{0, k_of_move};
        std::sort(c_b.begin(), c_b.end());
        s.create_dipole(v, colors.i, {c_b[0], c_b[1]}, "double8");
        PairClass post = classify_now(u, v);
        if (post.kind != PairKind::Twistor || post.strong != b)
          fail("NotPreTwistor", "double-8 promotion failed to produce a twistor");
        TwistorRecord rec;
        rec.u = u;
        rec.v = v;
        rec.strong = b;
        rec.shared_zero = post.witness_zero;
        rec.shared_mixed = post.witness_mixed;
        return rec;
      }
      fail("NotPreTwistor", "pair {" + std::to_string(u) + "," +
                                std::to_string(v) + "} classifies as " +
                                classify_now(u, v).str());
    }
    // mint a parallel copy near the used endpoint: a double-8 there makes
    // the outer vertex of its first creation a fresh parallel label
    Vertex busy = u_free ? v : u;
    Vertex free_end = u_free ? u : v;
    Color k_of_move = b == colors.j ? colors.k : colors.j;
    std::array<Color, 2> c_a{colors.i, b};
    std::sort(c_a.begin(), c_a.end());
    auto [x_a, y_a] = s.create_dipole(busy, 0, {c_a[0], c_a[1]}, "double8-copy");
    (void)x_a;
    std::array<Color, 2> c_b2{0, k_of_move};
    std::sort(c_b2.begin(), c_b2.end());
    s.create_dipole(busy, colors.i, {c_b2[0], c_b2[1]}, "double8-copy");
    PairClass pc = classify_now(free_end, y_a);
    if ((pc.kind == PairKind::Twistor || pc.kind == PairKind::PreTwistor) &&
        pc.strong == b && (pc.kind == PairKind::Twistor || pc.weak == colors.i)) {
      if (u == busy)
        u = y_a;
      else
        v = y_a;
      continue;
    }
    fail("NotPreTwistor", "could not mint a disjoint parallel twistor label");
  }
  fail("NotPreTwistor", "label disjointness not reached");
}

MoveOutcome ji_twist(const Gem& g, Vertex u, Vertex v, Color a, Color b) {
  MoveSession s(g);
  ColorTriple colors;  // any triple containing {a,b} as nonzero colors works
  std::vector<Color> nz{1, 2, 3};
  colors.i = a;
  colors.j = b;
  for (Color c : nz)
    if (c != a && c != b) colors.k = c;
  if (a == 0 || b == 0) fail("NotTwistor", "twist colors must be nonzero");
  ji_twist_in_session(s, u, v, a, b, colors);
  MoveSession::Compaction c = s.compact();
  MoveOutcome out;
  out.gem = std::move(c.gem);
  out.to_dense = std::move(c.to_dense);
  out.log = s.take_log();
  return out;
}

void ji_twist_in_session(MoveSession& s, Vertex u, Vertex v, Color a, Color b,
                         const ColorTriple& colors) {
  MoveSession::Compaction c = s.compact();
  Vertex du = c.to_dense[static_cast<size_t>(u)];
  Vertex dv = c.to_dense[static_cast<size_t>(v)];
  if (du < 0 || dv < 0) fail("NotTwistor", "twist pair not alive");
  PairClass pc = classify_pair(c.gem, du, dv, colors);
  if (pc.kind != PairKind::Twistor ||
      (pc.strong != a && pc.strong != b))
    fail("NotTwistor", "pair {" + std::to_string(u) + "," + std::to_string(v) +
                           "} classifies as " + pc.str() +
                           ", not a twistor in the swap colors");
  s.swap_neighbors(u, v, a, b, "ji-twist strong=" + std::to_string(pc.strong));
}

RewriteRule gadget_rule_for(const RewriteRule& gadget_base,
                            const ColorTriple& colors, Color strong) {
  // base rule is written for a j-twistor with (i,j,k) = (1,2,3)
  std::array<Color, 4> map{};
  map[0] = 0;
  map[1] = colors.i;
  if (strong == colors.j) {
    map[2] = colors.j;
    map[3] = colors.k;
  } else if (strong == colors.k) {
    map[2] = colors.k;
    map[3] = colors.j;
  } else {
    fail("RuleUnavailable", "gadget strong color must be j or k");
  }
  return gadget_base.permuted(map);
}

LocalizeResult localize_hinge(MoveSession& s, const RewriteRule& gadget,
                              const TwistorRecord& rec,
                              const ColorTriple& colors) {
  RewriteRule rule = gadget_rule_for(gadget, colors, rec.strong);
  if (rule.marks.size() != 2)
    fail("RuleUnavailable", "gadget rule must mark the designated pair");
  Match m{rec.u, rec.v};
  RuleApplied applied = apply_rule(s, rule, m);
  LocalizeResult out;
  out.new_u = applied.created[static_cast<size_t>(rule.marks[0])];
  out.new_v = applied.created[static_cast<size_t>(rule.marks[1])];
  // the designated pair must still be a twistor of the same color
  MoveSession::Compaction c = s.compact();
  PairClass pc = classify_pair(c.gem, c.to_dense[static_cast<size_t>(out.new_u)],
                               c.to_dense[static_cast<size_t>(out.new_v)], colors);
  if (pc.kind != PairKind::Twistor || pc.strong != rec.strong)
    fail("PostValidationFailed",
         "localized pair classifies as " + pc.str() + " instead of a " +
             std::to_string(rec.strong) + "-twistor");
  return out;
}

HingeDescriptor hinge_descriptor(const Gem& g, Vertex u, Vertex v, Color strong,
                                 const ColorTriple& colors) {
  PairClass pc = classify_pair(g, u, v, colors);
  if (pc.kind != PairKind::Twistor || pc.strong != strong)
    fail("NotTwistor", "descriptor needs a confirmed twistor; got " + pc.str());
  HingeDescriptor d;
  d.u = u;
  d.v = v;
  d.tag = pc;
  d.shared_zero = pc.witness_zero;
  d.shared_mixed = pc.witness_mixed;
  const Color a = colors.i;  // twist partner color
  d.strip = {std::pair{u, a}, {u, strong}, {v, strong}, {v, a}};
  // consecutive strip triangles share the dual edge of these bigons:
  // u's {a,strong}-gon, the shared {0,strong}-gon, v's {a,strong}-gon,
  // and the shared mixed gon closing the cylinder
  BigonTable bt = BigonTable::build(g);
  d.strip_link_gons = {bt.id(a, strong, u), bt.id(0, strong, u),
                       bt.id(a, strong, v), d.shared_mixed};
  return d;
}

std::string HingeDescriptor::line(const ColorTriple& colors) const {
  std::ostringstream os;
  os << "pair=" << u << "," << v << " colors=" << colors.i << colors.j
     << colors.k << " tag=" << tag.str() << " shared0B=" << shared_zero
     << " sharedmixed=" << shared_mixed << " strip=";
  for (size_t idx = 0; idx < strip.size(); ++idx)
    os << (idx ? "," : "") << "t(" << strip[idx].first << ";"
       << strip[idx].second << ")";
  return os.str();
}

std::vector<ClusterSite> find_94_clusters(const Gem& g) {
  std::vector<ClusterSite> out;
  BigonTable bt = BigonTable::build(g);
  // bigon lengths per (pair, id)
  std::array<std::array<std::vector<int>, 4>, 4> lengths;
  for (Color a = 0; a < kColors; ++a) {
    for (Color b = a + 1; b < kColors; ++b) {
      const ResiduePartition& part =
          bt.part[static_cast<size_t>(a)][static_cast<size_t>(b)];
      lengths[static_cast<size_t>(a)][static_cast<size_t>(b)].assign(
          static_cast<size_t>(part.count), 0);
      for (Vertex v = 0; v < g.size(); ++v)
        lengths[static_cast<size_t>(a)][static_cast<size_t>(b)]
               [static_cast<size_t>(part.id_of[v])]++;
    }
  }
  for (Vertex v = 0; v < g.size(); ++v) {
    std::set<Vertex> closure{v};
    int squares = 0;
    for (Color a = 0; a < kColors; ++a) {
      for (Color b = a + 1; b < kColors; ++b) {
        int id = bt.id(a, b, v);
        if (lengths[static_cast<size_t>(a)][static_cast<size_t>(b)]
                   [static_cast<size_t>(id)] != 4)
          continue;
        ++squares;
        for (Vertex w : bigon_through(g, a, b, v)) closure.insert(w);
      }
    }
    if (squares >= 4 && closure.size() == 9) {
      ClusterSite site;
      site.center = v;
      site.closure.assign(closure.begin(), closure.end());
      out.push_back(site);
    }
  }
  return out;
}

}  // namespace gem3

#include "gem3/moves.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace gem3 {

namespace {

std::string color_set_str(const std::vector<Color>& cs) {
  std::string s;
  for (Color c : cs) s += static_cast<char>('0' + c);
  return s;
}

std::vector<Color> complement_of(const std::vector<Color>& cs) {
  std::vector<Color> out;
  for (Color c = 0; c < kColors; ++c)
    if (std::find(cs.begin(), cs.end(), c) == cs.end()) out.push_back(c);
  return out;
}

}  // namespace

MoveEntry MoveEntry::inverted() const {
  MoveEntry inv;
  inv.kind = kind;
  inv.note = note.empty() ? "inverse" : note + " inverse";
  inv.created = deleted;
  inv.deleted = created;
  inv.patch = patch;
  for (RowPatch& rp : inv.patch) {
    std::swap(rp.pre, rp.post);
    std::swap(rp.pre_alive, rp.post_alive);
  }
  return inv;
}

std::string MoveEntry::line() const {
  std::ostringstream os;
  os << kind << ";" << note << ";";
  for (size_t idx = 0; idx < patch.size(); ++idx) {
    const RowPatch& rp = patch[idx];
    if (idx) os << "|";
    os << rp.v << ":" << (rp.pre_alive ? 1 : 0);
    for (Color c = 0; c < kColors; ++c) os << "," << rp.pre[c];
    os << ":" << (rp.post_alive ? 1 : 0);
    for (Color c = 0; c < kColors; ++c) os << "," << rp.post[c];
  }
  return os.str();
}

MoveEntry MoveEntry::from_line(const std::string& line) {
  MoveEntry e;
  auto p1 = line.find(';');
  auto p2 = line.find(';', p1 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos)
    fail("ParseError", "bad move log line: " + line);
  e.kind = line.substr(0, p1);
  e.note = line.substr(p1 + 1, p2 - p1 - 1);
  std::string rows = line.substr(p2 + 1);
  std::istringstream is(rows);
  std::string tok;
  while (std::getline(is, tok, '|')) {
    RowPatch rp;
    std::replace(tok.begin(), tok.end(), ':', ' ');
    std::replace(tok.begin(), tok.end(), ',', ' ');
    std::istringstream rs(tok);
    int pa, qa;
    if (!(rs >> rp.v >> pa >> rp.pre[0] >> rp.pre[1] >> rp.pre[2] >> rp.pre[3] >>
          qa >> rp.post[0] >> rp.post[1] >> rp.post[2] >> rp.post[3]))
      fail("ParseError", "bad move log row: " + tok);
    rp.pre_alive = pa != 0;
    rp.post_alive = qa != 0;
    e.patch.push_back(rp);
    if (!rp.pre_alive && rp.post_alive) e.created.push_back(rp.v);
    if (rp.pre_alive && !rp.post_alive) e.deleted.push_back(rp.v);
  }
  return e;
}

std::string MoveLog::text() const {
  std::ostringstream os;
  for (const MoveEntry& e : entries) os << e.line() << "\n";
  return os.str();
}

MoveLog MoveLog::parse(const std::string& text) {
  MoveLog log;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    log.entries.push_back(MoveEntry::from_line(line));
  }
  return log;
}

MoveSession::MoveSession(const Gem& g) {
  adj_.assign(g.table().begin(), g.table().end());
  cls_.resize(static_cast<size_t>(g.size()));
  for (Vertex v = 0; v < g.size(); ++v) cls_[static_cast<size_t>(v)] =
      static_cast<std::int8_t>(g.cls(v));
  alive_.assign(static_cast<size_t>(g.size()), 1);
  live_ = g.size();
}

MoveLog MoveSession::take_log() {
  MoveLog out = std::move(log_);
  log_ = MoveLog{};
  return out;
}

std::vector<Color> MoveSession::joining_colors(Vertex u, Vertex v) const {
  std::vector<Color> out;
  for (Color c = 0; c < kColors; ++c)
    if (nbr(u, c) == v) out.push_back(c);
  return out;
}

bool MoveSession::same_bigon(Vertex u, Vertex v, Color a, Color b) const {
  Vertex cur = u;
  Color next = a;
  do {
    if (cur == v) return true;
    cur = nbr(cur, next);
    next = (next == a) ? b : a;
  } while (cur != u || next != a);
  return cur == v;
}

bool MoveSession::same_triple_residue(Vertex u, Vertex v, Color missing) const {
  if (u == v) return true;
  std::set<Vertex> seen{u};
  std::deque<Vertex> queue{u};
  while (!queue.empty()) {
    Vertex x = queue.front();
    queue.pop_front();
    for (Color c = 0; c < kColors; ++c) {
      if (c == missing) continue;
      Vertex w = nbr(x, c);
      if (w == v) return true;
      if (seen.insert(w).second) queue.push_back(w);
    }
  }
  return false;
}

std::vector<Vertex> MoveSession::bigon_vertices(Vertex v, Color a, Color b) const {
  std::vector<Vertex> cycle;
  Vertex cur = v;
  Color next = a;
  do {
    cycle.push_back(cur);
    cur = nbr(cur, next);
    next = (next == a) ? b : a;
  } while (cur != v || next != a);
  return cycle;
}

bool MoveSession::dipole_valid(const Dipole& d) const {
  if (d.u < 0 || d.v < 0 || d.u >= capacity() || d.v >= capacity()) return false;
  if (!alive(d.u) || !alive(d.v)) return false;
  if (joining_colors(d.u, d.v) != d.colors) return false;
  std::vector<Color> comp = complement_of(d.colors);
  if (comp.size() == 2) return !same_bigon(d.u, d.v, comp[0], comp[1]);
  if (comp.size() == 3) return !same_triple_residue(d.u, d.v, d.colors[0]);
  return comp.empty();  // 4 parallel edges is not a dipole; size 1 comp = 3-dipole
}

void MoveSession::commit(MoveEntry e) {
  for (const RowPatch& rp : e.patch) {
    while (rp.v >= capacity()) {
      adj_.push_back({-1, -1, -1, -1});
      cls_.push_back(-1);
      alive_.push_back(0);
    }
    if (alive(rp.v) && !rp.post_alive) --live_;
    if (!alive(rp.v) && rp.post_alive) ++live_;
    alive_[static_cast<size_t>(rp.v)] = rp.post_alive ? 1 : 0;
    adj_[static_cast<size_t>(rp.v)] = rp.post;
  }
  log_.entries.push_back(std::move(e));
}

std::pair<Vertex, Vertex> MoveSession::create_dipole(Vertex site_v, Color site_c,
                                                     std::vector<Color> C,
                                                     const std::string& group) {
  std::sort(C.begin(), C.end());
  if (C.empty() || C.size() > 2) fail("BadSite", "|C| must be 1 or 2");
  if (site_v < 0 || site_v >= capacity() || !alive(site_v))
    fail("BadSite", "vertex " + std::to_string(site_v) + " not in gem");
  if (std::find(C.begin(), C.end(), site_c) != C.end() || site_c < 0 ||
      site_c >= kColors)
    fail("BadSite", "site color must lie outside C");

  std::vector<Color> comp = complement_of(C);
  Vertex x = capacity(), y = capacity() + 1;

  std::map<Vertex, RowPatch> rows;
  auto touch = [&](Vertex v) -> RowPatch& {
    auto it = rows.find(v);
    if (it != rows.end()) return it->second;
    RowPatch rp;
    rp.v = v;
    if (v < capacity()) {
      rp.pre_alive = alive(v);
      rp.pre = adj_[static_cast<size_t>(v)];
      rp.post_alive = rp.pre_alive;
      rp.post = rp.pre;
    } else {
      rp.post_alive = true;
    }
    return rows.emplace(v, rp).first->second;
  };

  RowPatch& xv = touch(x);
  RowPatch& yv = touch(y);
  xv.post_alive = yv.post_alive = true;
  for (Color d : comp) {
    Vertex w = nbr(site_v, d);
    touch(site_v).post[d] = x;
    xv.post[d] = site_v;
    yv.post[d] = w;
    touch(w).post[d] = y;
  }
  for (Color c : C) {
    xv.post[c] = y;
    yv.post[c] = x;
  }

  MoveEntry e;
  e.kind = "create";
  e.note = "C=" + color_set_str(C) + " site=" + std::to_string(site_v) + ":" +
           std::to_string(site_c) + (group.empty() ? "" : " group=" + group);
  for (auto& [v, rp] : rows) e.patch.push_back(rp);
  e.created = {x, y};
  commit(std::move(e));
  cls_[static_cast<size_t>(x)] = static_cast<std::int8_t>(1 - cls(site_v));
  cls_[static_cast<size_t>(y)] = static_cast<std::int8_t>(cls(site_v));
  return {x, y};
}

std::pair<Vertex, Vertex> MoveSession::create_dipole_cuts(
    std::array<Color, 2> C, std::pair<Vertex, Vertex> cut1,
    std::pair<Vertex, Vertex> cut2, const std::string& group) {
  if (C[0] > C[1]) std::swap(C[0], C[1]);
  std::vector<Color> comp = complement_of({C[0], C[1]});
  const Color d1 = comp[0], d2 = comp[1];
  Vertex p1 = cut1.first, q1 = cut1.second;
  if (p1 < 0 || p1 >= capacity() || !alive(p1) || nbr(p1, d1) != q1)
    fail("BadSite", "cut1 is not a " + std::to_string(d1) + "-edge");
  if (nbr(cut2.first, d2) != cut2.second)
    fail("BadSite", "cut2 is not a " + std::to_string(d2) + "-edge");

  // walk the {d1,d2}-bigon from the oriented cut1 dart to locate cut2
  Vertex s = -1, t = -1;
  {
    Vertex cur = q1;
    Color next = d2;
    while (true) {
      Vertex nxt = nbr(cur, next);
      if (next == d2) {
        if ((cur == cut2.first && nxt == cut2.second) ||
            (cur == cut2.second && nxt == cut2.first)) {
          s = cur;
          t = nxt;
          break;
        }
      }
      cur = nxt;
      next = (next == d1) ? d2 : d1;
      if (cur == p1 && next == d1)
        fail("BadSite", "cut edges are not on one bigon");
    }
  }

  Vertex x = capacity(), y = capacity() + 1;
  std::map<Vertex, RowPatch> rows;
  auto touch = [&](Vertex v) -> RowPatch& {
    auto it = rows.find(v);
    if (it != rows.end()) return it->second;
    RowPatch rp;
    rp.v = v;
    if (v < capacity()) {
      rp.pre_alive = alive(v);
      rp.pre = adj_[static_cast<size_t>(v)];
      rp.post_alive = rp.pre_alive;
      rp.post = rp.pre;
    } else {
      rp.post_alive = true;
    }
    return rows.emplace(v, rp).first->second;
  };

  RowPatch& xv = touch(x);
  RowPatch& yv = touch(y);
  xv.post_alive = yv.post_alive = true;
  // x joins p1 (d1) and t (d2); y joins q1 (d1) and s (d2)
  xv.post[d1] = p1;
  touch(p1).post[d1] = x;
  xv.post[d2] = t;
  touch(t).post[d2] = x;
  yv.post[d1] = q1;
  touch(q1).post[d1] = y;
  yv.post[d2] = s;
  touch(s).post[d2] = y;
  for (Color c : {C[0], C[1]}) {
    xv.post[c] = y;
    yv.post[c] = x;
  }

  MoveEntry e;
  e.kind = "create";
  e.note = "C=" + color_set_str({C[0], C[1]}) + " cuts=" + std::to_string(p1) +
           "-" + std::to_string(q1) + "/" + std::to_string(s) + "-" +
           std::to_string(t) + (group.empty() ? "" : " group=" + group);
  for (auto& [v, rp] : rows) e.patch.push_back(rp);
  e.created = {x, y};
  commit(std::move(e));
  cls_[static_cast<size_t>(x)] = static_cast<std::int8_t>(1 - cls(p1));
  cls_[static_cast<size_t>(y)] = static_cast<std::int8_t>(cls(p1));
  return {x, y};
}

void MoveSession::cancel_dipole(const Dipole& d, const std::string& group) {
  Dipole dd = d;
  std::sort(dd.colors.begin(), dd.colors.end());
  if (!dipole_valid(dd))
    fail("StaleDipole", "pair {" + std::to_string(d.u) + "," +
                            std::to_string(d.v) + "} is not a current " +
                            std::to_string(d.colors.size()) + "-dipole");

  std::map<Vertex, RowPatch> rows;
  auto touch = [&](Vertex v) -> RowPatch& {
    auto it = rows.find(v);
    if (it != rows.end()) return it->second;
    RowPatch rp;
    rp.v = v;
    rp.pre_alive = alive(v);
    rp.pre = adj_[static_cast<size_t>(v)];
    rp.post_alive = rp.pre_alive;
    rp.post = rp.pre;
    return rows.emplace(v, rp).first->second;
  };

  for (Color c : complement_of(dd.colors)) {
    Vertex a = nbr(dd.u, c), b = nbr(dd.v, c);
    touch(a).post[c] = b;
    touch(b).post[c] = a;
  }
  RowPatch& ur = touch(dd.u);
  ur.post_alive = false;
  ur.post = {-1, -1, -1, -1};
  RowPatch& vr = touch(dd.v);
  vr.post_alive = false;
  vr.post = {-1, -1, -1, -1};

  MoveEntry e;
  e.kind = "cancel";
  e.note = "C=" + color_set_str(dd.colors) + " pair=" + std::to_string(dd.u) +
           "," + std::to_string(dd.v) + (group.empty() ? "" : " group=" + group);
  for (auto& [v, rp] : rows) e.patch.push_back(rp);
  e.deleted = {dd.u, dd.v};
  commit(std::move(e));
}

void MoveSession::swap_neighbors(Vertex u, Vertex v, Color a, Color b,
                                 const std::string& note) {
  if (!alive(u) || !alive(v) || u == v) fail("BadSite", "bad twist pair");
  for (Color c : {a, b})
    if (nbr(u, c) == v)
      fail("BadSite", "twist pair joined by color " + std::to_string(c));

  std::map<Vertex, RowPatch> rows;
  auto touch = [&](Vertex w) -> RowPatch& {
    auto it = rows.find(w);
    if (it != rows.end()) return it->second;
    RowPatch rp;
    rp.v = w;
    rp.pre_alive = alive(w);
    rp.pre = adj_[static_cast<size_t>(w)];
    rp.post_alive = rp.pre_alive;
    rp.post = rp.pre;
    return rows.emplace(w, rp).first->second;
  };

  for (Color c : {a, b}) {
    Vertex x = nbr(u, c), y = nbr(v, c);
    touch(u).post[c] = y;
    touch(y).post[c] = u;
    touch(v).post[c] = x;
    touch(x).post[c] = v;
  }

  MoveEntry e;
  e.kind = "twist";
  e.note = "pair=" + std::to_string(u) + "," + std::to_string(v) + " colors=" +
           std::to_string(a) + std::to_string(b) +
           (note.empty() ? "" : " " + note);
  for (auto& [w, rp] : rows) e.patch.push_back(rp);
  commit(std::move(e));
}

void MoveSession::apply_entry(const MoveEntry& e) {
  for (const RowPatch& rp : e.patch) {
    bool cur_alive = rp.v < capacity() && alive(rp.v);
    if (cur_alive != rp.pre_alive)
      fail("StaleDipole", "replay mismatch: liveness of vertex " +
                              std::to_string(rp.v));
    if (cur_alive && adj_[static_cast<size_t>(rp.v)] != rp.pre)
      fail("StaleDipole",
           "replay mismatch: row of vertex " + std::to_string(rp.v));
  }
  MoveEntry copy = e;
  commit(std::move(copy));
  for (const RowPatch& rp : e.patch) {
    if (!rp.pre_alive && rp.post_alive) {
      // class from any live neighbor
      for (Color c = 0; c < kColors; ++c) {
        Vertex w = rp.post[c];
        if (w >= 0 && w < capacity() && w != rp.v && cls_[static_cast<size_t>(w)] >= 0) {
          cls_[static_cast<size_t>(rp.v)] =
              static_cast<std::int8_t>(1 - cls_[static_cast<size_t>(w)]);
          break;
        }
      }
    }
  }
}

void MoveSession::apply_inverse(const MoveEntry& e) { apply_entry(e.inverted()); }

MoveSession::Compaction MoveSession::compact() const {
  Compaction out;
  out.to_dense.assign(static_cast<size_t>(capacity()), -1);
  for (Vertex v = 0; v < capacity(); ++v) {
    if (!alive(v)) continue;
    out.to_dense[static_cast<size_t>(v)] = static_cast<Vertex>(out.to_session.size());
    out.to_session.push_back(v);
  }
  std::vector<AdjRow> table(out.to_session.size());
  for (size_t d = 0; d < out.to_session.size(); ++d)
    for (Color c = 0; c < kColors; ++c)
      table[d][c] = out.to_dense[static_cast<size_t>(
          adj_[static_cast<size_t>(out.to_session[d])][c])];
  out.gem = Gem::build(table);
  return out;
}

std::vector<Dipole> find_dipoles(const Gem& g, int k) {
  if (k < 1 || k > 3) fail("BadSite", "dipole order must be 1, 2 or 3");
  std::vector<Dipole> out;
  // partitions reused across pairs
  std::array<ResiduePartition, 4> triples;
  std::map<std::pair<Color, Color>, ResiduePartition> bigons;
  if (k == 1)
    for (Color c = 0; c < kColors; ++c) triples[static_cast<size_t>(c)] =
        triple_partition(g, c);
  if (k == 2)
    for (Color a = 0; a < kColors; ++a)
      for (Color b = a + 1; b < kColors; ++b)
        bigons[{a, b}] = bigon_partition(g, a, b);

  for (Vertex u = 0; u < g.size(); ++u) {
    std::set<Vertex> nbrs;
    for (Color c = 0; c < kColors; ++c) nbrs.insert(g.nbr(u, c));
    for (Vertex v : nbrs) {
      if (v <= u) continue;
      std::vector<Color> joining;
      for (Color c = 0; c < kColors; ++c)
        if (g.nbr(u, c) == v) joining.push_back(c);
      if (static_cast<int>(joining.size()) != k) continue;
      bool valid = true;
      if (k == 1) {
        const ResiduePartition& part = triples[static_cast<size_t>(joining[0])];
        valid = part.id_of[u] != part.id_of[v];
      } else if (k == 2) {
        std::vector<Color> comp = complement_of(joining);
        const ResiduePartition& part = bigons[{comp[0], comp[1]}];
        valid = part.id_of[u] != part.id_of[v];
      }
      if (valid) out.push_back({u, v, joining});
    }
  }
  return out;
}

namespace {

MoveOutcome finish(MoveSession& s) {
  MoveOutcome out;
  MoveSession::Compaction c = s.compact();
  out.gem = std::move(c.gem);
  out.to_dense = std::move(c.to_dense);
  out.log = s.take_log();
  return out;
}

}  // namespace

MoveOutcome cancel_dipole(const Gem& g, const Dipole& d) {
  MoveSession s(g);
  s.cancel_dipole(d);
  return finish(s);
}

MoveOutcome create_dipole(const Gem& g, std::pair<Vertex, Color> site,
                          const std::vector<Color>& C) {
  MoveSession s(g);
  s.create_dipole(site.first, site.second, C);
  return finish(s);
}

MoveOutcome trisect_bigon(const Gem& g, const Residue& bigon) {
  if (bigon.colors.size() != 2 || bigon.vertices.empty())
    fail("BadResidue", "trisect needs a bigon");
  const Color a = bigon.colors[0], b = bigon.colors[1];
  std::vector<Vertex> cur = bigon_through(g, a, b, bigon.vertices[0]);
  std::set<Vertex> expect(bigon.vertices.begin(), bigon.vertices.end());
  if (std::set<Vertex>(cur.begin(), cur.end()) != expect)
    fail("BadResidue", "stale bigon descriptor");

  std::vector<Color> C = complement_of({a, b});
  MoveSession s(g);
  std::vector<Vertex> sorted(cur.begin(), cur.end());
  std::sort(sorted.begin(), sorted.end());
  Vertex site1 = sorted.front();
  s.create_dipole(site1, a, C, "trisect");
  // lowest original vertex on the remainder piece (everything but the
  // freshly split-off 2-gon through site1)
  Vertex site2 = -1;
  for (Vertex v : sorted) {
    if (v != site1 && !s.same_bigon(v, site1, a, b)) {
      site2 = v;
      break;
    }
  }
  if (site2 < 0) fail("BadResidue", "bigon too small to trisect");
  s.create_dipole(site2, a, C, "trisect");
  return finish(s);
}

MoveOutcome double_8_move(const Gem& g, Vertex v, Color k) {
  if (k < 1 || k >= kColors) fail("BadSite", "k must be a nonzero color");
  if (v < 0 || v >= g.size()) fail("BadSite", "vertex out of range");
  std::vector<Color> ij;
  for (Color c = 1; c < kColors; ++c)
    if (c != k) ij.push_back(c);
  MoveSession s(g);
  s.create_dipole(v, 0, ij, "double8");        // splits the 0k-gon at v
  s.create_dipole(v, ij[0], {0, k}, "double8");  // splits the ij-gon at v
  return finish(s);
}

void simplify_in_session(MoveSession& s) {
  auto candidate_colors = [&](Vertex u, Vertex v) {
    return s.joining_colors(u, v);
  };
  std::set<std::pair<Vertex, Vertex>> pending;
  auto push_pair = [&](Vertex u, Vertex v) {
    if (u == v) return;
    pending.insert({std::min(u, v), std::max(u, v)});
  };
  for (Vertex v = 0; v < s.capacity(); ++v) {
    if (!s.alive(v)) continue;
    for (Color c = 0; c < kColors; ++c) push_pair(v, s.nbr(v, c));
  }
  // 1-dipoles strictly before 2-dipoles, lowest pair first
  for (int k = 1; k <= 2;) {
    bool progressed = false;
    for (auto it = pending.begin(); it != pending.end();) {
      auto [u, v] = *it;
      if (!s.alive(u) || !s.alive(v)) {
        it = pending.erase(it);
        continue;
      }
      std::vector<Color> joining = candidate_colors(u, v);
      if (static_cast<int>(joining.size()) != k) {
        ++it;
        continue;
      }
      Dipole d{u, v, joining};
      if (!s.dipole_valid(d)) {
        ++it;
        continue;
      }
      // remember outside neighbors to requeue the rejoined pairs
      std::vector<std::pair<Vertex, Vertex>> rejoins;
      for (Color c = 0; c < kColors; ++c)
        if (std::find(joining.begin(), joining.end(), c) == joining.end())
          rejoins.push_back({s.nbr(u, c), s.nbr(v, c)});
      s.cancel_dipole(d, "simplify");
      pending.erase(pending.find({u, v}));
      for (auto [a, b] : rejoins) {
        push_pair(a, b);
        for (Color c = 0; c < kColors; ++c) {
          push_pair(a, s.nbr(a, c));
          push_pair(b, s.nbr(b, c));
        }
      }
      progressed = true;
      if (k == 2) k = 1;  // a cancellation can expose new 1-dipoles
      break;
    }
    if (!progressed) ++k;
  }
}

MoveOutcome simplify(const Gem& g) {
  if (!g.connected()) fail("Disconnected", "simplify needs a connected gem");
  MoveSession s(g);
  simplify_in_session(s);
  return finish(s);
}

Gem replay(const Gem& start, const MoveLog& log) {
  MoveSession s(start);
  for (const MoveEntry& e : log.entries) s.apply_entry(e);
  return s.compact().gem;
}

}  // namespace gem3

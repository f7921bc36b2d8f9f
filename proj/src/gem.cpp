#include "gem3/gem.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

namespace gem3 {

Gem Gem::build(const std::vector<AdjRow>& table) {
  const Vertex n = static_cast<Vertex>(table.size());
  if (n <= 0) fail("ImproperColoring", "empty adjacency table");
  for (Vertex v = 0; v < n; ++v) {
    for (Color c = 0; c < kColors; ++c) {
      Vertex w = table[v][c];
      if (w < 0 || w >= n)
        fail("ImproperColoring", "vertex " + std::to_string(v) + " color " +
                                     std::to_string(c) + " out of range");
      if (w == v)
        fail("NonSymmetricAdjacency", "half-loop at vertex " +
                                          std::to_string(v) + " color " +
                                          std::to_string(c));
    }
  }
  for (Vertex v = 0; v < n; ++v)
    for (Color c = 0; c < kColors; ++c)
      if (table[table[v][c]][c] != v)
        fail("NonSymmetricAdjacency",
             "color " + std::to_string(c) + " edge at vertex " +
                 std::to_string(v) + " not mirrored by " +
                 std::to_string(table[v][c]));
  Gem g;
  g.adj_ = table;
  g.cls_.assign(n, -1);
  for (Vertex s = 0; s < n; ++s) {
    if (g.cls_[s] >= 0) continue;
    g.cls_[s] = 0;
    std::deque<Vertex> queue{s};
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop_front();
      for (Color c = 0; c < kColors; ++c) {
        Vertex w = g.adj_[v][c];
        if (g.cls_[w] < 0) {
          g.cls_[w] = static_cast<std::int8_t>(1 - g.cls_[v]);
          queue.push_back(w);
        } else if (g.cls_[w] == g.cls_[v]) {
          fail("NotBipartite", "odd cycle through vertex " + std::to_string(w) +
                                   " (color " + std::to_string(c) + ")");
        }
      }
    }
  }
  return g;
}

bool Gem::connected() const {
  if (adj_.empty()) return false;
  std::vector<char> seen(adj_.size(), 0);
  std::deque<Vertex> queue{0};
  seen[0] = 1;
  Vertex reached = 1;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Color c = 0; c < kColors; ++c) {
      Vertex w = adj_[v][c];
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        queue.push_back(w);
      }
    }
  }
  return reached == size();
}

Gem gem_s3_2() {
  return Gem::build({{1, 1, 1, 1}, {0, 0, 0, 0}});
}

std::vector<Vertex> bigon_through(const Gem& g, Color a, Color b, Vertex v) {
  std::vector<Vertex> cycle;
  Vertex cur = v;
  Color next = a;
  do {
    cycle.push_back(cur);
    cur = g.nbr(cur, next);
    next = (next == a) ? b : a;
  } while (cur != v || next != a);
  return cycle;
}

ResiduePartition bigon_partition(const Gem& g, Color a, Color b) {
  ResiduePartition part;
  part.id_of.assign(g.size(), -1);
  for (Vertex v = 0; v < g.size(); ++v) {
    if (part.id_of[v] >= 0) continue;
    int id = part.count++;
    for (Vertex w : bigon_through(g, a, b, v)) part.id_of[w] = id;
  }
  return part;
}

ResiduePartition triple_partition(const Gem& g, Color missing) {
  ResiduePartition part;
  part.id_of.assign(g.size(), -1);
  for (Vertex s = 0; s < g.size(); ++s) {
    if (part.id_of[s] >= 0) continue;
    int id = part.count++;
    std::deque<Vertex> queue{s};
    part.id_of[s] = id;
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop_front();
      for (Color c = 0; c < kColors; ++c) {
        if (c == missing) continue;
        Vertex w = g.nbr(v, c);
        if (part.id_of[w] < 0) {
          part.id_of[w] = id;
          queue.push_back(w);
        }
      }
    }
  }
  return part;
}

std::vector<Residue> residues(const Gem& g, const std::vector<Color>& colors) {
  std::vector<Color> cs = colors;
  std::sort(cs.begin(), cs.end());
  if (!(cs.size() == 2 || cs.size() == 3) ||
      std::unique(cs.begin(), cs.end()) != cs.end() || cs.front() < 0 ||
      cs.back() >= kColors)
    fail("ImproperColoring", "residue color set must be 2 or 3 distinct colors");

  std::vector<Residue> out;
  if (cs.size() == 2) {
    std::vector<char> seen(g.size(), 0);
    for (Vertex v = 0; v < g.size(); ++v) {
      if (seen[v]) continue;
      Residue r;
      r.colors = cs;
      r.id = static_cast<int>(out.size());
      r.vertices = bigon_through(g, cs[0], cs[1], v);
      for (Vertex w : r.vertices) seen[w] = 1;
      out.push_back(std::move(r));
    }
  } else {
    Color missing = 0;
    for (Color c = 0; c < kColors; ++c)
      if (std::find(cs.begin(), cs.end(), c) == cs.end()) missing = c;
    std::vector<char> seen(g.size(), 0);
    for (Vertex s = 0; s < g.size(); ++s) {
      if (seen[s]) continue;
      Residue r;
      r.colors = cs;
      r.id = static_cast<int>(out.size());
      std::deque<Vertex> queue{s};
      seen[s] = 1;
      while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        r.vertices.push_back(v);
        for (Color c = 0; c < kColors; ++c) {
          if (c == missing) continue;
          Vertex w = g.nbr(v, c);
          if (!seen[w]) {
            seen[w] = 1;
            queue.push_back(w);
          }
        }
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

ManifoldReport validate_manifold(const Gem& g) {
  ManifoldReport report;
  report.connected = g.connected();
  report.pass = true;
  for (Color missing = 0; missing < kColors; ++missing) {
    std::array<Color, 3> triple{};
    int t = 0;
    for (Color c = 0; c < kColors; ++c)
      if (c != missing) triple[t++] = c;

    ResiduePartition part = triple_partition(g, missing);
    std::vector<Vertex> vcount(part.count, 0);
    for (Vertex v = 0; v < g.size(); ++v) vcount[part.id_of[v]]++;

    // bigons interior to each 3-residue: one count per color pair within it
    std::vector<long> bcount(part.count, 0);
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        ResiduePartition bp = bigon_partition(g, triple[p], triple[q]);
        std::vector<char> counted(bp.count, 0);
        for (Vertex v = 0; v < g.size(); ++v) {
          if (!counted[bp.id_of[v]]) {
            counted[bp.id_of[v]] = 1;
            bcount[part.id_of[v]]++;
          }
        }
      }
    }
    for (int r = 0; r < part.count; ++r) {
      ManifoldReportLine line;
      line.colors = triple;
      line.residue_id = r;
      line.v = vcount[r];
      line.e = 3L * vcount[r] / 2;
      line.b = bcount[r];
      line.pass = (line.v - line.e + line.b == 2);
      if (!line.pass) report.pass = false;
      report.lines.push_back(line);
    }
  }
  return report;
}

std::string ManifoldReport::summary() const {
  std::ostringstream os;
  os << "manifold=" << (pass ? "pass" : "fail")
     << " connected=" << (connected ? "yes" : "no") << "\n";
  for (const auto& l : lines) {
    os << "residue colors={" << l.colors[0] << l.colors[1] << l.colors[2]
       << "} id=" << l.residue_id << " v=" << l.v << " e=" << l.e
       << " b=" << l.b << " " << (l.pass ? "pass" : "FAIL") << "\n";
  }
  return os.str();
}

CrystallizationCheck is_crystallization(const Gem& g) {
  if (!g.connected()) fail("Disconnected", "crystallization check needs a connected gem");
  CrystallizationCheck res;
  res.ok = true;
  for (Color missing = 0; missing < kColors; ++missing) {
    if (triple_partition(g, missing).count != 1) {
      res.ok = false;
      break;
    }
  }
  if (!res.ok) {
    // find a 1-dipole edge as witness: u,v joined by exactly one edge with
    // the endpoints in distinct residues of the other three colors
    for (Vertex v = 0; v < g.size() && !res.witness; ++v) {
      for (Color c = 0; c < kColors && !res.witness; ++c) {
        Vertex w = g.nbr(v, c);
        int parallel = 0;
        for (Color d = 0; d < kColors; ++d)
          if (g.nbr(v, d) == w) ++parallel;
        if (parallel != 1) continue;
        ResiduePartition part = triple_partition(g, c);
        if (part.id_of[v] != part.id_of[w]) res.witness = {v, c};
      }
    }
  }
  return res;
}

namespace {

// BFS relabeling from a fixed start: deterministic because neighbors are
// visited in color order. Returns the flattened relabeled table.
std::vector<Vertex> bfs_code(const Gem& g, Vertex start) {
  const Vertex n = g.size();
  std::vector<Vertex> new_id(n, -1), order;
  order.reserve(n);
  new_id[start] = 0;
  order.push_back(start);
  for (Vertex next = 1, head = 0; head < static_cast<Vertex>(order.size());
       ++head) {
    Vertex v = order[head];
    for (Color c = 0; c < kColors; ++c) {
      Vertex w = g.nbr(v, c);
      if (new_id[w] < 0) {
        new_id[w] = next++;
        order.push_back(w);
      }
    }
  }
  std::vector<Vertex> code(static_cast<size_t>(n) * 4);
  for (Vertex v = 0; v < n; ++v)
    for (Color c = 0; c < kColors; ++c)
      code[static_cast<size_t>(new_id[v]) * 4 + c] = new_id[g.nbr(v, c)];
  return code;
}

}  // namespace

std::string canonical_code(const Gem& g) {
  if (!g.connected()) fail("Disconnected", "canonical_code needs a connected gem");
  std::vector<Vertex> best;
  for (Vertex s = 0; s < g.size(); ++s) {
    std::vector<Vertex> code = bfs_code(g, s);
    if (best.empty() || code < best) best = std::move(code);
  }
  std::ostringstream os;
  os << "gem " << g.size() << "\n";
  for (Vertex v = 0; v < g.size(); ++v) {
    for (Color c = 0; c < kColors; ++c)
      os << (c ? " " : "") << best[static_cast<size_t>(v) * 4 + c] + 1;
    os << "\n";
  }
  return os.str();
}

namespace {

std::vector<Gem> components_of(const Gem& g) {
  std::vector<int> comp(g.size(), -1);
  int ncomp = 0;
  for (Vertex s = 0; s < g.size(); ++s) {
    if (comp[s] >= 0) continue;
    int id = ncomp++;
    std::deque<Vertex> queue{s};
    comp[s] = id;
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop_front();
      for (Color c = 0; c < kColors; ++c) {
        Vertex w = g.nbr(v, c);
        if (comp[w] < 0) {
          comp[w] = id;
          queue.push_back(w);
        }
      }
    }
  }
  std::vector<std::vector<Vertex>> members(ncomp);
  for (Vertex v = 0; v < g.size(); ++v) members[comp[v]].push_back(v);
  std::vector<Gem> out;
  for (const auto& m : members) {
    std::vector<Vertex> local(g.size(), -1);
    for (size_t idx = 0; idx < m.size(); ++idx) local[m[idx]] = static_cast<Vertex>(idx);
    std::vector<AdjRow> table(m.size());
    for (size_t idx = 0; idx < m.size(); ++idx)
      for (Color c = 0; c < kColors; ++c)
        table[idx][c] = local[g.nbr(m[idx], c)];
    out.push_back(Gem::build(table));
  }
  return out;
}

}  // namespace

bool isomorphic(const Gem& a, const Gem& b) {
  if (a.size() != b.size()) return false;
  if (a.connected() && b.connected())
    return canonical_code(a) == canonical_code(b);
  std::vector<std::string> ca, cb;
  for (const Gem& g : components_of(a)) ca.push_back(canonical_code(g));
  for (const Gem& g : components_of(b)) cb.push_back(canonical_code(g));
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  return ca == cb;
}

std::string write_gem(const Gem& g) {
  std::ostringstream os;
  os << "gem " << g.size() << "\n";
  for (Vertex v = 0; v < g.size(); ++v) {
    for (Color c = 0; c < kColors; ++c) os << (c ? " " : "") << g.nbr(v, c) + 1;
    os << "\n";
  }
  return os.str();
}

Gem parse_gem(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::string> meaningful;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream probe(line);
    std::string tok;
    if (probe >> tok) meaningful.push_back(line);
  }
  if (meaningful.empty()) fail("ParseError", "empty .gem input");
  std::istringstream head(meaningful[0]);
  std::string magic;
  long n = 0;
  if (!(head >> magic >> n) || magic != "gem" || n <= 0)
    fail("ParseError", "expected header 'gem <v>'");
  if (static_cast<long>(meaningful.size()) != n + 1)
    fail("ParseError", "expected " + std::to_string(n) + " adjacency rows");
  std::vector<AdjRow> table(static_cast<size_t>(n));
  for (long v = 0; v < n; ++v) {
    std::istringstream row(meaningful[static_cast<size_t>(v) + 1]);
    for (Color c = 0; c < kColors; ++c) {
      long w;
      if (!(row >> w) || w < 1 || w > n)
        fail("ParseError", "bad neighbor on row " + std::to_string(v + 1));
      table[static_cast<size_t>(v)][c] = static_cast<Vertex>(w - 1);
    }
  }
  return Gem::build(table);
}

Gem load_gem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_gem(buf.str());
}

void save_gem_file(const Gem& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("IoError", "cannot write " + path);
  out << write_gem(g);
}

bool ColorTriple::valid() const {
  std::array<Color, 3> cs{i, j, k};
  std::sort(cs.begin(), cs.end());
  return cs == std::array<Color, 3>{1, 2, 3};
}

}  // namespace gem3

#include "gem3/rules.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gem3 {

namespace {

void validate_fragment(const RuleFragment& f, const std::string& where) {
  std::set<std::pair<Vertex, Color>> leg_slots(f.legs.begin(), f.legs.end());
  if (leg_slots.size() != f.legs.size())
    fail("InvalidRuleFile", where + ": duplicate leg");
  for (Vertex v = 0; v < f.size(); ++v) {
    for (Color c = 0; c < kColors; ++c) {
      Vertex w = f.adj[static_cast<size_t>(v)][c];
      bool is_leg = leg_slots.count({v, c}) > 0;
      if (w < 0) {
        if (!is_leg)
          fail("InvalidRuleFile", where + ": open slot not declared as leg");
      } else {
        if (is_leg) fail("InvalidRuleFile", where + ": leg slot has a neighbor");
        if (w >= f.size() || w == v ||
            f.adj[static_cast<size_t>(w)][c] != v)
          fail("InvalidRuleFile", where + ": fragment edge not mirrored");
      }
    }
  }
}

}  // namespace

void RewriteRule::validate() const {
  validate_fragment(pattern, name + " pattern");
  validate_fragment(replacement, name + " replacement");
  if (pattern.legs.size() != replacement.legs.size())
    fail("InvalidRuleFile", name + ": leg counts differ");
  for (size_t l = 0; l < pattern.legs.size(); ++l)
    if (pattern.legs[l].second != replacement.legs[l].second)
      fail("InvalidRuleFile", name + ": leg color sequences differ");
  for (Vertex m : marks)
    if (m < 0 || m >= replacement.size())
      fail("InvalidRuleFile", name + ": mark out of range");
}

RewriteRule RewriteRule::permuted(const std::array<Color, 4>& color_map) const {
  auto apply = [&](const RuleFragment& f) {
    RuleFragment out;
    out.adj.assign(f.adj.size(), AdjRow{-1, -1, -1, -1});
    for (Vertex v = 0; v < f.size(); ++v)
      for (Color c = 0; c < kColors; ++c)
        out.adj[static_cast<size_t>(v)][color_map[c]] =
            f.adj[static_cast<size_t>(v)][c];
    for (auto [v, c] : f.legs) out.legs.push_back({v, color_map[c]});
    return out;
  };
  RewriteRule out;
  out.name = name;
  out.pattern = apply(pattern);
  out.replacement = apply(replacement);
  out.marks = marks;
  out.validate();
  return out;
}

RewriteRule RewriteRule::reversed() const {
  RewriteRule out;
  out.name = name + "-reversed";
  out.pattern = replacement;
  out.replacement = pattern;
  out.validate();
  return out;
}

RewriteRule parse_rule(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::string> toks;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream probe(line);
    std::string t;
    while (probe >> t) toks.push_back(t);
  }
  size_t pos = 0;
  auto next = [&]() -> std::string {
    if (pos >= toks.size()) fail("InvalidRuleFile", "truncated rule file");
    return toks[pos++];
  };
  auto next_int = [&]() { return std::stol(next()); };

  RewriteRule r;
  if (next() != "rule") fail("InvalidRuleFile", "expected 'rule <name>'");
  r.name = next();

  auto read_fragment = [&](const std::string& keyword) {
    if (next() != keyword) fail("InvalidRuleFile", "expected '" + keyword + "'");
    RuleFragment f;
    long m = next_int();
    if (m <= 0) fail("InvalidRuleFile", "bad fragment size");
    f.adj.assign(static_cast<size_t>(m), AdjRow{-1, -1, -1, -1});
    for (long v = 0; v < m; ++v) {
      for (Color c = 0; c < kColors; ++c) {
        std::string t = next();
        if (t == "-") continue;
        long w = std::stol(t);
        if (w < 1 || w > m) fail("InvalidRuleFile", "fragment neighbor range");
        f.adj[static_cast<size_t>(v)][c] = static_cast<Vertex>(w - 1);
      }
    }
    if (next() != "legs") fail("InvalidRuleFile", "expected 'legs'");
    long nl = next_int();
    for (long l = 0; l < nl; ++l) {
      long v = next_int();
      long c = next_int();
      if (v < 1 || v > m || c < 0 || c > 3)
        fail("InvalidRuleFile", "leg out of range");
      f.legs.push_back({static_cast<Vertex>(v - 1), static_cast<Color>(c)});
    }
    return f;
  };

  r.pattern = read_fragment("pattern");
  r.replacement = read_fragment("replacement");
  while (pos < toks.size()) {
    std::string t = next();
    if (t == "end") break;
    if (t == "mark") {
      while (pos < toks.size() && toks[pos] != "end")
        r.marks.push_back(static_cast<Vertex>(std::stol(next()) - 1));
    } else {
      fail("InvalidRuleFile", "unexpected token '" + t + "'");
    }
  }
  r.validate();
  return r;
}

std::string write_rule(const RewriteRule& r) {
  std::ostringstream os;
  os << "rule " << r.name << "\n";
  auto dump = [&](const std::string& kw, const RuleFragment& f) {
    os << kw << " " << f.size() << "\n";
    for (Vertex v = 0; v < f.size(); ++v) {
      for (Color c = 0; c < kColors; ++c) {
        Vertex w = f.adj[static_cast<size_t>(v)][c];
        os << (c ? " " : "");
        if (w < 0)
          os << "-";
        else
          os << w + 1;
      }
      os << "\n";
    }
    os << "legs " << f.legs.size() << "\n";
    for (auto [v, c] : f.legs) os << v + 1 << " " << c << "\n";
  };
  dump("pattern", r.pattern);
  dump("replacement", r.replacement);
  if (!r.marks.empty()) {
    os << "mark";
    for (Vertex m : r.marks) os << " " << m + 1;
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

RewriteRule load_rule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("RuleUnavailable", "cannot open rule file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rule(buf.str());
}

namespace {

// Deterministic forced extension: map pattern component anchors to gem
// vertices in increasing order, following internal edges.
bool extend_match(const Gem& g, const RuleFragment& pat, Match& m,
                  std::vector<char>& used, Vertex pv, Vertex gv) {
  if (m[static_cast<size_t>(pv)] >= 0) return m[static_cast<size_t>(pv)] == gv;
  if (used[static_cast<size_t>(gv)]) return false;
  m[static_cast<size_t>(pv)] = gv;
  used[static_cast<size_t>(gv)] = 1;
  for (Color c = 0; c < kColors; ++c) {
    Vertex pw = pat.adj[static_cast<size_t>(pv)][c];
    if (pw < 0) continue;
    if (!extend_match(g, pat, m, used, pw, g.nbr(gv, c))) return false;
  }
  return true;
}

bool match_components(const Gem& g, const RuleFragment& pat,
                      const std::vector<Vertex>& anchors, size_t idx, Match& m,
                      std::vector<char>& used) {
  if (idx == anchors.size()) return true;
  Vertex anchor = anchors[idx];
  if (m[static_cast<size_t>(anchor)] >= 0)
    return match_components(g, pat, anchors, idx + 1, m, used);
  for (Vertex gv = 0; gv < g.size(); ++gv) {
    Match saved_m = m;
    std::vector<char> saved_u = used;
    if (extend_match(g, pat, m, used, anchor, gv) &&
        match_components(g, pat, anchors, idx + 1, m, used))
      return true;
    m = std::move(saved_m);
    used = std::move(saved_u);
  }
  return false;
}

bool verify_match(const MoveSession& s, const RuleFragment& pat, const Match& m) {
  if (static_cast<Vertex>(m.size()) != pat.size()) return false;
  std::set<Vertex> seen;
  for (Vertex pv = 0; pv < pat.size(); ++pv) {
    Vertex gv = m[static_cast<size_t>(pv)];
    if (gv < 0 || gv >= s.capacity() || !s.alive(gv)) return false;
    if (!seen.insert(gv).second) return false;
    for (Color c = 0; c < kColors; ++c) {
      Vertex pw = pat.adj[static_cast<size_t>(pv)][c];
      if (pw >= 0 && s.nbr(gv, c) != m[static_cast<size_t>(pw)]) return false;
    }
  }
  return true;
}

}  // namespace

std::optional<Match> find_match(const Gem& g, const RewriteRule& r) {
  const RuleFragment& pat = r.pattern;
  // one anchor per pattern component, least vertex first
  std::vector<int> comp(static_cast<size_t>(pat.size()), -1);
  std::vector<Vertex> anchors;
  for (Vertex s = 0; s < pat.size(); ++s) {
    if (comp[static_cast<size_t>(s)] >= 0) continue;
    anchors.push_back(s);
    std::deque<Vertex> queue{s};
    comp[static_cast<size_t>(s)] = static_cast<int>(anchors.size()) - 1;
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop_front();
      for (Color c = 0; c < kColors; ++c) {
        Vertex w = pat.adj[static_cast<size_t>(v)][c];
        if (w >= 0 && comp[static_cast<size_t>(w)] < 0) {
          comp[static_cast<size_t>(w)] = comp[static_cast<size_t>(v)];
          queue.push_back(w);
        }
      }
    }
  }
  Match m(static_cast<size_t>(pat.size()), -1);
  std::vector<char> used(static_cast<size_t>(g.size()), 0);
  if (match_components(g, pat, anchors, 0, m, used)) return m;
  return std::nullopt;
}

RuleApplied apply_rule(MoveSession& s, const RewriteRule& r, const Match& m) {
  r.validate();
  if (!verify_match(s, r.pattern, m))
    fail("NoMatch", "site map is not an embedding of pattern '" + r.name + "'");

  std::set<Vertex> matched(m.begin(), m.end());

  // Resolve legs: outside attachment or leg-to-leg pairing.
  const size_t nl = r.pattern.legs.size();
  std::vector<Vertex> outside(nl, -1);
  std::vector<int> paired(nl, -1);
  std::map<std::pair<Vertex, Color>, int> leg_of_slot;
  for (size_t l = 0; l < nl; ++l) {
    auto [pv, c] = r.pattern.legs[l];
    leg_of_slot[{m[static_cast<size_t>(pv)], c}] = static_cast<int>(l);
  }
  for (size_t l = 0; l < nl; ++l) {
    auto [pv, c] = r.pattern.legs[l];
    Vertex target = s.nbr(m[static_cast<size_t>(pv)], c);
    if (matched.count(target)) {
      auto it = leg_of_slot.find({target, c});
      if (it == leg_of_slot.end())
        fail("NoMatch", "leg of '" + r.name + "' runs into a non-leg slot");
      paired[l] = it->second;
    } else {
      outside[l] = target;
    }
  }
  for (size_t l = 0; l < nl; ++l)
    if (paired[l] >= 0 && paired[static_cast<size_t>(paired[l])] != static_cast<int>(l))
      fail("NoMatch", "inconsistent leg pairing in '" + r.name + "'");

  const Vertex base = s.capacity();
  const Vertex nr = r.replacement.size();

  std::map<Vertex, RowPatch> rows;
  auto touch = [&](Vertex v) -> RowPatch& {
    auto it = rows.find(v);
    if (it != rows.end()) return it->second;
    RowPatch rp;
    rp.v = v;
    if (v < base) {
      rp.pre_alive = s.alive(v);
      for (Color c = 0; c < kColors; ++c) rp.pre[c] = s.nbr(v, c);
      rp.post_alive = rp.pre_alive;
      rp.post = rp.pre;
    } else {
      rp.post_alive = true;
    }
    return rows.emplace(v, rp).first->second;
  };

  for (Vertex gv : matched) {
    RowPatch& rp = touch(gv);
    rp.post_alive = false;
    rp.post = {-1, -1, -1, -1};
  }
  for (Vertex rv = 0; rv < nr; ++rv) {
    RowPatch& rp = touch(base + rv);
    rp.post_alive = true;
    for (Color c = 0; c < kColors; ++c) {
      Vertex rw = r.replacement.adj[static_cast<size_t>(rv)][c];
      if (rw >= 0) rp.post[c] = base + rw;
    }
  }
  for (size_t l = 0; l < nl; ++l) {
    auto [rv, c] = r.replacement.legs[l];
    Vertex self = base + rv;
    if (paired[l] >= 0) {
      auto [rv2, c2] = r.replacement.legs[static_cast<size_t>(paired[l])];
      (void)c2;
      touch(self).post[c] = base + rv2;
    } else {
      touch(self).post[c] = outside[l];
      touch(outside[l]).post[c] = self;
    }
  }

  MoveEntry e;
  e.kind = "rule:" + r.name;
  std::ostringstream note;
  note << "match=";
  for (size_t idx = 0; idx < m.size(); ++idx)
    note << (idx ? "," : "") << m[idx];
  note << " new=" << base << ".." << base + nr - 1;
  e.note = note.str();
  for (auto& [v, rp] : rows) e.patch.push_back(rp);
  for (Vertex gv : matched) e.deleted.push_back(gv);
  for (Vertex rv = 0; rv < nr; ++rv) e.created.push_back(base + rv);

  // dry-run on a copy; reject rules that break structural validity
  MoveSession probe = s;
  probe.apply_entry(e);
  {
    std::vector<Vertex> dense_of(static_cast<size_t>(probe.capacity()), -1);
    Vertex n = 0;
    for (Vertex v = 0; v < probe.capacity(); ++v)
      if (probe.alive(v)) dense_of[static_cast<size_t>(v)] = n++;
    std::vector<AdjRow> table(static_cast<size_t>(n));
    bool ok = true;
    for (Vertex v = 0; v < probe.capacity() && ok; ++v) {
      if (!probe.alive(v)) continue;
      for (Color c = 0; c < kColors; ++c) {
        Vertex w = probe.nbr(v, c);
        if (w < 0 || w >= probe.capacity() || !probe.alive(w)) {
          ok = false;
          break;
        }
        table[static_cast<size_t>(dense_of[static_cast<size_t>(v)])][c] =
            dense_of[static_cast<size_t>(w)];
      }
    }
    if (ok) {
      try {
        Gem::build(table);
      } catch (const Error&) {
        ok = false;
      }
    }
    if (!ok)
      fail("PostValidationFailed",
           "rule '" + r.name + "' would break gem validity; gem unchanged");
  }

  s.apply_entry(e);
  RuleApplied out;
  for (Vertex rv = 0; rv < nr; ++rv) out.created.push_back(base + rv);
  return out;
}

RuleOutcome apply_rule(const Gem& g, const RewriteRule& r, const Match& m) {
  MoveSession s(g);
  RuleApplied applied = apply_rule(s, r, m);
  MoveSession::Compaction c = s.compact();
  RuleOutcome out;
  out.gem = std::move(c.gem);
  out.log = s.take_log();
  for (Vertex v : applied.created)
    out.created.push_back(c.to_dense[static_cast<size_t>(v)]);
  return out;
}

}  // namespace gem3

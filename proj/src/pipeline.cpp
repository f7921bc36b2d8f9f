#include "gem3/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "gem3/rules.hpp"

namespace gem3 {

namespace {

namespace fs = std::filesystem;

long jk_gon_count(const Gem& g, const ColorTriple& colors) {
  return bigon_partition(g, std::min(colors.j, colors.k),
                         std::max(colors.j, colors.k))
      .count;
}

void require_valid(const Gem& g, const std::string& stage) {
  ManifoldReport rep = validate_manifold(g);
  if (!rep.pass)
    fail("PostValidationFailed", "stage " + stage + " fails the manifold check");
}

std::string fmt_long(long v) { return std::to_string(v); }

}  // namespace

PipelineResult run_pipeline(const PseudoComplex& t, const PipelineOptions& opt) {
  auto clock_start = std::chrono::steady_clock::now();
  if (!opt.colors.valid()) fail("BadSite", "colors must permute 1,2,3");
  if (!t.closed()) fail("OpenBoundary", "pipeline input must be closed");
  if (!t.connected()) fail("Disconnected", "pipeline input must be connected");
  t.check_involutive();

  PipelineResult r;
  r.colors = opt.colors;
  const ColorTriple colors = opt.colors;

  // T -> T' -> G0
  PseudoComplex t_prime = barycentric_subdivide(t);
  r.g0 = dual_gem(t_prime);
  if (r.g0.size() != 24 * t.tets)
    fail("InvalidColoring", "dual gem size is not 24n");
  require_valid(r.g0, "G0");

  // G0 -> G1
  {
    MoveOutcome out = simplify(r.g0);
    r.g1 = out.gem;
    r.log_simplify = out.log;
  }
  require_valid(r.g1, "G1");
  if (!is_crystallization(r.g1).ok)
    fail("PostValidationFailed", "G1 is not a crystallization");

  // G1 -> G2 (spiked cactus) unless G1^jk already serves
  bool need_knit = !opt.skip_knit_if_connected;
  if (!need_knit) {
    GjkGraph h1 = build_gjk(r.g1, colors);
    if (!h1.connected()) {
      need_knit = true;
    } else {
      try {
        spanning_tree(h1);
      } catch (const Error&) {
        need_knit = true;  // NoPreTwistorTree on the skip path
      }
    }
  }
  if (need_knit) {
    MoveSession s(r.g1);
    cactify_in_session(s, colors, 0);
    remove_black_trivial_angles_in_session(s, colors, 0);
    add_spikes_in_session(s, colors, 0);
    r.g2 = s.compact().gem;
    r.log_knit = s.take_log();
    r.knit_ran = true;
  } else {
    r.g2 = r.g1;
  }
  require_valid(r.g2, "G2");
  if (!is_crystallization(r.g2).ok)
    fail("PostValidationFailed", "G2 is not a crystallization");
  if (r.knit_ran && r.g2.size() >= 6 * r.g1.size())
    r.stats["knit_bound_violated"] = "yes";  // reported, not fatal

  // G2 -> G: promote every tree edge to a twistor with disjoint labels
  GjkGraph h2 = build_gjk(r.g2, colors);
  if (!h2.connected()) fail("Disconnected", "G2^jk is not connected");
  SpanningTree x = spanning_tree(h2);
  r.p = static_cast<int>(x.edge_ids.size());

  std::vector<TwistorRecord> session_records;
  {
    MoveSession s(r.g2);
    std::vector<Vertex> used;
    for (int eid : x.edge_ids) {
      TwistorRecord rec =
          promote_pretwistor(s, h2.edges[static_cast<size_t>(eid)], colors, used);
      rec.node_u = h2.edges[static_cast<size_t>(eid)].node_u;
      rec.node_v = h2.edges[static_cast<size_t>(eid)].node_v;
      used.push_back(rec.u);
      used.push_back(rec.v);
      session_records.push_back(rec);
    }
    MoveSession::Compaction c = s.compact();
    r.g = c.gem;
    r.log_promote = s.take_log();
    for (TwistorRecord& rec : session_records) {
      rec.u = c.to_dense[static_cast<size_t>(rec.u)];
      rec.v = c.to_dense[static_cast<size_t>(rec.v)];
    }
  }
  require_valid(r.g, "G");

  // G -> G': localize every hinge through the gadget rule
  {
    RewriteRule gadget =
        load_rule_file(opt.rules_dir + "/localize_hinge.rule");
    MoveSession s(r.g);
    for (TwistorRecord& rec : session_records) {
      LocalizeResult lr = localize_hinge(s, gadget, rec, colors);
      rec.u = lr.new_u;
      rec.v = lr.new_v;
    }
    MoveSession::Compaction c = s.compact();
    r.g_prime = c.gem;
    r.log_localize = s.take_log();
    for (TwistorRecord& rec : session_records) {
      rec.u = c.to_dense[static_cast<size_t>(rec.u)];
      rec.v = c.to_dense[static_cast<size_t>(rec.v)];
    }
  }
  r.twistors = session_records;
  require_valid(r.g_prime, "G'");
  if (r.g_prime.size() != r.g.size() + 32 * r.p)
    fail("PostValidationFailed", "localization did not add 32 vertices per hinge");

  for (const TwistorRecord& rec : r.twistors)
    r.descriptors.push_back(
        hinge_descriptor(r.g_prime, rec.u, rec.v, rec.strong, colors));

  // G' -> J': ji-twists along X, leaves-to-root
  std::vector<int> twist_order(r.twistors.size());
  {
    std::iota(twist_order.begin(), twist_order.end(), 0);
    std::vector<int> depth(static_cast<size_t>(h2.nodes), -1);
    std::vector<std::vector<int>> tree_adj(static_cast<size_t>(h2.nodes));
    for (const TwistorRecord& rec : r.twistors) {
      tree_adj[static_cast<size_t>(rec.node_u)].push_back(rec.node_v);
      tree_adj[static_cast<size_t>(rec.node_v)].push_back(rec.node_u);
    }
    std::vector<int> queue{0};
    depth[0] = 0;
    for (size_t head = 0; head < queue.size(); ++head) {
      int x_node = queue[static_cast<size_t>(head)];
      for (int y : tree_adj[static_cast<size_t>(x_node)]) {
        if (depth[static_cast<size_t>(y)] < 0) {
          depth[static_cast<size_t>(y)] = depth[static_cast<size_t>(x_node)] + 1;
          queue.push_back(y);
        }
      }
    }
    std::sort(twist_order.begin(), twist_order.end(), [&](int a, int b) {
      int da = std::max(depth[static_cast<size_t>(r.twistors[static_cast<size_t>(a)].node_u)],
                        depth[static_cast<size_t>(r.twistors[static_cast<size_t>(a)].node_v)]);
      int db = std::max(depth[static_cast<size_t>(r.twistors[static_cast<size_t>(b)].node_u)],
                        depth[static_cast<size_t>(r.twistors[static_cast<size_t>(b)].node_v)]);
      return std::tie(da, a) > std::tie(db, b);
    });
  }
  {
    MoveSession s(r.g_prime);
    r.jk_counts.push_back(jk_gon_count(r.g_prime, colors));
    for (int idx : twist_order) {
      const TwistorRecord& rec = r.twistors[static_cast<size_t>(idx)];
      ji_twist_in_session(s, rec.u, rec.v, colors.i, rec.strong, colors);
      r.jk_counts.push_back(jk_gon_count(s.compact().gem, colors));
    }
    r.j_prime = s.compact().gem;
    r.log_twist = s.take_log();
  }
  require_valid(r.j_prime, "J'");
  if (r.j_prime.size() != r.g_prime.size())
    fail("PostValidationFailed", "twists changed the vertex count");

  auto clock_end = std::chrono::steady_clock::now();
  double ms = std::chrono::duration<double, std::milli>(clock_end - clock_start).count();
  r.stats["tets"] = fmt_long(t.tets);
  r.stats["colors"] = std::to_string(colors.i) + std::to_string(colors.j) +
                      std::to_string(colors.k);
  r.stats["v_g0"] = fmt_long(r.g0.size());
  r.stats["v_g1"] = fmt_long(r.g1.size());
  r.stats["v_g2"] = fmt_long(r.g2.size());
  r.stats["v_g"] = fmt_long(r.g.size());
  r.stats["v_gprime"] = fmt_long(r.g_prime.size());
  r.stats["v_jprime"] = fmt_long(r.j_prime.size());
  r.stats["p"] = fmt_long(r.p);
  r.stats["knit_ran"] = r.knit_ran ? "yes" : "no";
  r.stats["jk_gons_gprime"] = fmt_long(r.jk_counts.front());
  r.stats["jk_gons_jprime"] = fmt_long(r.jk_counts.back());
  r.stats["wall_ms"] = fmt_long(static_cast<long>(ms));
  return r;
}

void PipelineResult::save(const std::string& dir) const {
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir + "/" + name);
    if (!out) fail("IoError", "cannot write " + dir + "/" + name);
    out << content;
  };
  put("stage-G0.gem", write_gem(g0));
  put("stage-G1.gem", write_gem(g1));
  put("stage-G2.gem", write_gem(g2));
  put("stage-G.gem", write_gem(g));
  put("stage-Gprime.gem", write_gem(g_prime));
  put("stage-Jprime.gem", write_gem(j_prime));
  put("movelog-simplify.txt", log_simplify.text());
  put("movelog-knit.txt", log_knit.text());
  put("movelog-promote.txt", log_promote.text());
  put("movelog-localize.txt", log_localize.text());
  put("movelog-twist.txt", log_twist.text());

  std::ostringstream tw;
  for (size_t idx = 0; idx < twistors.size(); ++idx) {
    const TwistorRecord& rec = twistors[idx];
    tw << "twistor " << rec.u << " " << rec.v << " strong " << rec.strong
       << " nodes " << rec.node_u << " " << rec.node_v << " shared "
       << rec.shared_zero << " " << rec.shared_mixed << " ; "
       << descriptors[idx].line(colors) << "\n";
  }
  put("twistors.txt", tw.str());

  std::ostringstream st;
  st << "knit_ran=" << (knit_ran ? "yes" : "no") << "\n";
  st << "p=" << p << "\n";
  st << "colors=" << colors.i << colors.j << colors.k << "\n";
  st << "jk_counts=";
  for (size_t idx = 0; idx < jk_counts.size(); ++idx)
    st << (idx ? "," : "") << jk_counts[idx];
  st << "\n";
  for (const auto& [key, value] : stats) st << key << "=" << value << "\n";
  put("stats.txt", st.str());
}

PipelineResult PipelineResult::load(const std::string& dir) {
  PipelineResult r;
  auto slurp = [&](const std::string& name) {
    std::ifstream in(dir + "/" + name);
    if (!in) fail("IoError", "cannot open " + dir + "/" + name);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  r.g0 = parse_gem(slurp("stage-G0.gem"));
  r.g1 = parse_gem(slurp("stage-G1.gem"));
  r.g2 = parse_gem(slurp("stage-G2.gem"));
  r.g = parse_gem(slurp("stage-G.gem"));
  r.g_prime = parse_gem(slurp("stage-Gprime.gem"));
  r.j_prime = parse_gem(slurp("stage-Jprime.gem"));
  r.log_simplify = MoveLog::parse(slurp("movelog-simplify.txt"));
  r.log_knit = MoveLog::parse(slurp("movelog-knit.txt"));
  r.log_promote = MoveLog::parse(slurp("movelog-promote.txt"));
  r.log_localize = MoveLog::parse(slurp("movelog-localize.txt"));
  r.log_twist = MoveLog::parse(slurp("movelog-twist.txt"));

  std::istringstream st(slurp("stats.txt"));
  std::string line;
  while (std::getline(st, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    r.stats[key] = value;
    if (key == "knit_ran") r.knit_ran = value == "yes";
    if (key == "p") r.p = std::stoi(value);
    if (key == "colors" && value.size() == 3) {
      r.colors.i = value[0] - '0';
      r.colors.j = value[1] - '0';
      r.colors.k = value[2] - '0';
    }
    if (key == "jk_counts") {
      std::istringstream vs(value);
      std::string tok;
      while (std::getline(vs, tok, ',')) r.jk_counts.push_back(std::stol(tok));
    }
  }

  std::istringstream tw(slurp("twistors.txt"));
  while (std::getline(tw, line)) {
    std::istringstream ls(line);
    std::string kw;
    TwistorRecord rec;
    if (!(ls >> kw >> rec.u >> rec.v)) continue;
    if (kw != "twistor") continue;
    std::string tag;
    while (ls >> tag) {
      if (tag == "strong") ls >> rec.strong;
      if (tag == "nodes") ls >> rec.node_u >> rec.node_v;
      if (tag == "shared") ls >> rec.shared_zero >> rec.shared_mixed;
      if (tag == ";") break;
    }
    r.twistors.push_back(rec);
  }
  for (const TwistorRecord& rec : r.twistors)
    r.descriptors.push_back(
        hinge_descriptor(r.g_prime, rec.u, rec.v, rec.strong, r.colors));
  return r;
}

bool VerifyReport::all_pass() const {
  for (const VerifyItem& item : items)
    if (!item.pass && !item.inconclusive) return false;
  return true;
}

std::string VerifyReport::text() const {
  std::ostringstream os;
  for (const VerifyItem& item : items) {
    os << "check=" << item.name << " result="
       << (item.pass ? "pass" : (item.inconclusive ? "inconclusive" : "FAIL"));
    if (!item.detail.empty()) os << " detail=" << item.detail;
    os << "\n";
  }
  os << "overall=" << (all_pass() ? "pass" : "FAIL") << "\n";
  return os.str();
}

VerifyReport verify_pipeline(const PipelineResult& r) {
  VerifyReport rep;
  auto add = [&](const std::string& name, bool pass, const std::string& detail = "",
                 bool inconclusive = false) {
    rep.items.push_back({name, pass, inconclusive, detail});
  };

  const std::vector<std::pair<std::string, const Gem*>> stages{
      {"G0", &r.g0},      {"G1", &r.g1},       {"G2", &r.g2},
      {"G", &r.g},        {"G'", &r.g_prime},  {"J'", &r.j_prime}};
  for (const auto& [name, gem] : stages) {
    ManifoldReport mr = validate_manifold(*gem);
    add("validity:" + name, mr.pass, mr.pass ? "" : "euler check failed");
  }

  // homology chain
  HomologyResult h_m = homology_h1(gem_to_complex(r.g0));
  bool chain_ok = true;
  for (const auto& [name, gem] : stages) {
    if (name == "J'") continue;
    HomologyResult h = homology_h1(gem_to_complex(*gem));
    if (!(h == h_m)) chain_ok = false;
  }
  add("h1:invariant-G0..G'", chain_ok, "H1(M)=" + h_m.str());
  HomologyResult h_j = homology_h1(gem_to_complex(r.j_prime));
  add("h1:J'-trivial", h_j.betti_1 == 0 && h_j.torsion.empty(), h_j.str());

  // one jk-gon per twist
  bool jk_ok = static_cast<int>(r.jk_counts.size()) == r.p + 1;
  for (size_t idx = 0; idx + 1 < r.jk_counts.size(); ++idx)
    jk_ok = jk_ok && (r.jk_counts[idx + 1] == r.jk_counts[idx] - 1);
  add("twists:jk-gon-decrement", jk_ok);

  // twist involution: reapplying the twists to J' restores G' exactly
  {
    MoveSession s(r.j_prime);
    bool ok = true;
    try {
      for (const TwistorRecord& rec : r.twistors)
        s.swap_neighbors(rec.u, rec.v, r.colors.i, rec.strong, "verify-inverse");
    } catch (const Error&) {
      ok = false;
    }
    ok = ok && write_gem(s.compact().gem) == write_gem(r.g_prime);
    add("twists:involution-roundtrip", ok);
  }

  // descriptors pairwise disjoint, total 2p
  {
    std::set<Vertex> labels;
    for (const HingeDescriptor& d : r.descriptors) {
      labels.insert(d.u);
      labels.insert(d.v);
    }
    add("descriptors:disjoint-2p",
        static_cast<int>(labels.size()) == 2 * r.p &&
            static_cast<int>(r.descriptors.size()) == r.p);
  }

  // sphere certificate (a): J' is a crystallization with a unique jk-gon
  {
    bool crystal = is_crystallization(r.j_prime).ok;
    long gons = bigon_partition(r.j_prime, std::min(r.colors.j, r.colors.k),
                                std::max(r.colors.j, r.colors.k))
                    .count;
    add("certificate:unique-jk-gon", crystal && gons == 1,
        "jk-gons=" + std::to_string(gons));
  }
  // sphere certificate (b): greedy simplification reaches the 2-vertex gem;
  // failure is inconclusive by design
  {
    Gem cur = simplify(r.j_prime).gem;
    for (int guard = 0; cur.size() > 2 && guard < 64; ++guard) {
      std::vector<Dipole> d3 = find_dipoles(cur, 3);
      if (d3.empty()) break;
      cur = cancel_dipole(cur, d3.front()).gem;
      cur = simplify(cur).gem;
    }
    bool reached = cur.size() == 2;
    add("certificate:simplifies-to-s3", reached,
        "final_v=" + std::to_string(cur.size()), !reached);
  }
  return rep;
}

AppendixReport appendix_check(const Gem& g_prime, const Gem& g_ref,
                              const ColorTriple& colors) {
  AppendixReport rep;
  const Vertex target = g_ref.size();

  auto step_name = [&](const std::vector<Color>& cs) {
    // match the reduction's color set against the appendix captions
    auto is = [&](std::initializer_list<Color> want) {
      return std::vector<Color>(want) == cs;
    };
    std::vector<Color> sorted0k{0, colors.k}, sorted0i{0, colors.i},
        sorted0j{0, colors.j}, sortedjk{std::min(colors.j, colors.k),
                                        std::max(colors.j, colors.k)},
        sortedij{std::min(colors.i, colors.j), std::max(colors.i, colors.j)};
    std::sort(sorted0k.begin(), sorted0k.end());
    std::sort(sorted0i.begin(), sorted0i.end());
    std::sort(sorted0j.begin(), sorted0j.end());
    if (is({colors.k})) return std::string("step 1/12: {k}-dipole");
    if (is({0})) return std::string("step 2/12: {0}-dipole");
    if (is({colors.j})) return std::string("step 3/12: {j}-dipole");
    if (is({colors.i})) return std::string("step 4/12: {i}-dipole");
    if (cs == sorted0k) return std::string("steps 5,11/12: {0,k}-dipole");
    if (cs == sorted0i) return std::string("steps 6,8/12: {0,i}-dipole");
    if (cs == sortedjk) return std::string("steps 6,8/12: {j,k}-dipole");
    if (cs == sorted0j) return std::string("step 10/12: {0,j}-dipole");
    if (cs == sortedij) return std::string("step 12/12: {i,j}-dipole");
    return std::string("2-dipole cancelation");
  };

  // DFS preferring the dipole at the latest-created vertices; this unwinds
  // gadget cocoons directly, the backtracking is a safety net
  std::set<std::string> visited;
  long budget = 4000;
  std::vector<std::string> steps;

  std::function<bool(const Gem&)> dfs = [&](const Gem& cur) -> bool {
    if (cur.size() == target) {
      if (isomorphic(cur, g_ref)) return true;
      rep.stuck_code = canonical_code(cur);
      return false;
    }
    if (--budget < 0) return false;
    if (!visited.insert(canonical_code(cur)).second) return false;

    std::vector<Dipole> candidates;
    for (int k = 1; k <= 2; ++k)
      for (const Dipole& d : find_dipoles(cur, k)) candidates.push_back(d);
    std::sort(candidates.begin(), candidates.end(),
              [](const Dipole& a, const Dipole& b) {
                return std::max(a.u, a.v) > std::max(b.u, b.v);
              });
    for (const Dipole& d : candidates) {
      Gem next = cancel_dipole(cur, d).gem;
      steps.push_back(step_name(d.colors) + " at {" + std::to_string(d.u) +
                      "," + std::to_string(d.v) + "}");
      if (dfs(next)) return true;
      steps.pop_back();
    }
    if (rep.stuck_code.empty() && candidates.empty())
      rep.stuck_code = canonical_code(cur);
    return false;
  };

  rep.ok = dfs(g_prime);
  rep.steps = steps;
  return rep;
}

}  // namespace gem3

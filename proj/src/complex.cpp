#include "gem3/complex.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

namespace gem3 {

bool PseudoComplex::closed() const {
  for (const auto& tet : glue)
    for (const auto& fg : tet)
      if (fg.boundary()) return false;
  return true;
}

bool PseudoComplex::connected() const {
  if (tets == 0) return false;
  std::vector<char> seen(static_cast<size_t>(tets), 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    int t = queue.front();
    queue.pop_front();
    for (const auto& fg : glue[static_cast<size_t>(t)]) {
      if (fg.boundary() || seen[static_cast<size_t>(fg.tet)]) continue;
      seen[static_cast<size_t>(fg.tet)] = 1;
      ++reached;
      queue.push_back(fg.tet);
    }
  }
  return reached == tets;
}

void PseudoComplex::check_involutive() const {
  for (int t = 0; t < tets; ++t) {
    for (int f = 0; f < 4; ++f) {
      const FaceGluing& fg = glue[static_cast<size_t>(t)][f];
      if (fg.boundary()) continue;
      if (fg.tet < 0 || fg.tet >= tets || fg.face < 0 || fg.face >= 4)
        fail("NonInvolutiveGluing", "gluing target out of range at tet " +
                                        std::to_string(t + 1));
      if (fg.tet == t && fg.face == f)
        fail("NonInvolutiveGluing", "face glued to itself at tet " +
                                        std::to_string(t + 1) + " face " +
                                        std::to_string(f));
      const FaceGluing& back = glue[static_cast<size_t>(fg.tet)][fg.face];
      if (back.tet != t || back.face != f)
        fail("NonInvolutiveGluing", "gluing of tet " + std::to_string(t + 1) +
                                        " face " + std::to_string(f) +
                                        " is not mirrored");
      for (int l = 0; l < 4; ++l) {
        if (l == f) continue;
        int m = fg.map[l];
        if (m < 0 || m >= 4 || m == fg.face)
          fail("NonInvolutiveGluing", "bad label map at tet " +
                                          std::to_string(t + 1));
        if (back.map[m] != l)
          fail("NonInvolutiveGluing", "label map at tet " +
                                          std::to_string(t + 1) + " face " +
                                          std::to_string(f) +
                                          " is not involutive");
      }
    }
  }
  // label maps must be injective
  for (int t = 0; t < tets; ++t) {
    for (int f = 0; f < 4; ++f) {
      const FaceGluing& fg = glue[static_cast<size_t>(t)][f];
      if (fg.boundary()) continue;
      std::array<char, 4> hit{0, 0, 0, 0};
      for (int l = 0; l < 4; ++l) {
        if (l == f) continue;
        if (hit[fg.map[l]]++)
          fail("NonInvolutiveGluing",
               "label map not injective at tet " + std::to_string(t + 1));
      }
    }
  }
}

PseudoComplex parse_triangulation(const std::string& text) {
  return parse_triangulation(text, true);
}

PseudoComplex parse_triangulation(const std::string& text, bool allow_boundary) {
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
  if (meaningful.empty()) fail("ParseError", "empty .tri input");
  std::istringstream head(meaningful[0]);
  std::string magic;
  int n = 0;
  if (!(head >> magic >> n) || magic != "tri" || n <= 0)
    fail("ParseError", "expected header 'tri <n>'");

  PseudoComplex t;
  t.tets = n;
  t.glue.assign(static_cast<size_t>(n), {});
  std::vector<std::array<char, 4>> stated(static_cast<size_t>(n), {0, 0, 0, 0});

  for (size_t li = 1; li < meaningful.size(); ++li) {
    std::istringstream row(meaningful[li]);
    int tt, ff;
    std::string arrow, rhs;
    if (!(row >> tt >> ff >> arrow) || arrow != "->")
      fail("ParseError", "bad gluing line: " + meaningful[li]);
    if (tt < 1 || tt > n || ff < 0 || ff > 3)
      fail("ParseError", "tet/face out of range: " + meaningful[li]);
    FaceGluing fg;
    if (!(row >> rhs)) fail("ParseError", "truncated gluing line");
    if (rhs == "boundary") {
      fg = FaceGluing{};
    } else {
      int t2 = std::stoi(rhs);
      int f2;
      std::string colon, word;
      if (!(row >> f2 >> colon >> word) || colon != ":" || word.size() != 3)
        fail("ParseError", "bad gluing line: " + meaningful[li]);
      if (t2 < 1 || t2 > n || f2 < 0 || f2 > 3)
        fail("ParseError", "gluing target out of range: " + meaningful[li]);
      fg.tet = t2 - 1;
      fg.face = f2;
      // sorted non-ff labels map to word's digits in order
      int pos = 0;
      for (int l = 0; l < 4; ++l) {
        if (l == ff) continue;
        int dst = word[static_cast<size_t>(pos++)] - '0';
        if (dst < 0 || dst > 3)
          fail("ParseError", "bad label in gluing: " + meaningful[li]);
        fg.map[l] = dst;
      }
    }
    auto& slot = t.glue[static_cast<size_t>(tt - 1)][ff];
    if (stated[static_cast<size_t>(tt - 1)][ff]) {
      if (slot.tet != fg.tet || slot.face != fg.face || slot.map != fg.map)
        fail("NonInvolutiveGluing", "conflicting gluings for tet " +
                                        std::to_string(tt) + " face " +
                                        std::to_string(ff));
    }
    slot = fg;
    stated[static_cast<size_t>(tt - 1)][ff] = 1;
  }

  // derive unstated halves from their partners
  for (int tt = 0; tt < n; ++tt) {
    for (int ff = 0; ff < 4; ++ff) {
      const FaceGluing& fg = t.glue[static_cast<size_t>(tt)][ff];
      if (!stated[static_cast<size_t>(tt)][ff] || fg.boundary()) continue;
      auto& back = t.glue[static_cast<size_t>(fg.tet)][fg.face];
      if (!stated[static_cast<size_t>(fg.tet)][fg.face]) {
        back.tet = tt;
        back.face = ff;
        back.map = {-1, -1, -1, -1};
        for (int l = 0; l < 4; ++l)
          if (l != ff) back.map[fg.map[l]] = l;
        stated[static_cast<size_t>(fg.tet)][fg.face] = 1;
      }
    }
  }
  for (int tt = 0; tt < n; ++tt)
    for (int ff = 0; ff < 4; ++ff)
      if (!stated[static_cast<size_t>(tt)][ff] && !allow_boundary)
        fail("OpenBoundary", "face " + std::to_string(ff) + " of tet " +
                                 std::to_string(tt + 1) + " unglued");

  t.check_involutive();
  if (!allow_boundary && !t.closed())
    fail("OpenBoundary", "complex has boundary faces");
  return t;
}

std::string write_triangulation(const PseudoComplex& t) {
  std::ostringstream os;
  os << "tri " << t.tets << "\n";
  for (int tt = 0; tt < t.tets; ++tt) {
    for (int ff = 0; ff < 4; ++ff) {
      const FaceGluing& fg = t.glue[static_cast<size_t>(tt)][ff];
      os << tt + 1 << " " << ff << " -> ";
      if (fg.boundary()) {
        os << "boundary\n";
        continue;
      }
      os << fg.tet + 1 << " " << fg.face << " : ";
      for (int l = 0; l < 4; ++l)
        if (l != ff) os << fg.map[l];
      os << "\n";
    }
  }
  return os.str();
}

PseudoComplex load_tri_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_triangulation(buf.str());
}

namespace {

// lexicographic indexing of the 24 permutations of {0,1,2,3}
const std::array<std::array<int, 4>, 24>& perms() {
  static const std::array<std::array<int, 4>, 24> table = [] {
    std::array<std::array<int, 4>, 24> out{};
    std::array<int, 4> p{0, 1, 2, 3};
    for (int idx = 0;; ++idx) {
      out[static_cast<size_t>(idx)] = p;
      if (!std::next_permutation(p.begin(), p.end())) break;
    }
    return out;
  }();
  return table;
}

int perm_index(const std::array<int, 4>& p) {
  const auto& t = perms();
  for (int idx = 0; idx < 24; ++idx)
    if (t[static_cast<size_t>(idx)] == p) return idx;
  return -1;
}

}  // namespace

PseudoComplex barycentric_subdivide(const PseudoComplex& t) {
  if (!t.closed()) fail("OpenBoundary", "subdivision needs a closed complex");
  t.check_involutive();
  PseudoComplex out;
  out.tets = t.tets * 24;
  out.glue.assign(static_cast<size_t>(out.tets), {});
  auto chamber = [](int tet, int pidx) { return tet * 24 + pidx; };

  for (int tet = 0; tet < t.tets; ++tet) {
    for (int pidx = 0; pidx < 24; ++pidx) {
      const std::array<int, 4>& pi = perms()[static_cast<size_t>(pidx)];
      int self = chamber(tet, pidx);
      for (int c = 0; c < 4; ++c) {
        int target;
        if (c < 3) {
          std::array<int, 4> q = pi;
          std::swap(q[static_cast<size_t>(c)], q[static_cast<size_t>(c) + 1]);
          target = chamber(tet, perm_index(q));
        } else {
          const FaceGluing& fg = t.glue[static_cast<size_t>(tet)][pi[3]];
          std::array<int, 4> q{fg.map[pi[0]], fg.map[pi[1]], fg.map[pi[2]],
                               fg.face};
          target = chamber(fg.tet, perm_index(q));
        }
        FaceGluing cg;
        cg.tet = target;
        cg.face = c;
        for (int l = 0; l < 4; ++l) cg.map[l] = (l == c) ? -1 : l;
        out.glue[static_cast<size_t>(self)][c] = cg;
      }
    }
  }
  out.check_involutive();
  return out;
}

bool label_preserving(const PseudoComplex& t) {
  for (int tt = 0; tt < t.tets; ++tt) {
    for (int ff = 0; ff < 4; ++ff) {
      const FaceGluing& fg = t.glue[static_cast<size_t>(tt)][ff];
      if (fg.boundary()) return false;
      if (fg.face != ff) return false;
      for (int l = 0; l < 4; ++l)
        if (l != ff && fg.map[l] != l) return false;
    }
  }
  return true;
}

Gem dual_gem(const PseudoComplex& t_prime) {
  if (!label_preserving(t_prime))
    fail("InvalidColoring",
         "dual gem needs a colored subdivision (label-preserving gluings)");
  std::vector<AdjRow> table(static_cast<size_t>(t_prime.tets));
  for (int tt = 0; tt < t_prime.tets; ++tt)
    for (int ff = 0; ff < 4; ++ff)
      table[static_cast<size_t>(tt)][ff] =
          static_cast<Vertex>(t_prime.glue[static_cast<size_t>(tt)][ff].tet);
  return Gem::build(table);
}

PseudoComplex gem_to_complex(const Gem& g) {
  PseudoComplex out;
  out.tets = g.size();
  out.glue.assign(static_cast<size_t>(out.tets), {});
  for (Vertex v = 0; v < g.size(); ++v) {
    for (Color c = 0; c < kColors; ++c) {
      FaceGluing fg;
      fg.tet = g.nbr(v, c);
      fg.face = c;
      for (int l = 0; l < 4; ++l) fg.map[l] = (l == c) ? -1 : l;
      out.glue[static_cast<size_t>(v)][c] = fg;
    }
  }
  return out;
}

PseudoComplex connected_sum(const PseudoComplex& a, const PseudoComplex& b) {
  if (!a.closed() || !b.closed())
    fail("OpenBoundary", "connected sum needs closed complexes");
  PseudoComplex out;
  out.tets = a.tets + b.tets;
  out.glue = a.glue;
  out.glue.insert(out.glue.end(), b.glue.begin(), b.glue.end());
  for (int tt = a.tets; tt < out.tets; ++tt)
    for (int ff = 0; ff < 4; ++ff)
      out.glue[static_cast<size_t>(tt)][ff].tet += a.tets;

  // Unglue (tet 0, face 0) of each summand and reglue crosswise. The second
  // cross gluing composes the old maps so that every edge walk of the sum is
  // an A-walk with B-detours spliced in; this keeps edge links spherical.
  const int b0 = a.tets;
  FaceGluing fa = out.glue[0][0];                         // (0,0) -> (ta,fa)
  FaceGluing fb = out.glue[static_cast<size_t>(b0)][0];   // (b0,0) -> (tb,fb)

  auto inverse_on = [](const FaceGluing& fg, int src_face) {
    std::array<int, 4> inv{-1, -1, -1, -1};
    for (int l = 0; l < 4; ++l)
      if (l != src_face) inv[fg.map[l]] = l;
    return inv;
  };

  FaceGluing g1;  // (0,0) <-> (b0,0), identity labels
  g1.tet = b0;
  g1.face = 0;
  g1.map = {-1, 1, 2, 3};
  out.glue[0][0] = g1;
  FaceGluing g1b = g1;
  g1b.tet = 0;
  out.glue[static_cast<size_t>(b0)][0] = g1b;

  // (ta,fa) <-> (tb,fb) with map_b o inv(map_a)
  std::array<int, 4> fa_inv = inverse_on(fa, 0);
  std::array<int, 4> fb_inv = inverse_on(fb, 0);
  FaceGluing g2;
  g2.tet = fb.tet;
  g2.face = fb.face;
  g2.map = {-1, -1, -1, -1};
  for (int l = 0; l < 4; ++l)
    if (l != fa.face) g2.map[l] = fb.map[fa_inv[l]];
  out.glue[static_cast<size_t>(fa.tet)][fa.face] = g2;

  FaceGluing g2b;
  g2b.tet = fa.tet;
  g2b.face = fa.face;
  g2b.map = {-1, -1, -1, -1};
  for (int l = 0; l < 4; ++l)
    if (l != fb.face) g2b.map[l] = fa.map[fb_inv[l]];
  out.glue[static_cast<size_t>(fb.tet)][fb.face] = g2b;

  out.check_involutive();
  return out;
}

}  // namespace gem3

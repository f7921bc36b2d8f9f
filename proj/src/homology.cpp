#include "gem3/homology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace gem3 {

namespace {

using Int = boost::multiprecision::cpp_int;
using Matrix = std::vector<std::vector<Int>>;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] =
          parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);  // keep least element as root
    parent[static_cast<size_t>(b)] = a;
  }
};

// Smith normal form, in place; returns the nonzero diagonal.
std::vector<Int> smith(Matrix& m) {
  const size_t rows = m.size();
  const size_t cols = rows ? m[0].size() : 0;
  std::vector<Int> diag;
  size_t r0 = 0, c0 = 0;
  while (r0 < rows && c0 < cols) {
    // locate entry of least absolute value in the working submatrix
    size_t pr = rows, pc = cols;
    Int best = 0;
    for (size_t r = r0; r < rows; ++r) {
      for (size_t c = c0; c < cols; ++c) {
        if (m[r][c] == 0) continue;
        Int a = abs(m[r][c]);
        if (best == 0 || a < best) {
          best = a;
          pr = r;
          pc = c;
        }
      }
    }
    if (pr == rows) break;  // submatrix all zero
    std::swap(m[r0], m[pr]);
    for (size_t r = 0; r < rows; ++r) std::swap(m[r][c0], m[r][pc]);

    bool again = true;
    while (again) {
      again = false;
      for (size_t r = r0 + 1; r < rows; ++r) {
        if (m[r][c0] == 0) continue;
        Int q = m[r][c0] / m[r0][c0];
        if (q != 0)
          for (size_t c = c0; c < cols; ++c) m[r][c] -= q * m[r0][c];
        if (m[r][c0] != 0) {
          std::swap(m[r], m[r0]);
          again = true;
        }
      }
      for (size_t c = c0 + 1; c < cols; ++c) {
        if (m[r0][c] == 0) continue;
        Int q = m[r0][c] / m[r0][c0];
        if (q != 0)
          for (size_t r = r0; r < rows; ++r) m[r][c] -= q * m[r][c0];
        if (m[r0][c] != 0) {
          for (size_t r = r0; r < rows; ++r) std::swap(m[r][c], m[r][c0]);
          again = true;
        }
      }
      if (!again) {
        // force divisibility of the remaining block by the pivot
        for (size_t r = r0 + 1; r < rows && !again; ++r) {
          for (size_t c = c0 + 1; c < cols; ++c) {
            if (m[r][c] % m[r0][c0] != 0) {
              for (size_t cc = c0; cc < cols; ++cc) m[r0][cc] += m[r][cc];
              again = true;
              break;
            }
          }
        }
      }
    }
    if (m[r0][c0] < 0)
      for (size_t c = c0; c < cols; ++c) m[r0][c] = -m[r0][c];
    diag.push_back(m[r0][c0]);
    ++r0;
    ++c0;
  }
  return diag;
}

HomologyResult h1_oriented(const PseudoComplex& x) {
  const int n = x.tets;

  // vertex orbits
  UnionFind vuf(4 * n);
  auto vid = [](int t, int l) { return 4 * t + l; };
  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      const FaceGluing& fg = x.glue[static_cast<size_t>(t)][f];
      for (int l = 0; l < 4; ++l)
        if (l != f) vuf.unite(vid(t, l), vid(fg.tet, fg.map[l]));
    }
  }

  // directed edge orbits: instance (t, a->b)
  auto did = [](int t, int a, int b) {
    static const int pair_idx[4][4] = {{-1, 0, 1, 2},
                                       {3, -1, 4, 5},
                                       {6, 7, -1, 8},
                                       {9, 10, 11, -1}};
    return 12 * t + pair_idx[a][b];
  };
  UnionFind euf(12 * n);
  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      const FaceGluing& fg = x.glue[static_cast<size_t>(t)][f];
      for (int a = 0; a < 4; ++a) {
        if (a == f) continue;
        for (int b = 0; b < 4; ++b) {
          if (b == f || b == a) continue;
          euf.unite(did(t, a, b), did(fg.tet, fg.map[a], fg.map[b]));
        }
      }
    }
  }

  // orientation consistency: no orbit may contain both directions
  for (int t = 0; t < n; ++t)
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        if (euf.find(did(t, a, b)) == euf.find(did(t, b, a))) return {-1, {}};

  // undirected orbit ids keyed by the lesser of the two directed roots
  std::map<int, int> orbit_of_root;
  std::vector<int> positive_root;           // per orbit
  std::vector<std::array<int, 3>> any_pos;  // (t,a,b) with find == positive
  for (int t = 0; t < n; ++t) {
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        int r1 = euf.find(did(t, a, b));
        int r2 = euf.find(did(t, b, a));
        int key = std::min(r1, r2);
        if (!orbit_of_root.count(key)) {
          int id = static_cast<int>(positive_root.size());
          orbit_of_root[key] = id;
          positive_root.push_back(key);
          any_pos.push_back(r1 == key ? std::array<int, 3>{t, a, b}
                                      : std::array<int, 3>{t, b, a});
        }
      }
    }
  }
  const int ne = static_cast<int>(positive_root.size());
  auto edge_orbit = [&](int t, int a, int b) {
    int r1 = euf.find(did(t, a, b));
    int r2 = euf.find(did(t, b, a));
    return orbit_of_root.at(std::min(r1, r2));
  };
  auto edge_sign = [&](int t, int a, int b) {
    int r = euf.find(did(t, a, b));
    return r == positive_root[static_cast<size_t>(
                     edge_orbit(t, a, b))]
               ? 1
               : -1;
  };

  // dense vertex orbit ids
  std::map<int, int> vorbit;
  for (int t = 0; t < n; ++t)
    for (int l = 0; l < 4; ++l) {
      int r = vuf.find(vid(t, l));
      if (!vorbit.count(r)) {
        int id = static_cast<int>(vorbit.size());
        vorbit[r] = id;
      }
    }
  const int nv = static_cast<int>(vorbit.size());

  // triangle orbits = face pairs; boundary from the lesser representative
  Matrix d2;
  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      const FaceGluing& fg = x.glue[static_cast<size_t>(t)][f];
      if (std::make_pair(fg.tet, fg.face) < std::make_pair(t, f)) continue;
      std::array<int, 3> lab{};
      int w = 0;
      for (int l = 0; l < 4; ++l)
        if (l != f) lab[w++] = l;
      std::vector<Int> row(static_cast<size_t>(ne), 0);
      const int p = lab[0], q = lab[1], r = lab[2];
      row[static_cast<size_t>(edge_orbit(t, q, r))] += edge_sign(t, q, r);
      row[static_cast<size_t>(edge_orbit(t, p, r))] -= edge_sign(t, p, r);
      row[static_cast<size_t>(edge_orbit(t, p, q))] += edge_sign(t, p, q);
      d2.push_back(std::move(row));
    }
  }

  Matrix d1(static_cast<size_t>(ne));
  for (int e = 0; e < ne; ++e) {
    d1[static_cast<size_t>(e)].assign(static_cast<size_t>(nv), 0);
    auto [t, a, b] = any_pos[static_cast<size_t>(e)];
    d1[static_cast<size_t>(e)][static_cast<size_t>(
        vorbit.at(vuf.find(vid(t, b))))] += 1;
    d1[static_cast<size_t>(e)][static_cast<size_t>(
        vorbit.at(vuf.find(vid(t, a))))] -= 1;
  }

  std::vector<Int> s2 = smith(d2);
  std::vector<Int> s1 = smith(d1);
  long rank2 = static_cast<long>(s2.size());
  long rank1 = static_cast<long>(s1.size());

  HomologyResult res;
  res.betti_1 = ne - rank1 - rank2;
  for (const Int& d : s2)
    if (d > 1) res.torsion.push_back(d.convert_to<long>());
  std::sort(res.torsion.begin(), res.torsion.end());
  return res;
}

}  // namespace

HomologyResult homology_h1(const PseudoComplex& x) {
  if (!x.closed()) fail("OpenBoundary", "homology oracle needs a closed complex");
  x.check_involutive();
  HomologyResult res = h1_oriented(x);
  if (res.betti_1 < 0) {
    // some edge orbit self-reversed: one subdivision removes all flips
    res = h1_oriented(barycentric_subdivide(x));
    if (res.betti_1 < 0)
      fail("InvalidColoring", "subdivided complex still orientation-inconsistent");
  }
  return res;
}

std::string HomologyResult::str() const {
  std::ostringstream os;
  os << "Z^" << betti_1;
  for (long t : torsion) os << " + Z/" << t;
  return os.str();
}

std::vector<std::string> smith_diagonal(std::vector<std::vector<long>> m) {
  Matrix mm(m.size());
  for (size_t r = 0; r < m.size(); ++r)
    mm[r].assign(m[r].begin(), m[r].end());
  std::vector<std::string> out;
  for (const Int& d : smith(mm)) out.push_back(d.str());
  return out;
}

}  // namespace gem3

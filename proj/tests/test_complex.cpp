#include "doctest.h"
#include "gem3/complex.hpp"
#include "gem3/homology.hpp"
#include "test_support.hpp"

using namespace gem3;

TEST_CASE("TRI_5 parses to a closed connected 5-tet complex") {
  PseudoComplex t = load_tri_file(test::fixture("tri5.tri"));
  CHECK(t.tets == 5);
  CHECK(t.closed());
  CHECK(t.connected());
}

TEST_CASE("non-involutive gluings are rejected") {
  std::string bad =
      "tri 2\n"
      "1 0 -> 2 0 : 123\n"
      "2 0 -> 1 1 : 023\n";
  CHECK_THROWS_WITH_AS(parse_triangulation(bad),
                       doctest::Contains("not mirrored"), Error);
}

TEST_CASE("boundary faces are rejected for pipeline use") {
  std::string open =
      "tri 1\n"
      "1 0 -> boundary\n"
      "1 1 -> boundary\n"
      "1 2 -> boundary\n"
      "1 3 -> boundary\n";
  PseudoComplex t = parse_triangulation(open);
  CHECK_FALSE(t.closed());
  CHECK_THROWS_AS(parse_triangulation(open, false), Error);
  CHECK_THROWS_AS(barycentric_subdivide(t), Error);
}

TEST_CASE("subdivision chamber counts") {
  CHECK(barycentric_subdivide(test::one_tet_closed()).tets == 24);
  PseudoComplex t5 = load_tri_file(test::fixture("tri5.tri"));
  CHECK(barycentric_subdivide(t5).tets == 120);
  CHECK(label_preserving(barycentric_subdivide(t5)));
}

TEST_CASE("dual gem round trip through gem_to_complex") {
  PseudoComplex t5 = load_tri_file(test::fixture("tri5.tri"));
  PseudoComplex tp = barycentric_subdivide(t5);
  Gem g0 = dual_gem(tp);
  PseudoComplex back = gem_to_complex(g0);
  REQUIRE(back.tets == tp.tets);
  for (int t = 0; t < back.tets; ++t) {
    for (int f = 0; f < 4; ++f) {
      CHECK(back.glue[static_cast<size_t>(t)][f].tet ==
            tp.glue[static_cast<size_t>(t)][f].tet);
      CHECK(back.glue[static_cast<size_t>(t)][f].face ==
            tp.glue[static_cast<size_t>(t)][f].face);
    }
  }
}

TEST_CASE("gem_to_complex of the 2-vertex gem is total and label-glued") {
  PseudoComplex c = gem_to_complex(gem_s3_2());
  CHECK(c.tets == 2);
  CHECK(c.closed());
  CHECK(label_preserving(c));
  c.check_involutive();
}

TEST_CASE("homology oracle: sphere fixtures are trivial") {
  PseudoComplex t5 = load_tri_file(test::fixture("tri5.tri"));
  HomologyResult h = homology_h1(t5);
  CHECK(h.betti_1 == 0);
  CHECK(h.torsion.empty());

  HomologyResult h2 = homology_h1(gem_to_complex(gem_s3_2()));
  CHECK(h2.betti_1 == 0);
  CHECK(h2.torsion.empty());
}

TEST_CASE("homology oracle: RP3 fixture carries Z/2") {
  PseudoComplex rp3 = load_tri_file(test::fixture("trirp3.tri"));
  CHECK(rp3.tets == 2);
  HomologyResult h = homology_h1(rp3);
  CHECK(h.betti_1 == 0);
  REQUIRE(h.torsion.size() == 1);
  CHECK(h.torsion[0] == 2);
}

TEST_CASE("homology is invariant under subdivision") {
  for (const char* name : {"tri5.tri", "trirp3.tri"}) {
    PseudoComplex t = load_tri_file(test::fixture(name));
    CHECK(homology_h1(t) == homology_h1(barycentric_subdivide(t)));
  }
}

TEST_CASE("RP3 passes through the dual gem with homology intact") {
  PseudoComplex rp3 = load_tri_file(test::fixture("trirp3.tri"));
  PseudoComplex tp = barycentric_subdivide(rp3);
  CHECK(tp.tets == 48);
  Gem g0 = dual_gem(tp);
  CHECK(g0.size() == 48);
  CHECK(validate_manifold(g0).pass);
  HomologyResult h = homology_h1(gem_to_complex(g0));
  CHECK(h.betti_1 == 0);
  REQUIRE(h.torsion.size() == 1);
  CHECK(h.torsion[0] == 2);
}

TEST_CASE("homology of a disjoint union is the direct sum") {
  PseudoComplex rp3 = load_tri_file(test::fixture("trirp3.tri"));
  PseudoComplex two;
  two.tets = rp3.tets * 2;
  two.glue = rp3.glue;
  two.glue.insert(two.glue.end(), rp3.glue.begin(), rp3.glue.end());
  for (int t = rp3.tets; t < two.tets; ++t)
    for (int f = 0; f < 4; ++f)
      two.glue[static_cast<size_t>(t)][f].tet += rp3.tets;
  HomologyResult h = homology_h1(two);
  CHECK(h.betti_1 == 0);
  REQUIRE(h.torsion.size() == 2);
  CHECK(h.torsion[0] == 2);
  CHECK(h.torsion[1] == 2);
}

TEST_CASE("connected sums keep the pipeline-relevant invariants") {
  PseudoComplex rp3 = load_tri_file(test::fixture("trirp3.tri"));
  PseudoComplex sum = connected_sum(rp3, rp3);
  CHECK(sum.tets == 4);
  CHECK(sum.closed());
  CHECK(sum.connected());
  // H1(RP3 # RP3) = Z/2 + Z/2
  HomologyResult h = homology_h1(sum);
  CHECK(h.betti_1 == 0);
  REQUIRE(h.torsion.size() == 2);
  // the dual gem of the subdivision is still a valid manifold encoding
  Gem g0 = dual_gem(barycentric_subdivide(sum));
  CHECK(validate_manifold(g0).pass);
}

TEST_CASE("smith normal form on a known matrix") {
  // diag(2,6) has invariant factors 2, 6; a unimodular mix preserves them
  auto diag = smith_diagonal({{2, 0}, {0, 6}});
  REQUIRE(diag.size() == 2);
  CHECK(diag[0] == "2");
  CHECK(diag[1] == "6");
  auto mixed = smith_diagonal({{2, 2}, {2, 8}});
  REQUIRE(mixed.size() == 2);
  CHECK(mixed[0] == "2");
  CHECK(mixed[1] == "6");
}

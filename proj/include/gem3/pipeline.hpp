#pragma once

#include <map>
#include <string>
#include <vector>

#include "gem3/complex.hpp"
#include "gem3/gem.hpp"
#include "gem3/homology.hpp"
#include "gem3/knit.hpp"
#include "gem3/moves.hpp"
#include "gem3/twistor.hpp"

namespace gem3 {

struct PipelineOptions {
  ColorTriple colors;
  bool skip_knit_if_connected = true;
  std::string rules_dir = "rules";
};

// Everything the passage chain produces: stage gems, the spanning tree's
// twistor records (ids valid in both G' and J'), hinge descriptors, move
// logs and stats. Serializes to a directory of deterministic text files.
struct PipelineResult {
  ColorTriple colors;
  bool knit_ran = false;
  int p = 0;
  Gem g0, g1, g2, g, g_prime, j_prime;
  std::vector<TwistorRecord> twistors;
  std::vector<HingeDescriptor> descriptors;
  MoveLog log_simplify, log_knit, log_promote, log_localize, log_twist;
  std::vector<long> jk_counts;  // before the first twist, then after each
  std::map<std::string, std::string> stats;

  void save(const std::string& dir) const;
  static PipelineResult load(const std::string& dir);
};

PipelineResult run_pipeline(const PseudoComplex& t, const PipelineOptions& opt);

struct VerifyItem {
  std::string name;
  bool pass = false;
  bool inconclusive = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyItem> items;
  bool all_pass() const;
  std::string text() const;
};

// Re-checks a pipeline result: per-stage manifold validity, H1 invariance
// across G0..G' with H1(J') trivial, the one-jk-gon-per-twist accounting,
// the twist-involution round trip, descriptor disjointness, and the layered
// sphere certificates (unique jk-gon; greedy simplification to the 2-vertex
// gem as an inconclusive-on-failure supplement).
VerifyReport verify_pipeline(const PipelineResult& r);

struct AppendixReport {
  bool ok = false;
  std::vector<std::string> steps;
  std::string stuck_code;  // canonical code where the search stalled
};

// Executable analogue of the appendix reduction: guided dipole cancellation
// (latest-created sites first, small backtracking fallback) from g_prime
// down to |V(g_ref)|, accepting iff the result is isomorphic to g_ref.
AppendixReport appendix_check(const Gem& g_prime, const Gem& g_ref,
                              const ColorTriple& colors);

}  // namespace gem3

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gem3/gem.hpp"
#include "gem3/moves.hpp"

namespace gem3 {

// A gem fragment: per-slot internal neighbor (>= 0) or -1 for a boundary
// leg. Legs are listed in matched order between pattern and replacement.
struct RuleFragment {
  std::vector<AdjRow> adj;
  std::vector<std::pair<Vertex, Color>> legs;
  Vertex size() const { return static_cast<Vertex>(adj.size()); }
};

struct RewriteRule {
  std::string name;
  RuleFragment pattern;
  RuleFragment replacement;
  std::vector<Vertex> marks;  // designated replacement vertices

  void validate() const;  // throws InvalidRuleFile
  RewriteRule permuted(const std::array<Color, 4>& color_map) const;
  RewriteRule reversed() const;
};

RewriteRule parse_rule(const std::string& text);
std::string write_rule(const RewriteRule& r);
RewriteRule load_rule_file(const std::string& path);

// match[p] = gem vertex playing pattern vertex p
using Match = std::vector<Vertex>;

std::optional<Match> find_match(const Gem& g, const RewriteRule& r);

struct RuleApplied {
  std::vector<Vertex> created;  // session ids of replacement vertices, in order
};

// Replaces the matched pattern occurrence; boundary reattached by leg
// correspondence. Structural validity is checked post hoc; on failure the
// session is left untouched and PostValidationFailed is thrown.
RuleApplied apply_rule(MoveSession& s, const RewriteRule& r, const Match& m);

struct RuleOutcome {
  Gem gem;
  MoveLog log;
  std::vector<Vertex> created;  // dense ids in `gem`
};
RuleOutcome apply_rule(const Gem& g, const RewriteRule& r, const Match& m);

}  // namespace gem3

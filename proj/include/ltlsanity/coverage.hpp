#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ltlsanity/automaton.hpp"
#include "ltlsanity/formula.hpp"

namespace ltlsanity {

using rational = boost::multiprecision::cpp_rational;

/// Edge ids of a path, starting at an initial state.
using edge_path = std::vector<edge_id>;

struct named_literal {
  std::string atom;
  bool negated = false;

  friend bool operator==(const named_literal&, const named_literal&) = default;
  friend auto operator<=>(const named_literal&, const named_literal&) = default;
};

std::vector<named_literal> named_label(const buchi_automaton& a, edge_id e);

constexpr std::size_t default_max_paths = 100000;

/// Almost-simple paths (no vertex more than twice) from an initial state
/// that end in an accepting state, or with an accepting edge in
/// transition-based mode. Prefixes that qualify are listed as well.
std::vector<edge_path> enumerate_paths(const buchi_automaton& a, std::size_t max_paths = default_max_paths);

/// Directed partial coverage of label `a2` by label `a1`.
rational edge_coverage(const std::vector<named_literal>& a1, const std::vector<named_literal>& a2);

/// Best per-edge average over all walks of a2 with as many edges as `pi`.
rational path_coverage(const buchi_automaton& a1, const edge_path& pi, const buchi_automaton& a2);

struct coverage_result {
  rational value;
  std::size_t paths = 0;  // almost-simple accepting paths of a1
  std::vector<std::string> diagnostics;
};

coverage_result automaton_coverage(const buchi_automaton& a1, const buchi_automaton& a2,
                                   std::size_t max_paths = default_max_paths);

struct candidate_options {
  std::size_t count = 40;
  int depth = 3;
  std::uint64_t seed = 1;
  translate_options translation;
};

/// Simple satisfiable, non-valid formulas over `aps`: fixed templates first,
/// then random formulas up to the requested depth.
std::vector<formula> generate_candidates(const std::vector<std::string>& aps, const candidate_options& opts = {});

struct coverage_round {
  formula selected;
  rational coverage;
};

struct coverage_report {
  rational baseline;
  std::size_t baseline_paths = 0;
  std::vector<coverage_round> rounds;
  std::vector<std::string> diagnostics;
};

using translator_fn = std::function<buchi_automaton(const formula&)>;

struct completeness_options {
  std::size_t rounds = 3;
  std::size_t jobs = 1;
  std::size_t max_paths = default_max_paths;
  translate_options translation;
  /// Replaces the built-in translator when set.
  translator_fn translator;
  /// Called after each round; returning false stops the loop.
  std::function<bool(const coverage_round&)> on_round;
};

/// The right-hand side of every coverage check: the conjunction of the
/// required formulas or the disjunction of the forbidden ones.
formula describe_behaviour(const std::vector<formula>& required, const std::vector<formula>& forbidden);

coverage_report completeness_loop(const std::vector<formula>& assumptions, const std::vector<formula>& required,
                                  const std::vector<formula>& forbidden, std::vector<formula> candidates,
                                  const completeness_options& opts = {});

std::string to_percent(const rational& r, int decimals = 1);

}  // namespace ltlsanity

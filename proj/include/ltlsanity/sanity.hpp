#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ltlsanity/automaton.hpp"
#include "ltlsanity/formula.hpp"

namespace ltlsanity {

/// Subset of requirement indices; bit i stands for requirement i.
using index_set = std::uint64_t;

constexpr std::size_t max_requirements = 64;

std::vector<std::size_t> members(index_set s);
index_set make_set(const std::vector<std::size_t>& indices);

enum class direction : std::uint8_t { up, down };

/// A unit of work in the lattice search. Redundancy tasks carry a target.
struct task {
  index_set indices = 0;
  std::optional<std::size_t> target;
  bool checked = false;
  bool consistent = false;
  direction dir = direction::up;
};

/// Decides satisfiability of a conjunction of quantifier-free formulas.
using sat_oracle = std::function<bool(const std::vector<formula>&)>;

struct sanity_options {
  std::size_t jobs = 1;
  translate_options translation;
  /// Replaces the automaton-based check when set.
  sat_oracle oracle;
  /// Keep a log of every satisfiability call (for auditing pruning).
  bool record_checks = false;
};

struct redundancy {
  std::size_t target = 0;
  std::vector<std::size_t> witness;

  friend bool operator==(const redundancy&, const redundancy&) = default;
  friend auto operator<=>(const redundancy&, const redundancy&) = default;
};

struct undecided_set {
  std::optional<std::size_t> target;
  std::vector<std::size_t> indices;
  std::string reason;
};

/// One satisfiability call. `known_before` is the number of log entries
/// completed when the call was issued.
struct check_record {
  std::optional<std::size_t> target;
  index_set indices = 0;
  bool consistent = false;
  std::size_t known_before = 0;
};

struct sanity_report {
  std::vector<std::vector<std::size_t>> minimal_inconsistent;
  std::vector<redundancy> redundancies;
  std::vector<undecided_set> undecided;
  std::size_t checks_performed = 0;
  std::size_t checks_possible = 0;
  std::vector<check_record> log;
};

/// Every nonempty subset with at most one existential member, in increasing
/// numeric order of the bit mask.
std::vector<index_set> candidate_subsets(const std::vector<quantified_formula>& gamma);

/// All minimal inconsistent subsets of `gamma`.
sanity_report find_min_inconsistent(const std::vector<quantified_formula>& gamma, const sanity_options& opts = {});

/// All pairs (target, witness) where the witness is a minimal consistent
/// subset of the other requirements implying the target.
sanity_report find_redundancies(const std::vector<quantified_formula>& gamma, const sanity_options& opts = {});

}  // namespace ltlsanity

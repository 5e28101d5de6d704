#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ltlsanity/formula.hpp"

namespace ltlsanity {

using state_id = std::uint32_t;
using edge_id = std::uint32_t;

/// An atomic proposition index into `buchi_automaton::ap`, possibly negated.
struct literal {
  std::uint32_t atom = 0;
  bool negated = false;

  friend bool operator==(const literal&, const literal&) = default;
  friend auto operator<=>(const literal&, const literal&) = default;
};

struct edge {
  state_id src = 0;
  state_id dst = 0;
  /// Literals that must hold at the source position. Empty means `true`.
  std::vector<literal> label;

  friend bool operator==(const edge&, const edge&) = default;
};

enum class acceptance_mode : std::uint8_t { state_based, transition_based };

/// Thrown when an automaton violates a structural invariant or when the
/// neutral text format is malformed.
class automaton_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a translation or enumeration exceeds its configured limit.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure of an external translator subprocess.
class external_tool_error : public std::runtime_error {
 public:
  external_tool_error(const std::string& msg, int exit_status, std::string stderr_text)
      : std::runtime_error(msg), exit_status_(exit_status), stderr_text_(std::move(stderr_text)) {}
  int exit_status() const { return exit_status_; }
  const std::string& stderr_text() const { return stderr_text_; }

 private:
  int exit_status_;
  std::string stderr_text_;
};

struct buchi_automaton {
  std::size_t num_states = 0;
  std::vector<state_id> initial;
  std::vector<edge> edges;
  acceptance_mode mode = acceptance_mode::state_based;
  std::vector<state_id> accepting_states;  // state_based only, ascending
  std::vector<edge_id> accepting_edges;    // transition_based only, ascending
  std::vector<std::string> ap;

  /// Throws automaton_error on any broken invariant.
  void validate() const;

  bool is_accepting_state(state_id s) const;
  bool is_accepting_edge(edge_id e) const;
  /// Outgoing edge ids per state, in edge order.
  std::vector<std::vector<edge_id>> successors() const;

  friend bool operator==(const buchi_automaton&, const buchi_automaton&) = default;
};

struct lasso {
  std::vector<edge_id> stem;
  std::vector<edge_id> loop;
};

struct translate_options {
  std::size_t max_states = 200000;
};

/// Tableau translation of a quantifier-free formula into a state-based
/// Büchi automaton. State numbering is a deterministic function of the input.
buchi_automaton translate(const formula& f, const translate_options& opts = {});

struct emptiness_result {
  bool empty = true;
  std::optional<lasso> witness;
};

/// Nested depth-first search for an accepting lasso.
emptiness_result is_empty(const buchi_automaton& a);

/// Removes states that are unreachable or cannot reach an accepting cycle.
/// Surviving states keep their relative order. An empty language yields a
/// single initial state without edges.
buchi_automaton prune_useless(const buchi_automaton& a);

struct sat_result {
  bool satisfiable = false;
  std::optional<lasso> witness;
};

/// Satisfiability of the conjunction; the empty list is satisfiable.
sat_result check_sat(const std::vector<formula>& conjuncts, const translate_options& opts = {});

std::string export_automaton(const buchi_automaton& a);
buchi_automaton import_automaton(std::string_view text);

struct external_options {
  std::chrono::milliseconds timeout{60000};
};

/// Runs `command` through /bin/sh with the rendered formula on stdin and
/// parses the neutral automaton format from its stdout.
buchi_automaton external_translate(const formula& f, const std::string& command, const external_options& opts = {});

}  // namespace ltlsanity

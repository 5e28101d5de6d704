#include <doctest.h>

#include <random>

#include "ltlsanity/automaton.hpp"
#include "oracle/lasso_oracle.hpp"

using namespace ltlsanity;

namespace {

formula f(std::string_view s) { return parse_formula(s); }

oracle::lasso_word word(std::vector<std::string> atoms, std::vector<std::uint32_t> letters, std::size_t loop_start) {
  return {std::move(atoms), std::move(letters), loop_start};
}

// The covered automaton of the coverage example, written by hand.
const char* const covered_example =
    "ba v1\n"
    "acceptance: state\n"
    "states: 4\n"
    "initial: 0\n"
    "accepting-states: 3\n"
    "ap: a b c\n"
    "edge 0: 0 1 a\n"
    "edge 1: 1 2 a b\n"
    "edge 2: 1 2 !a b\n"
    "edge 3: 2 3 c a\n"
    "edge 4: 3 3 a\n";

}  // namespace

TEST_CASE("translate false and true") {
  const auto empty = translate(formula::ff());
  CHECK(empty.num_states == 1);
  CHECK(empty.edges.empty());
  CHECK(is_empty(empty).empty);

  const auto all = translate(formula::tt());
  CHECK_FALSE(is_empty(all).empty);
  CHECK(oracle::accepts(all, word({"p"}, {0}, 0)));
}

TEST_CASE("translate G p and G F p membership") {
  const auto gp = translate(f("G p"));
  CHECK(oracle::accepts(gp, word({"p"}, {1}, 0)));
  CHECK_FALSE(oracle::accepts(gp, word({"p"}, {1, 1, 0, 1}, 1)));

  const auto gfp = translate(f("G F p"));
  CHECK(oracle::accepts(gfp, word({"p"}, {1, 0}, 0)));
  CHECK_FALSE(oracle::accepts(gfp, word({"p"}, {1, 1, 0}, 2)));

  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto w = oracle::random_word(rng, {"p"});
    CHECK(oracle::accepts(gp, w) == oracle::eval(f("G p"), w));
    CHECK(oracle::accepts(gfp, w) == oracle::eval(f("G F p"), w));
  }
}

TEST_CASE("is_empty") {
  CHECK(is_empty(translate(f("G p & F !p"))).empty);
  CHECK_FALSE(is_empty(translate(formula::tt())).empty);

  const auto a = translate(f("G F p & G F !p"));
  const auto r = is_empty(a);
  REQUIRE_FALSE(r.empty);
  REQUIRE(r.witness);
  CHECK(oracle::lasso_is_accepting(a, *r.witness));
  const auto w = oracle::word_of(a, *r.witness, {"p"});
  CHECK(oracle::eval(f("G F p & G F !p"), w));
}

TEST_CASE("check_sat") {
  CHECK_FALSE(check_sat({f("G F p"), f("G !p")}).satisfiable);
  CHECK(check_sat({}).satisfiable);
  // Heating requirement 4 is unsatisfiable on its own.
  CHECK_FALSE(check_sat({f("G ((a U b) & (X b -> a & X a & X X !a)) & !a")}).satisfiable);
  CHECK(check_sat({f("G (a -> X a)"), f("G (a -> X !a)")}).satisfiable);
}

TEST_CASE("translation is deterministic") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const formula g = oracle::random_formula(rng, {"a", "b", "c"}, 4);
    CHECK(export_automaton(translate(g)) == export_automaton(translate(parse_formula(render(g)))));
  }
}

TEST_CASE("state cap raises a capacity error") {
  translate_options tight;
  tight.max_states = 3;
  CHECK_THROWS_AS(translate(f("G F a & G F b & G F c"), tight), capacity_error);
  CHECK_THROWS_AS(check_sat({f("G F a"), f("G F b"), f("G F c")}, tight), capacity_error);
}

TEST_CASE("language agrees with lasso semantics on random formulas") {
  std::mt19937_64 rng(1234);
  const std::vector<std::string> names{"a", "b", "c"};
  for (int i = 0; i < 200; ++i) {
    const formula g = oracle::random_formula(rng, names, 4);
    const auto aut = translate(g);
    INFO(render(g));
    bool oracle_sat = false;
    for (int k = 0; k < 20; ++k) {
      const auto w = oracle::random_word(rng, names);
      const bool expect = oracle::eval(g, w);
      oracle_sat = oracle_sat || expect;
      CHECK(oracle::accepts(aut, w) == expect);
    }
    const auto r = is_empty(aut);
    if (oracle_sat) CHECK_FALSE(r.empty);
    if (!r.empty) {
      REQUIRE(r.witness);
      CHECK(oracle::lasso_is_accepting(aut, *r.witness));
      CHECK(oracle::eval(g, oracle::word_of(aut, *r.witness, names)));
    }
  }
}

TEST_CASE("neutral format round trip") {
  const auto a = import_automaton(covered_example);
  CHECK(a.num_states == 4);
  CHECK(a.edges.size() == 5);
  CHECK(export_automaton(a) == covered_example);

  std::mt19937_64 rng(9);
  for (int i = 0; i < 30; ++i) {
    const auto t = translate(oracle::random_formula(rng, {"a", "b"}, 4));
    CHECK(import_automaton(export_automaton(t)) == t);
  }
}

TEST_CASE("import rejects malformed input") {
  CHECK_THROWS_AS(import_automaton("ba v2\n"), automaton_error);
  CHECK_THROWS_AS(import_automaton("ba v1\nacceptance: state\nstates: 2\ninitial: 0\naccepting-states:\nap: a\n"
                                   "edge 0: 0 1 a !a\n"),
                  automaton_error);
  CHECK_THROWS_AS(import_automaton("ba v1\nacceptance: state\nstates: 2\ninitial:\naccepting-states:\nap: a\n"),
                  automaton_error);
  CHECK_THROWS_AS(import_automaton("ba v1\nacceptance: state\nstates: 2\ninitial: 0\naccepting-states:\nap: a\n"
                                   "edge 0: 0 5 a\n"),
                  automaton_error);
  CHECK_THROWS_AS(import_automaton("ba v1\nacceptance: state\nstates: 2\ninitial: 0\naccepting-states:\nap: a\n"
                                   "edge 0: 0 1 zz\n"),
                  automaton_error);
  CHECK_THROWS_AS(import_automaton("ba v1\nacceptance: transition\nstates: 2\ninitial: 0\naccepting-states: 1\nap: a\n"),
                  automaton_error);
  // Comments and blank lines are ignored.
  CHECK_NOTHROW(import_automaton("# hand written\nba v1\n\nacceptance: state # sb\nstates: 1\ninitial: 0\n"
                                 "accepting-states: 0\nap:\nedge 0: 0 0\n"));
}

TEST_CASE("transition-based emptiness") {
  const auto a = import_automaton(
      "ba v1\nacceptance: transition\nstates: 2\ninitial: 0\naccepting-edges: 2\nap: p\n"
      "edge 0: 0 1\nedge 1: 1 1 !p\nedge 2: 1 0 p\n");
  const auto r = is_empty(a);
  REQUIRE_FALSE(r.empty);
  CHECK(oracle::lasso_is_accepting(a, *r.witness));

  const auto none = import_automaton(
      "ba v1\nacceptance: transition\nstates: 2\ninitial: 0\naccepting-edges: 0\nap: p\n"
      "edge 0: 0 1\nedge 1: 1 1 !p\n");
  CHECK(is_empty(none).empty);
}

TEST_CASE("prune_useless keeps exactly the states on accepting runs") {
  // 0 -> 1 (accepting loop), 0 -> 2 (dead end), 3 unreachable but accepting.
  const auto a = import_automaton(
      "ba v1\nacceptance: state\nstates: 4\ninitial: 0\naccepting-states: 1 3\nap: p\n"
      "edge 0: 0 1 p\nedge 1: 1 1\nedge 2: 0 2 !p\nedge 3: 2 2 p\nedge 4: 3 3\n");
  const auto p = prune_useless(a);
  CHECK(export_automaton(p) ==
        "ba v1\nacceptance: state\nstates: 2\ninitial: 0\naccepting-states: 1\nap: p\n"
        "edge 0: 0 1 p\nedge 1: 1 1\n");

  const auto empty = prune_useless(import_automaton(
      "ba v1\nacceptance: state\nstates: 2\ninitial: 0\naccepting-states: 1\nap: p\nedge 0: 0 0 p\n"));
  CHECK(empty.num_states == 1);
  CHECK(empty.edges.empty());
  CHECK(is_empty(empty).empty);

  // Pruning never changes the language.
  std::mt19937_64 rng(77);
  const std::vector<std::string> names{"a", "b"};
  for (int i = 0; i < 40; ++i) {
    const auto t = translate(oracle::random_formula(rng, names, 3));
    CHECK(prune_useless(t) == t);
    for (int k = 0; k < 10; ++k) {
      const auto w = oracle::random_word(rng, names);
      CHECK(oracle::accepts(prune_useless(t), w) == oracle::accepts(t, w));
    }
  }
}

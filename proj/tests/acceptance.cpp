// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <bit>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ltlsanity/coverage.hpp"
#include "ltlsanity/document.hpp"
#include "ltlsanity/sanity.hpp"
#include "ltlsanity/vacuity.hpp"
#include "oracle/lasso_oracle.hpp"

using namespace ltlsanity;

namespace {

// Pinned limits.
constexpr double heating_seconds = 5.0;
constexpr double aeroplane_seconds = 120.0;
constexpr double oracle_seconds = 600.0;
constexpr double redundancy_check_ratio = 0.5;
constexpr std::size_t oracle_formulas = 200;
constexpr std::size_t lassos_per_formula = 20;
constexpr std::size_t exhaustive_word_length = 3;
constexpr std::size_t coverage_path_cap = 10000000;

using clock_type = std::chrono::steady_clock;
using id_sets = std::set<std::set<std::string>>;

std::string data(const std::string& name) { return std::string(LTLSANITY_DATA_DIR) + "/" + name; }

double since(clock_type::time_point t) { return std::chrono::duration<double>(clock_type::now() - t).count(); }

struct verdict {
  bool pass = true;
  std::string detail;
  std::string fingerprint;  // compared across worker counts

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::vector<quantified_formula> formulas_of(const std::vector<requirement>& rs) {
  std::vector<quantified_formula> out;
  for (const auto& r : rs) out.push_back(r.formula);
  return out;
}

std::string set_text(const std::set<std::string>& s) {
  std::string out = "{";
  for (const auto& x : s) out += (out.size() > 1 ? "," : "") + x;
  return out + "}";
}

std::string sets_text(const id_sets& s) {
  std::string out;
  for (const auto& x : s) out += (out.empty() ? "" : " ") + set_text(x);
  return out.empty() ? "none" : out;
}

id_sets mis_ids(const std::vector<requirement>& rs, const sanity_report& r) {
  id_sets out;
  for (const auto& m : r.minimal_inconsistent) {
    std::set<std::string> s;
    for (auto i : m) s.insert(rs[i].id);
    out.insert(s);
  }
  return out;
}

// Redundancies as {target, witness ids...} with the target prefixed by '>'.
id_sets redundancy_ids(const std::vector<requirement>& rs, const sanity_report& r) {
  id_sets out;
  for (const auto& red : r.redundancies) {
    std::set<std::string> s{">" + rs[red.target].id};
    for (auto i : red.witness) s.insert(rs[i].id);
    out.insert(s);
  }
  return out;
}

std::string report_text(const sanity_report& r) {
  std::ostringstream os;
  for (const auto& m : r.minimal_inconsistent) {
    os << "m";
    for (auto i : m) os << " " << i;
    os << ";";
  }
  for (const auto& red : r.redundancies) {
    os << "r" << red.target << ":";
    for (auto i : red.witness) os << " " << i;
    os << ";";
  }
  os << "u" << r.undecided.size();
  return os.str();
}

sanity_options with_jobs(std::size_t jobs) {
  sanity_options o;
  o.jobs = jobs;
  return o;
}

// ---------------------------------------------------------------------------

verdict heating(std::size_t jobs) {
  verdict v;
  const auto start = clock_type::now();
  const auto doc = requirement_document::load(data("heating.req"));
  const auto reqs = doc.section(category::required);
  const auto r = find_min_inconsistent(formulas_of(reqs), with_jobs(jobs));
  const double secs = since(start);
  const id_sets expected{{"phi4"}, {"phi1", "phi2"}, {"phi1", "phi3"}};
  const auto got = mis_ids(reqs, r);
  v.require(got == expected, "got " + sets_text(got));
  v.require(secs < heating_seconds, "took " + std::to_string(secs) + " s");
  v.detail = (v.pass ? sets_text(got) + ", " + std::to_string(secs) + " s" : v.detail);
  v.fingerprint = report_text(r);
  return v;
}

verdict aeroplane(std::size_t jobs) {
  verdict v;
  const auto start = clock_type::now();
  const auto doc = requirement_document::load(data("aeroplane.req"));
  const auto required = doc.section(category::required);
  const auto assumptions = doc.section(category::assumption);

  const auto mis = find_min_inconsistent(formulas_of(required), with_jobs(jobs));
  const auto red_a = find_redundancies(formulas_of(assumptions), with_jobs(jobs));
  std::vector<requirement> reduced;
  for (const auto& r : required) {
    if (r.id != "R5" && r.id != "R6") reduced.push_back(r);
  }
  const auto red_r = find_redundancies(formulas_of(reduced), with_jobs(jobs));
  const double secs = since(start);

  const auto got_mis = mis_ids(required, mis);
  const auto got_a = redundancy_ids(assumptions, red_a);
  const auto got_r = redundancy_ids(reduced, red_r);
  v.require(got_mis == id_sets{{"R4", "R6"}, {"R1", "R2", "R5"}}, "required inconsistent sets " + sets_text(got_mis));
  v.require(got_a == id_sets{{">A5", "A1", "A3"}, {">A6", "A2", "A3"}}, "assumption redundancies " + sets_text(got_a));
  v.require(got_r.empty(), "reduced required redundancies " + sets_text(got_r));
  v.require(secs < aeroplane_seconds, "took " + std::to_string(secs) + " s");
  if (v.pass) v.detail = std::to_string(secs) + " s";
  v.fingerprint = report_text(mis) + "|" + report_text(red_a) + "|" + report_text(red_r);
  return v;
}

verdict triple(std::size_t jobs) {
  verdict v;
  const auto doc = requirement_document::load(data("quantified.req"));
  const auto reqs = doc.requirements();
  const auto r = find_min_inconsistent(formulas_of(reqs), with_jobs(jobs));
  const auto got = mis_ids(reqs, r);
  v.require(got == id_sets{{"p1", "p2", "e1"}}, "got " + sets_text(got));
  v.require(check_sat({reqs[0].formula.body, reqs[1].formula.body}).satisfiable, "universal pair unsatisfiable");
  if (v.pass) v.detail = sets_text(got);
  v.fingerprint = report_text(r);
  return v;
}

verdict vacuity(std::size_t jobs) {
  verdict v;
  const auto rr = witnesses(parse_formula("G (req -> F resp)"));
  std::set<std::string> got;
  for (const auto& w : rr) got.insert(render(w));
  const std::set<std::string> expected{render(simplify(parse_formula("G !req"))),
                                       render(simplify(parse_formula("G F resp")))};
  v.require(got == expected, "request-response witnesses differ");

  const auto doc = requirement_document::load(data("two_signal.req"));
  const auto result = augment(doc.requirements(), with_jobs(jobs));
  std::set<std::string> bodies;
  for (const auto& r : result.requirements) bodies.insert(render(r.formula));
  std::set<std::string> want;
  for (const char* t : {"G (a -> X a)", "G (a -> X !a)", "exists F X a", "exists F X !a"}) want.insert(render(parse(t)));
  v.require(result.requirements.size() == 4 && bodies == want, "augmented set differs");
  v.require(result.dropped.size() == 1 && result.dropped[0].req.formula == parse("exists F a"),
            "exists F a not dropped");
  for (const auto& r : result.requirements) v.fingerprint += r.id + "=" + render(r.formula) + ";";
  if (v.pass) v.detail = std::to_string(result.requirements.size()) + " requirements after augment";
  return v;
}

// Independent coverage reference: plain enumeration without memoisation.
struct coverage_oracle {
  const buchi_automaton& a;

  static rational label(const std::vector<named_literal>& l1, const std::vector<named_literal>& l2) {
    if (l2.empty()) return 1;
    std::size_t common = 0;
    for (const auto& x : l1) {
      for (const auto& y : l2) {
        if (x.atom == y.atom && x.negated != y.negated) return 0;
        if (x == y) ++common;
      }
    }
    return rational(common, l2.size());
  }

  std::vector<edge_path> paths() const {
    std::vector<edge_path> out;
    std::vector<int> visits(a.num_states, 0);
    edge_path cur;
    std::function<void(state_id)> dfs = [&](state_id s) {
      ++visits[s];
      if (!cur.empty() && a.is_accepting_state(s)) out.push_back(cur);
      for (edge_id e = 0; e < a.edges.size(); ++e) {
        if (a.edges[e].src != s || visits[a.edges[e].dst] >= 2) continue;
        cur.push_back(e);
        dfs(a.edges[e].dst);
        cur.pop_back();
      }
      --visits[s];
    };
    for (auto s : a.initial) dfs(s);
    return out;
  }

  static rational path(const buchi_automaton& a1, const edge_path& pi, const buchi_automaton& a2) {
    rational best = 0;
    std::function<void(state_id, std::size_t, rational)> walk = [&](state_id s, std::size_t k, rational sum) {
      if (k == pi.size()) {
        best = std::max(best, rational(sum / pi.size()));
        return;
      }
      for (edge_id e = 0; e < a2.edges.size(); ++e) {
        if (a2.edges[e].src != s) continue;
        const rational c = label(named_label(a1, pi[k]), named_label(a2, e));
        if (c == 0) continue;
        walk(a2.edges[e].dst, k + 1, sum + c);
      }
    };
    for (auto s : a2.initial) walk(s, 0, 0);
    return best;
  }
};

buchi_automaton load_automaton(const std::string& name) {
  std::ifstream in(data(name), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return import_automaton(ss.str());
}

verdict coverage_example(std::size_t) {
  verdict v;
  const auto b = load_automaton("covered.ba");
  const auto c = load_automaton("covering.ba");
  const edge_path pi{0, 2, 3, 4};
  const rational tool_path = path_coverage(b, pi, c);
  const rational oracle_path = coverage_oracle::path(b, pi, c);
  v.require(tool_path == rational(3, 4), "path coverage " + tool_path.str());
  v.require(oracle_path == tool_path, "oracle path coverage " + oracle_path.str());

  const auto res = automaton_coverage(b, c);
  rational oracle_total = 0;
  const auto ps = coverage_oracle{b}.paths();
  for (const auto& p : ps) oracle_total += coverage_oracle::path(b, p, c);
  oracle_total /= ps.size();
  v.require(res.value == rational(17, 24), "automaton coverage " + res.value.str());
  v.require(oracle_total == res.value, "oracle automaton coverage " + oracle_total.str());
  if (v.pass) v.detail = "path " + tool_path.str() + ", automaton " + res.value.str();
  v.fingerprint = tool_path.str() + "/" + res.value.str();
  return v;
}

verdict completeness(std::size_t jobs) {
  verdict v;
  const auto doc = requirement_document::load(data("aeroplane_reduced.req"));
  auto bodies = [&](category c) {
    std::vector<formula> out;
    for (const auto& r : doc.section(c)) out.push_back(r.formula.body);
    return out;
  };
  std::vector<formula> pool;
  std::ifstream in(data("aeroplane_candidates.txt"));
  for (std::string line; std::getline(in, line);) {
    line = line.substr(0, line.find('#'));
    if (line.find_first_not_of(" \t") != std::string::npos) pool.push_back(parse_formula(line));
  }
  completeness_options opts;
  opts.rounds = 3;
  opts.jobs = jobs;
  opts.max_paths = coverage_path_cap;
  const auto rep =
      completeness_loop(bodies(category::assumption), bodies(category::required), bodies(category::forbidden), pool, opts);

  const std::vector<formula> order{parse_formula("G !l"), parse_formula("F (!b & !l)"),
                                   parse_formula("F (!l U (a | b))")};
  std::string trace = "baseline " + to_percent(rep.baseline) + "%";
  for (const auto& r : rep.rounds) trace += ", " + render(r.selected) + " " + to_percent(r.coverage) + "%";
  v.require(rep.baseline == 0, "baseline not 0");
  bool same_order = rep.rounds.size() == order.size();
  for (std::size_t i = 0; same_order && i < order.size(); ++i) same_order = rep.rounds[i].selected == order[i];
  v.require(same_order, "selection order differs");
  rational prev = rep.baseline;
  bool increasing = true;
  for (const auto& r : rep.rounds) {
    increasing = increasing && r.coverage > prev;
    prev = r.coverage;
  }
  v.require(increasing, "coverage not strictly increasing");
  v.detail += (v.detail.empty() ? "" : "; ") + trace;
  v.fingerprint = rep.baseline.str();
  for (const auto& r : rep.rounds) v.fingerprint += ";" + render(r.selected) + "=" + r.coverage.str();
  return v;
}

// Every lasso word with stem + loop length up to `n`.
std::vector<oracle::lasso_word> all_words(const std::vector<std::string>& atoms, std::size_t n) {
  std::vector<oracle::lasso_word> out;
  const std::uint32_t letters = 1U << atoms.size();
  for (std::size_t len = 1; len <= n; ++len) {
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < len; ++i) combos *= letters;
    for (std::uint64_t code = 0; code < combos; ++code) {
      oracle::lasso_word w;
      w.atoms = atoms;
      std::uint64_t c = code;
      for (std::size_t i = 0; i < len; ++i, c /= letters) w.letters.push_back(static_cast<std::uint32_t>(c % letters));
      for (std::size_t loop = 0; loop < len; ++loop) {
        w.loop_start = loop;
        out.push_back(w);
      }
    }
  }
  return out;
}

verdict oracle_equivalence(std::size_t) {
  verdict v;
  const auto start = clock_type::now();
  const std::vector<std::string> names{"a", "b", "c"};
  const auto words = all_words(names, exhaustive_word_length);
  std::mt19937_64 rng(20240601);
  std::size_t contradictions = 0;
  std::size_t membership = 0;
  std::size_t bad_witness = 0;
  std::size_t sat = 0;
  for (std::size_t i = 0; i < oracle_formulas; ++i) {
    const formula g = oracle::random_formula(rng, names, 3);
    const auto aut = translate(g);
    const auto r = check_sat({g});
    sat += r.satisfiable;
    const bool oracle_sat = std::any_of(words.begin(), words.end(), [&](const auto& w) { return oracle::eval(g, w); });
    if (oracle_sat && !r.satisfiable) ++contradictions;
    if (r.satisfiable && r.witness && !oracle::eval(g, oracle::word_of(aut, *r.witness, names))) ++bad_witness;
    for (std::size_t k = 0; k < lassos_per_formula; ++k) {
      const auto w = oracle::random_word(rng, names);
      if (oracle::accepts(aut, w) != oracle::eval(g, w)) ++membership;
    }
  }
  const double secs = since(start);
  v.require(contradictions == 0, std::to_string(contradictions) + " sat contradictions");
  v.require(bad_witness == 0, std::to_string(bad_witness) + " witnesses rejected by the oracle");
  v.require(membership == 0, std::to_string(membership) + " membership disagreements");
  v.require(secs < oracle_seconds, "took " + std::to_string(secs) + " s");
  if (v.pass) {
    v.detail = std::to_string(oracle_formulas) + " formulas (" + std::to_string(sat) + " satisfiable), " +
               std::to_string(secs) + " s";
  }
  return v;
}

// Brute-force references for the lattice search.
bool candidate(const std::vector<quantified_formula>& g, index_set s) {
  int ex = 0;
  for (auto i : members(s)) ex += g[i].is_existential();
  return ex <= 1;
}

bool sat_of(const std::vector<quantified_formula>& g, index_set s, const formula* negated = nullptr) {
  std::vector<formula> fs;
  for (auto i : members(s)) fs.push_back(g[i].body);
  if (negated) fs.push_back(formula::negation(*negated));
  return check_sat(fs).satisfiable;
}

std::set<index_set> minimal(const std::vector<index_set>& xs) {
  std::set<index_set> out;
  for (index_set s : xs) {
    if (std::none_of(xs.begin(), xs.end(), [&](index_set o) { return o != s && (o & ~s) == 0; })) out.insert(s);
  }
  return out;
}

std::set<index_set> brute_mis(const std::vector<quantified_formula>& g) {
  const index_set all = (index_set{1} << g.size()) - 1;
  std::vector<index_set> bad;
  for (index_set s = 1; s <= all; ++s) {
    if (candidate(g, s) && !sat_of(g, s)) bad.push_back(s);
  }
  return minimal(bad);
}

std::set<std::pair<std::size_t, index_set>> brute_redundancy(const std::vector<quantified_formula>& g) {
  const index_set all = (index_set{1} << g.size()) - 1;
  std::set<std::pair<std::size_t, index_set>> out;
  for (std::size_t t = 0; t < g.size(); ++t) {
    std::vector<index_set> implying;
    for (index_set s = 0; s <= all; ++s) {
      if ((s >> t) & 1U || !candidate(g, s)) continue;
      const auto m = members(s);
      if (g[t].is_universal() &&
          std::any_of(m.begin(), m.end(), [&](std::size_t i) { return g[i].is_existential(); })) {
        continue;
      }
      if (!sat_of(g, s, &g[t].body)) implying.push_back(s);
    }
    for (index_set s : minimal(implying)) {
      if (s == 0 || sat_of(g, s)) out.insert({t, s});
    }
  }
  return out;
}

std::vector<quantified_formula> random_gamma(std::mt19937_64& rng, std::size_t n, bool existentials) {
  std::vector<quantified_formula> g;
  const std::vector<std::string> names{"a", "b"};
  for (std::size_t i = 0; i < n; ++i) {
    const bool ex = existentials && rng() % 4 == 0;
    g.push_back({ex ? quantifier::existential : quantifier::universal, oracle::random_formula(rng, names, 3)});
  }
  return g;
}

// Counts log entries decided by an earlier entry for the same target.
std::size_t pruning_violations(const sanity_report& r) {
  std::size_t n = 0;
  for (const auto& c : r.log) {
    for (std::size_t j = 0; j < c.known_before; ++j) {
      const auto& p = r.log[j];
      if (p.target != c.target) continue;
      if (p.consistent ? (c.indices & ~p.indices) == 0 : (p.indices & ~c.indices) == 0) ++n;
    }
  }
  return n;
}

verdict pruning(std::size_t jobs) {
  verdict v;
  sanity_options opts = with_jobs(jobs);
  opts.record_checks = true;
  std::mt19937_64 rng(31337);
  std::size_t mismatches = 0;
  std::size_t violations = 0;
  std::size_t with_findings = 0;
  for (int round = 0; round < 25; ++round) {
    const auto g = random_gamma(rng, 6, round % 2 == 1);
    const auto mis = find_min_inconsistent(g, opts);
    const auto red = find_redundancies(g, opts);
    std::set<index_set> got_mis;
    for (const auto& m : mis.minimal_inconsistent) got_mis.insert(make_set(m));
    std::set<std::pair<std::size_t, index_set>> got_red;
    for (const auto& r : red.redundancies) got_red.insert({r.target, make_set(r.witness)});
    if (got_mis != brute_mis(g) || got_red != brute_redundancy(g)) ++mismatches;
    with_findings += !got_mis.empty();
    violations += pruning_violations(mis) + pruning_violations(red);
    v.fingerprint += report_text(mis) + "|" + report_text(red) + "#";
  }

  double ratio_sum = 0;
  for (int round = 0; round < 25; ++round) {
    const auto g = random_gamma(rng, 8, false);
    const auto red = find_redundancies(g, opts);
    const double bound = 8.0 * 128.0;
    ratio_sum += static_cast<double>(red.checks_performed) / bound;
    v.fingerprint += report_text(red) + "#";
  }
  const double mean = ratio_sum / 25;
  v.require(mismatches == 0, std::to_string(mismatches) + " sets differ from brute force");
  v.require(violations == 0, std::to_string(violations) + " checks on already decided sets");
  v.require(with_findings >= 5, "too few inconsistent samples");
  v.require(mean < redundancy_check_ratio, "mean redundancy check ratio " + std::to_string(mean));
  if (v.pass) v.detail = "mean redundancy check ratio " + std::to_string(mean);
  return v;
}

}  // namespace

int main() {
  struct criterion {
    int number;
    const char* name;
    verdict (*run)(std::size_t);
  };
  const std::vector<criterion> criteria{
      {1, "heating controller inconsistent subsets", heating},
      {2, "aeroplane consistency and redundancy", aeroplane},
      {3, "path-quantified triple", triple},
      {4, "vacuity witnesses and augmentation", vacuity},
      {5, "exact coverage on the hand-built automata", coverage_example},
      {6, "aeroplane completeness loop", completeness},
      {7, "satisfiability against the lasso oracle", oracle_equivalence},
      {8, "lattice pruning and exhaustiveness", pruning},
  };

  int failed = 0;
  std::vector<std::string> fingerprints;
  for (const auto& c : criteria) {
    verdict v;
    try {
      v = c.run(1);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    fingerprints.push_back(v.fingerprint);
    failed += !v.pass;
    std::cout << "criterion " << c.number << ": " << (v.pass ? "PASS" : "FAIL") << "  " << c.name << "  ("
              << v.detail << ")" << std::endl;
  }

  verdict det;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (fingerprints[i].empty()) continue;
    try {
      if (criteria[i].run(8).fingerprint != fingerprints[i]) {
        det.require(false, "criterion " + std::to_string(criteria[i].number) + " differs");
      }
    } catch (const std::exception& e) {
      det.require(false, std::string("exception: ") + e.what());
    }
  }
  if (det.pass) det.detail = "jobs 1 and 8 agree";
  failed += !det.pass;
  std::cout << "criterion 9: " << (det.pass ? "PASS" : "FAIL") << "  determinism across worker counts  ("
            << det.detail << ")" << std::endl;

  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}

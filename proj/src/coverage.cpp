#include "ltlsanity/coverage.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <thread>
#include <unordered_map>

namespace ltlsanity {

std::vector<named_literal> named_label(const buchi_automaton& a, edge_id e) {
  std::vector<named_literal> out;
  for (const auto& l : a.edges.at(e).label) out.push_back({a.ap.at(l.atom), l.negated});
  std::sort(out.begin(), out.end());
  return out;
}

rational edge_coverage(const std::vector<named_literal>& a1, const std::vector<named_literal>& a2) {
  if (a2.empty()) return rational(1);
  std::size_t common = 0;
  for (const auto& l2 : a2) {
    for (const auto& l1 : a1) {
      if (l1.atom != l2.atom) continue;
      if (l1.negated != l2.negated) return rational(0);
      ++common;
    }
  }
  return rational(static_cast<long>(common), static_cast<long>(a2.size()));
}

namespace {

bool accepting_step(const buchi_automaton& a, edge_id e) {
  return a.mode == acceptance_mode::state_based ? a.is_accepting_state(a.edges[e].dst) : a.is_accepting_edge(e);
}

// Depth-first walk over almost-simple paths. `visit` is called on every
// extension and reports whether the path qualifies.
template <class Enter, class Leave>
void walk_paths(const buchi_automaton& a, std::size_t max_paths, Enter enter, Leave leave) {
  const auto succ = a.successors();
  std::vector<std::uint8_t> count(a.num_states, 0);
  std::size_t found = 0;
  std::size_t depth = 0;
  auto dfs = [&](auto& self, state_id v) -> void {
    for (edge_id e : succ[v]) {
      const state_id w = a.edges[e].dst;
      if (count[w] == 2) continue;
      ++count[w];
      ++depth;
      const bool accepting = accepting_step(a, e);
      if (accepting && ++found > max_paths) {
        throw capacity_error("more than " + std::to_string(max_paths) + " almost-simple paths");
      }
      enter(e, depth, accepting);
      self(self, w);
      leave(e, depth);
      --depth;
      --count[w];
    }
  };
  for (state_id q : a.initial) {
    ++count[q];
    dfs(dfs, q);
    --count[q];
  }
}

// Edge scores scaled by the lcm of the nonzero label sizes of a2, so the
// dynamic programme runs on integers. A score of 0 prunes the walk.
class scorer {
 public:
  scorer(const buchi_automaton& a1, const buchi_automaton& a2) : a1_(a1), a2_(a2), succ2_(a2.successors()) {
    std::vector<std::int64_t> index(a1.ap.size(), -1);
    for (std::size_t i = 0; i < a1.ap.size(); ++i) {
      auto it = std::find(a2.ap.begin(), a2.ap.end(), a1.ap[i]);
      if (it != a2.ap.end()) index[i] = it - a2.ap.begin();
    }
    map_ = std::move(index);
    for (const auto& e : a2.edges) {
      if (!e.label.empty()) scale_ = std::lcm(scale_, static_cast<std::int64_t>(e.label.size()));
    }
    rows_.resize(a1.edges.size());
  }

  std::int64_t scale() const { return scale_; }

  const std::vector<std::int64_t>& row(edge_id e1) {
    auto& r = rows_[e1];
    if (!r.empty() || a2_.edges.empty()) return r;
    r.resize(a2_.edges.size());
    // Literal of a1 over a2's atoms: value is 1 (positive) or 2 (negated).
    std::vector<std::uint8_t> mine(a2_.ap.size(), 0);
    for (const auto& l : a1_.edges[e1].label) {
      if (map_[l.atom] >= 0) mine[map_[l.atom]] = l.negated ? 2 : 1;
    }
    for (std::size_t k = 0; k < a2_.edges.size(); ++k) {
      const auto& label = a2_.edges[k].label;
      if (label.empty()) {
        r[k] = scale_;
        continue;
      }
      std::int64_t common = 0;
      bool clash = false;
      for (const auto& l : label) {
        const std::uint8_t m = mine[l.atom];
        if (m == 0) continue;
        if ((m == 2) != l.negated) {
          clash = true;
          break;
        }
        ++common;
      }
      r[k] = clash ? 0 : scale_ * common / static_cast<std::int64_t>(label.size());
    }
    return r;
  }

  std::vector<std::int64_t> start() const {
    std::vector<std::int64_t> cur(a2_.num_states, -1);
    for (state_id q : a2_.initial) cur[q] = 0;
    return cur;
  }

  std::vector<std::int64_t> step(const std::vector<std::int64_t>& cur, edge_id e1) {
    const auto& r = row(e1);
    std::vector<std::int64_t> next(a2_.num_states, -1);
    for (state_id q = 0; q < a2_.num_states; ++q) {
      if (cur[q] < 0) continue;
      for (edge_id k : succ2_[q]) {
        if (r[k] == 0) continue;
        auto& slot = next[a2_.edges[k].dst];
        slot = std::max(slot, cur[q] + r[k]);
      }
    }
    return next;
  }

  rational value(const std::vector<std::int64_t>& cur, std::size_t length) const {
    const std::int64_t best = *std::max_element(cur.begin(), cur.end());
    if (best <= 0 || length == 0) return rational(0);
    return rational(best, scale_ * static_cast<std::int64_t>(length));
  }

 private:
  const buchi_automaton& a1_;
  const buchi_automaton& a2_;
  std::vector<std::vector<edge_id>> succ2_;
  std::vector<std::int64_t> map_;
  std::int64_t scale_ = 1;
  std::vector<std::vector<std::int64_t>> rows_;
};

}  // namespace

std::vector<edge_path> enumerate_paths(const buchi_automaton& a, std::size_t max_paths) {
  std::vector<edge_path> out;
  edge_path cur;
  walk_paths(
      a, max_paths,
      [&](edge_id e, std::size_t, bool accepting) {
        cur.push_back(e);
        if (accepting) out.push_back(cur);
      },
      [&](edge_id, std::size_t) { cur.pop_back(); });
  return out;
}

rational path_coverage(const buchi_automaton& a1, const edge_path& pi, const buchi_automaton& a2) {
  if (pi.empty() || a2.num_states == 0) return rational(0);
  scorer s(a1, a2);
  auto cur = s.start();
  for (edge_id e : pi) cur = s.step(cur, e);
  return s.value(cur, pi.size());
}

namespace {

// Sum of path values below a search node. Values are kept in units of
// 1/scale: a path of length n with best walk score b contributes b/n.
struct subtotal {
  rational value;
  rational inverse_lengths;  // sum of 1/n, used to undo normalisation
  std::size_t paths = 0;
};

// Almost-simple path search with memoisation. Two prefixes that reach the
// same vertex with the same visit counts, length and (shifted) walk scores
// have identical extensions, so their subtotals are shared.
class coverage_search {
 public:
  coverage_search(const buchi_automaton& a1, const buchi_automaton& a2, std::size_t max_paths)
      : a1_(a1), succ1_(a1.successors()), scorer_(a1, a2), max_paths_(max_paths) {}

  coverage_result run() {
    coverage_result out;
    subtotal total;
    for (state_id q : a1_.initial) {
      std::vector<std::uint8_t> count(a1_.num_states, 0);
      count[q] = 1;
      auto start = scorer_.start();
      const std::int64_t shift = normalise(start);
      add(total, explore(q, count, 0, intern(std::move(start))), shift);
    }
    out.paths = total.paths;
    if (out.paths == 0) {
      out.value = rational(1);
      out.diagnostics.push_back("the covered automaton has no accepting almost-simple path; coverage set to 1");
    } else {
      out.value = total.value / (rational(scorer_.scale()) * static_cast<long>(out.paths));
    }
    return out;
  }

 private:
  struct transition {
    std::uint32_t next = 0;
    std::int64_t shift = 0;
    std::int64_t best = -1;  // before normalisation
  };

  // Subtracts the smallest reachable score; returns the amount removed.
  static std::int64_t normalise(std::vector<std::int64_t>& d) {
    std::int64_t low = -1;
    for (auto x : d) {
      if (x >= 0 && (low < 0 || x < low)) low = x;
    }
    if (low <= 0) return 0;
    for (auto& x : d) {
      if (x >= 0) x -= low;
    }
    return low;
  }

  static void add(subtotal& into, const subtotal& part, std::int64_t shift) {
    into.value += part.value;
    if (shift != 0) into.value += part.inverse_lengths * shift;
    into.inverse_lengths += part.inverse_lengths;
    into.paths += part.paths;
  }

  std::uint32_t intern(std::vector<std::int64_t> d) {
    std::string bytes(reinterpret_cast<const char*>(d.data()), d.size() * sizeof(std::int64_t));
    auto [it, fresh] = ids_.emplace(std::move(bytes), static_cast<std::uint32_t>(vectors_.size()));
    if (fresh) vectors_.push_back(std::move(d));
    return it->second;
  }

  transition advance(std::uint32_t d, edge_id e) {
    const std::uint64_t key = (static_cast<std::uint64_t>(d) << 32) | e;
    if (auto it = steps_.find(key); it != steps_.end()) return it->second;
    auto next = scorer_.step(vectors_[d], e);
    transition t;
    t.best = *std::max_element(next.begin(), next.end());
    t.shift = normalise(next);
    t.next = intern(std::move(next));
    steps_.emplace(key, t);
    return t;
  }

  const subtotal& explore(state_id v, std::vector<std::uint8_t>& count, std::size_t depth, std::uint32_t d) {
    std::string key;
    key.reserve(sizeof v + sizeof depth + sizeof d + count.size());
    key.append(reinterpret_cast<const char*>(&v), sizeof v);
    key.append(reinterpret_cast<const char*>(&depth), sizeof depth);
    key.append(reinterpret_cast<const char*>(&d), sizeof d);
    key.append(reinterpret_cast<const char*>(count.data()), count.size());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    subtotal here;
    for (edge_id e : succ1_[v]) {
      const state_id w = a1_.edges[e].dst;
      if (count[w] == 2) continue;
      const transition t = advance(d, e);
      const std::size_t len = depth + 1;
      if (accepting_step(a1_, e)) {
        // Paths without any compatible walk score 0 and take no shift.
        if (t.best > 0) here.value += rational(t.best, static_cast<std::int64_t>(len));
        if (t.best >= 0) here.inverse_lengths += rational(1, static_cast<std::int64_t>(len));
        ++here.paths;
      }
      ++count[w];
      add(here, explore(w, count, len, t.next), t.shift);
      --count[w];
      if (here.paths > max_paths_) {
        throw capacity_error("more than " + std::to_string(max_paths_) + " almost-simple paths");
      }
    }
    return memo_.emplace(std::move(key), std::move(here)).first->second;
  }

  const buchi_automaton& a1_;
  std::vector<std::vector<edge_id>> succ1_;
  scorer scorer_;
  std::size_t max_paths_;
  std::vector<std::vector<std::int64_t>> vectors_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::unordered_map<std::uint64_t, transition> steps_;
  std::unordered_map<std::string, subtotal> memo_;
};

}  // namespace

coverage_result automaton_coverage(const buchi_automaton& a1, const buchi_automaton& a2, std::size_t max_paths) {
  return coverage_search(a1, a2, max_paths).run();
}

namespace {

class candidate_source {
 public:
  candidate_source(const std::vector<std::string>& aps, std::uint64_t seed) : rng_(seed) {
    for (const auto& p : aps) {
      literals_.push_back(formula::atom(p));
      literals_.push_back(formula::negation(formula::atom(p)));
    }
  }

  // Fixed templates, shallowest first.
  std::vector<formula> templates(int depth) const {
    std::vector<formula> out;
    const auto& L = literals_;
    auto distinct = [&](std::size_t i, std::size_t j) { return i / 2 != j / 2; };
    if (depth >= 2) {
      for (const auto& l : L) out.push_back(formula::globally(l));
      for (const auto& l : L) out.push_back(formula::eventually(l));
    }
    if (depth >= 3) {
      for (std::size_t i = 0; i < L.size(); ++i) {
        for (std::size_t j = i + 1; j < L.size(); ++j) {
          if (!distinct(i, j)) continue;
          out.push_back(formula::eventually(formula::conjunction(L[i], L[j])));
          out.push_back(formula::globally(formula::disjunction(L[i], L[j])));
        }
      }
      for (std::size_t i = 0; i < L.size(); ++i) {
        for (std::size_t j = 0; j < L.size(); ++j) {
          if (!distinct(i, j)) continue;
          out.push_back(formula::eventually(formula::until(L[i], L[j])));
          for (std::size_t k = j + 1; k < L.size(); ++k) {
            if (!distinct(i, k) || !distinct(j, k)) continue;
            out.push_back(formula::eventually(formula::until(L[i], formula::disjunction(L[j], L[k]))));
          }
        }
      }
    }
    return out;
  }

  formula random(int depth) {
    if (depth <= 0 || roll(3) == 0) return literals_[roll(literals_.size())];
    switch (roll(6)) {
      case 0:
        return formula::next(random(depth - 1));
      case 1:
        return formula::eventually(random(depth - 1));
      case 2:
        return formula::globally(random(depth - 1));
      case 3:
        return formula::conjunction(random(depth - 1), random(depth - 1));
      case 4:
        return formula::disjunction(random(depth - 1), random(depth - 1));
      default:
        return formula::until(random(depth - 1), random(depth - 1));
    }
  }

 private:
  // Raw modulo keeps the sequence identical across standard libraries.
  std::size_t roll(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  std::mt19937_64 rng_;
  std::vector<formula> literals_;
};

}  // namespace

std::vector<formula> generate_candidates(const std::vector<std::string>& aps, const candidate_options& opts) {
  std::vector<formula> out;
  if (aps.empty() || opts.count == 0) return out;
  candidate_source src(aps, opts.seed);
  auto accept = [&](const formula& raw) {
    const formula c = simplify(raw);
    if (c.depth() - 1 > opts.depth) return;
    if (std::find(out.begin(), out.end(), c) != out.end()) return;
    if (!check_sat({c}, opts.translation).satisfiable) return;
    if (!check_sat({formula::negation(c)}, opts.translation).satisfiable) return;
    out.push_back(c);
  };
  for (const auto& t : src.templates(opts.depth)) {
    if (out.size() >= opts.count) return out;
    accept(t);
  }
  // Random fill, with a bound on attempts in case the filter is strict.
  for (std::size_t attempt = 0; out.size() < opts.count && attempt < 50 * opts.count; ++attempt) {
    accept(src.random(opts.depth));
  }
  return out;
}

formula describe_behaviour(const std::vector<formula>& required, const std::vector<formula>& forbidden) {
  if (required.empty()) return disjoin(forbidden);
  if (forbidden.empty()) return conjoin(required);
  return formula::disjunction(conjoin(required), disjoin(forbidden));
}

coverage_report completeness_loop(const std::vector<formula>& assumptions, const std::vector<formula>& required,
                                  const std::vector<formula>& forbidden, std::vector<formula> candidates,
                                  const completeness_options& opts) {
  if (assumptions.empty()) throw std::invalid_argument("no environment assumptions");
  auto to_automaton = [&](const formula& f) {
    return opts.translator ? opts.translator(f) : translate(f, opts.translation);
  };

  coverage_report report;
  const buchi_automaton base = to_automaton(conjoin(assumptions));
  formula desc = describe_behaviour(required, forbidden);
  {
    auto first = automaton_coverage(base, to_automaton(desc), opts.max_paths);
    report.baseline = first.value;
    report.baseline_paths = first.paths;
    report.diagnostics = std::move(first.diagnostics);
  }

  std::vector<formula> pool;
  for (auto& c : candidates) {
    if (std::find(pool.begin(), pool.end(), c) == pool.end()) pool.push_back(std::move(c));
  }

  for (std::size_t round = 0; round < opts.rounds && !pool.empty(); ++round) {
    std::vector<std::optional<rational>> score(pool.size());
    std::vector<std::string> errors(pool.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < pool.size(); i = next++) {
        try {
          score[i] = automaton_coverage(base, to_automaton(formula::disjunction(desc, pool[i])), opts.max_paths).value;
        } catch (const capacity_error& e) {
          errors[i] = e.what();
        }
      }
    };
    const std::size_t workers = std::min(std::max<std::size_t>(1, opts.jobs), pool.size());
    if (workers == 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(worker);
      for (auto& t : threads) t.join();
    }

    std::optional<std::size_t> best;
    std::string best_text;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!score[i]) {
        report.diagnostics.push_back("candidate " + render(pool[i]) + " skipped: " + errors[i]);
        continue;
      }
      const std::string text = render(pool[i]);
      if (!best || *score[i] > *score[*best] || (*score[i] == *score[*best] && text < best_text)) {
        best = i;
        best_text = text;
      }
    }
    if (!best) break;
    coverage_round r{pool[*best], *score[*best]};
    desc = formula::disjunction(desc, pool[*best]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(*best));
    report.rounds.push_back(r);
    if (opts.on_round && !opts.on_round(r)) break;
  }
  return report;
}

std::string to_percent(const rational& r, int decimals) {
  using boost::multiprecision::cpp_int;
  cpp_int scale = 100;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const cpp_int num = boost::multiprecision::numerator(r) * scale;
  const cpp_int den = boost::multiprecision::denominator(r);
  const cpp_int rounded = (2 * num + den) / (2 * den);
  std::string digits = rounded.str();
  if (decimals == 0) return digits;
  while (digits.size() <= static_cast<std::size_t>(decimals)) digits.insert(digits.begin(), '0');
  digits.insert(digits.end() - decimals, '.');
  return digits;
}

}  // namespace ltlsanity

#include "ltlsanity/sanity.hpp"

#include <algorithm>
#include <bit>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace ltlsanity {

std::vector<std::size_t> members(index_set s) {
  std::vector<std::size_t> out;
  while (s != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(s)));
    s &= s - 1;
  }
  return out;
}

index_set make_set(const std::vector<std::size_t>& indices) {
  index_set s = 0;
  for (auto i : indices) s |= index_set{1} << i;
  return s;
}

namespace {

constexpr bool subset(index_set a, index_set b) { return (a & ~b) == 0; }

index_set bit(std::size_t i) { return index_set{1} << i; }

index_set existential_mask(const std::vector<quantified_formula>& gamma) {
  index_set m = 0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (gamma[i].is_existential()) m |= bit(i);
  }
  return m;
}

index_set full_mask(std::size_t n) { return n == 64 ? ~index_set{0} : bit(n) - 1; }

void check_size(const std::vector<quantified_formula>& gamma) {
  if (gamma.empty()) throw std::invalid_argument("requirement set is empty");
  if (gamma.size() > max_requirements) {
    throw std::invalid_argument("at most " + std::to_string(max_requirements) + " requirements are supported");
  }
}

// One lattice: the consistency search, or the search for implying sets of a
// single redundancy target. "Consistent" always means the predicate's
// conjunction is satisfiable.
struct family {
  std::optional<std::size_t> target;
  index_set universe = 0;
  bool allow_empty = false;
  std::vector<index_set> con;    // maximal known-consistent sets
  std::vector<index_set> incon;  // minimal known-inconsistent sets
  std::vector<index_set> incon_all;
  std::unordered_set<index_set> seen_up;
  std::unordered_set<index_set> seen_down;
  enum class status : std::uint8_t { pending, consistent, inconsistent, undecided };
  std::unordered_map<index_set, status> verdicts;
  std::unordered_map<index_set, std::vector<direction>> waiters;

  bool implied_consistent(index_set s) const {
    return std::any_of(con.begin(), con.end(), [&](index_set x) { return subset(s, x); });
  }
  bool implied_inconsistent(index_set s) const {
    return std::any_of(incon.begin(), incon.end(), [&](index_set y) { return subset(y, s); });
  }
  void learn(index_set s, bool consistent) {
    if (consistent) {
      if (implied_consistent(s)) return;
      std::erase_if(con, [&](index_set x) { return subset(x, s); });
      con.push_back(s);
    } else {
      incon_all.push_back(s);
      if (implied_inconsistent(s)) return;
      std::erase_if(incon, [&](index_set y) { return subset(s, y); });
      incon.push_back(s);
    }
  }
};

class lattice_search {
 public:
  lattice_search(const std::vector<quantified_formula>& gamma, const sanity_options& opts)
      : gamma_(gamma), opts_(opts), exist_(existential_mask(gamma)) {}

  void add_family(std::optional<std::size_t> target, index_set universe, bool allow_empty,
                  const std::vector<index_set>& bottoms, const std::vector<index_set>& tops) {
    family f;
    f.target = target;
    f.universe = universe;
    f.allow_empty = allow_empty;
    families_.push_back(std::move(f));
    const std::size_t fi = families_.size() - 1;
    for (index_set s : bottoms) generate(fi, s, direction::up);
    for (index_set s : tops) generate(fi, s, direction::down);
  }

  void run() {
    const std::size_t workers = std::max<std::size_t>(1, opts_.jobs);
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> threads;
      for (std::size_t i = 0; i < workers; ++i) threads.emplace_back([this] { work(); });
      for (auto& t : threads) t.join();
    }
    if (failure_) std::rethrow_exception(failure_);
  }

  const std::vector<family>& families() const { return families_; }
  std::size_t checks() const { return checks_; }
  std::vector<check_record>& log() { return log_; }
  std::vector<undecided_set>& undecided() { return undecided_; }

  // Direct satisfiability call outside the lattice, counted in the totals.
  bool check_direct(const std::vector<formula>& fs) {
    ++checks_;
    return sat(fs);
  }

  bool candidate(index_set s) const { return std::popcount(s & exist_) <= 1; }

 private:
  struct item {
    std::size_t family;
    task t;
  };

  bool sat(const std::vector<formula>& fs) const {
    if (opts_.oracle) return opts_.oracle(fs);
    return check_sat(fs, opts_.translation).satisfiable;
  }

  std::vector<formula> conjuncts(const family& f, index_set s) const {
    std::vector<formula> out;
    for (auto i : members(s)) out.push_back(gamma_[i].body);
    if (f.target) out.push_back(to_nnf(formula::negation(gamma_[*f.target].body)));
    return out;
  }

  // Caller holds the lock (or is single-threaded setup).
  void generate(std::size_t fi, index_set s, direction dir) {
    family& f = families_[fi];
    if (s == 0 && !f.allow_empty) return;
    if (!subset(s, f.universe) || !candidate(s)) return;
    auto& seen = dir == direction::up ? f.seen_up : f.seen_down;
    if (!seen.insert(s).second) return;
    task t{s, f.target, false, false, dir};
    auto it = f.verdicts.find(s);
    if (it != f.verdicts.end()) {
      switch (it->second) {
        case family::status::pending:
          f.waiters[s].push_back(dir);
          return;
        case family::status::undecided:
          return;
        default:
          t.checked = true;
          t.consistent = it->second == family::status::consistent;
          pool_.push_back({fi, t});
          return;
      }
    }
    f.verdicts.emplace(s, family::status::pending);
    pool_.push_back({fi, t});
  }

  void successors(const item& it) {
    const family& f = families_[it.family];
    const task& t = it.t;
    if (t.consistent && t.dir == direction::up) {
      for (auto i : members(f.universe & ~t.indices)) generate(it.family, t.indices | bit(i), direction::up);
    } else if (!t.consistent && t.dir == direction::down) {
      for (auto i : members(t.indices)) generate(it.family, t.indices & ~bit(i), direction::down);
    }
  }

  void resolve(std::size_t fi, task t, family::status st) {
    family& f = families_[fi];
    f.verdicts[t.indices] = st;
    std::vector<direction> extra;
    if (auto w = f.waiters.find(t.indices); w != f.waiters.end()) {
      extra = std::move(w->second);
      f.waiters.erase(w);
    }
    if (st == family::status::undecided) return;
    const bool consistent = st == family::status::consistent;
    f.learn(t.indices, consistent);
    t.checked = true;
    t.consistent = consistent;
    pool_.push_back({fi, t});
    for (direction d : extra) {
      task w = t;
      w.dir = d;
      pool_.push_back({fi, w});
    }
  }

  void work() {
    std::unique_lock lock(mutex_);
    for (;;) {
      cv_.wait(lock, [&] { return !pool_.empty() || busy_ == 0 || failure_; });
      if (failure_ || pool_.empty()) {
        cv_.notify_all();
        return;
      }
      item it = pool_.front();
      pool_.pop_front();
      if (it.t.checked) {
        successors(it);
        cv_.notify_all();
        continue;
      }
      family& f = families_[it.family];
      if (f.implied_consistent(it.t.indices)) {
        resolve(it.family, it.t, family::status::consistent);
        continue;
      }
      if (f.implied_inconsistent(it.t.indices)) {
        resolve(it.family, it.t, family::status::inconsistent);
        continue;
      }
      const auto fs = conjuncts(f, it.t.indices);
      const std::size_t known = log_.size();
      ++busy_;
      ++checks_;
      lock.unlock();
      std::optional<bool> verdict;
      std::string reason;
      std::exception_ptr error;
      try {
        verdict = sat(fs);
      } catch (const capacity_error& e) {
        reason = e.what();
      } catch (...) {
        error = std::current_exception();
      }
      lock.lock();
      --busy_;
      if (error) {
        failure_ = error;
        cv_.notify_all();
        return;
      }
      if (!verdict) {
        undecided_.push_back({f.target, members(it.t.indices), reason});
        resolve(it.family, it.t, family::status::undecided);
      } else {
        log_.push_back({f.target, it.t.indices, *verdict, known});
        resolve(it.family, it.t, *verdict ? family::status::consistent : family::status::inconsistent);
      }
      cv_.notify_all();
    }
  }

  const std::vector<quantified_formula>& gamma_;
  const sanity_options& opts_;
  index_set exist_;
  std::vector<family> families_;
  std::deque<item> pool_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::size_t busy_ = 0;
  std::size_t checks_ = 0;
  std::vector<check_record> log_;
  std::vector<undecided_set> undecided_;
  std::exception_ptr failure_;
};

std::vector<index_set> minimal_elements(std::vector<index_set> sets) {
  std::sort(sets.begin(), sets.end(), [](index_set a, index_set b) {
    return std::popcount(a) != std::popcount(b) ? std::popcount(a) < std::popcount(b) : a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<index_set> out;
  for (index_set s : sets) {
    if (std::none_of(out.begin(), out.end(), [&](index_set m) { return subset(m, s); })) out.push_back(s);
  }
  return out;
}

// Largest candidate subsets of `universe`: all universal members plus at
// most one existential.
std::vector<index_set> maximal_candidates(index_set universe, index_set exist) {
  const index_set universal = universe & ~exist;
  const auto ex = members(universe & exist);
  if (ex.empty()) return {universal};
  std::vector<index_set> out;
  for (auto e : ex) out.push_back(universal | bit(e));
  return out;
}

bool set_order(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return a.size() != b.size() ? a.size() < b.size() : a < b;
}

}  // namespace

std::vector<index_set> candidate_subsets(const std::vector<quantified_formula>& gamma) {
  if (gamma.size() > max_requirements) throw std::invalid_argument("too many requirements");
  const index_set exist = existential_mask(gamma);
  const index_set universal = full_mask(gamma.size()) & ~exist;
  std::vector<index_set> out;
  // Enumerate subsets of the universal part, then add zero or one existential.
  std::vector<index_set> extras{0};
  for (auto e : members(exist)) extras.push_back(bit(e));
  index_set u = 0;
  do {
    for (index_set x : extras) {
      if ((u | x) != 0) out.push_back(u | x);
    }
    u = (u - universal) & universal;
  } while (u != 0);
  std::sort(out.begin(), out.end());
  return out;
}

sanity_report find_min_inconsistent(const std::vector<quantified_formula>& gamma, const sanity_options& opts) {
  check_size(gamma);
  const std::size_t n = gamma.size();
  const index_set all = full_mask(n);
  const index_set exist = existential_mask(gamma);

  lattice_search search(gamma, opts);
  std::vector<index_set> singletons;
  for (std::size_t i = 0; i < n; ++i) singletons.push_back(bit(i));
  search.add_family(std::nullopt, all, false, singletons, maximal_candidates(all, exist));
  search.run();

  sanity_report report;
  for (index_set s : minimal_elements(search.families().front().incon_all)) {
    report.minimal_inconsistent.push_back(members(s));
  }
  std::sort(report.minimal_inconsistent.begin(), report.minimal_inconsistent.end(), set_order);
  report.undecided = std::move(search.undecided());
  report.checks_performed = search.checks();
  const std::size_t u = static_cast<std::size_t>(std::popcount(all & ~exist));
  const std::size_t e = static_cast<std::size_t>(std::popcount(exist));
  report.checks_possible = (std::size_t{1} << u) * (1 + e) - 1;
  if (opts.record_checks) report.log = std::move(search.log());
  return report;
}

sanity_report find_redundancies(const std::vector<quantified_formula>& gamma, const sanity_options& opts) {
  check_size(gamma);
  const std::size_t n = gamma.size();
  const index_set all = full_mask(n);
  const index_set exist = existential_mask(gamma);
  const std::size_t u = static_cast<std::size_t>(std::popcount(all & ~exist));
  const std::size_t e = static_cast<std::size_t>(std::popcount(exist));

  sanity_report report;
  lattice_search search(gamma, opts);
  for (std::size_t t = 0; t < n; ++t) {
    // A universal target can only be implied by universal requirements;
    // an existential one by sets with at most one existential member.
    const index_set universe = gamma[t].is_universal() ? (all & ~exist & ~bit(t)) : (all & ~bit(t));
    search.add_family(t, universe, true, {0}, maximal_candidates(universe, exist));
    if (gamma[t].is_universal()) {
      report.checks_possible += std::size_t{1} << (u - 1);
    } else {
      report.checks_possible += (std::size_t{1} << u) * e;
    }
  }
  search.run();

  for (const family& f : search.families()) {
    for (index_set s : minimal_elements(f.incon_all)) {
      // Only consistent sets count as witnesses.
      if (s != 0) {
        std::vector<formula> fs;
        for (auto i : members(s)) fs.push_back(gamma[i].body);
        bool consistent = false;
        try {
          consistent = search.check_direct(fs);
        } catch (const capacity_error& err) {
          report.undecided.push_back({std::nullopt, members(s), err.what()});
          continue;
        }
        if (!consistent) continue;
      }
      report.redundancies.push_back({*f.target, members(s)});
    }
  }
  std::sort(report.redundancies.begin(), report.redundancies.end(), [](const redundancy& a, const redundancy& b) {
    return a.target != b.target ? a.target < b.target : set_order(a.witness, b.witness);
  });
  for (auto& u_set : search.undecided()) report.undecided.push_back(std::move(u_set));
  report.checks_performed = search.checks();
  if (opts.record_checks) report.log = std::move(search.log());
  return report;
}

}  // namespace ltlsanity

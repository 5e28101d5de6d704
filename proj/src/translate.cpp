#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "ltlsanity/automaton.hpp"

namespace ltlsanity {

namespace {

struct closure_node {
  op kind;
  std::uint32_t atom = 0;  // atom nodes only
  int left = -1;
  int right = -1;
  int acc = -1;  // acceptance set index for U/F nodes
};

struct vector_hash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// One way of satisfying a set of obligations at the current position.
struct term {
  std::vector<literal> label;   // sorted
  std::vector<int> next;        // sorted obligations for the successor
  std::vector<int> postponed;   // sorted acceptance indices left unfulfilled
};

class tableau {
 public:
  explicit tableau(const formula& nnf) {
    std::vector<std::string> names = atoms(nnf);
    for (std::size_t i = 0; i < names.size(); ++i) atom_index_.emplace(names[i], static_cast<std::uint32_t>(i));
    ap_ = std::move(names);
    root_ = intern(nnf);
  }

  const std::vector<std::string>& ap() const { return ap_; }
  int root() const { return root_; }
  int acceptance_sets() const { return acc_count_; }
  bool is_true(int id) const { return nodes_[id].kind == op::tt; }

  std::vector<term> expand(const std::vector<int>& obligations) const {
    std::vector<term> out;
    branch b;
    b.todo.assign(obligations.rbegin(), obligations.rend());
    run(std::move(b), out);
    return normalise(std::move(out));
  }

 private:
  struct branch {
    std::vector<int> todo;
    std::vector<int> done;
    std::vector<literal> label;
    std::vector<int> next;
    std::vector<int> postponed;
  };

  int intern(const formula& f) {
    if (auto it = ids_.find(f); it != ids_.end()) return it->second;
    closure_node n{f.kind()};
    if (f.kind() == op::atom) {
      n.atom = atom_index_.at(f.name());
    } else if (f.kind() == op::negation) {
      // NNF: negation only above atoms.
      n.atom = atom_index_.at(f.child().name());
    } else if (is_unary(f.kind())) {
      n.left = intern(f.child());
    } else if (is_binary(f.kind())) {
      n.left = intern(f.left());
      n.right = intern(f.right());
    }
    if (f.kind() == op::until || f.kind() == op::eventually) n.acc = acc_count_++;
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    ids_.emplace(f, id);
    return id;
  }

  static void insert_sorted(std::vector<int>& v, int x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
  }

  // Returns false if the literal contradicts the branch.
  static bool add_literal(std::vector<literal>& label, literal l) {
    for (const auto& m : label) {
      if (m.atom == l.atom) return m.negated == l.negated;
    }
    label.insert(std::lower_bound(label.begin(), label.end(), l), l);
    return true;
  }

  void run(branch b, std::vector<term>& out) const {
    while (!b.todo.empty()) {
      const int id = b.todo.back();
      b.todo.pop_back();
      if (std::binary_search(b.done.begin(), b.done.end(), id)) continue;
      insert_sorted(b.done, id);
      const closure_node& n = nodes_[id];
      switch (n.kind) {
        case op::tt:
          break;
        case op::ff:
          return;
        case op::atom:
          if (!add_literal(b.label, {n.atom, false})) return;
          break;
        case op::negation:
          if (!add_literal(b.label, {n.atom, true})) return;
          break;
        case op::conjunction:
          b.todo.push_back(n.right);
          b.todo.push_back(n.left);
          break;
        case op::disjunction: {
          branch alt = b;
          alt.todo.push_back(n.right);
          b.todo.push_back(n.left);
          run(std::move(b), out);
          run(std::move(alt), out);
          return;
        }
        case op::next:
          if (!is_true(n.left)) insert_sorted(b.next, n.left);
          break;
        case op::until: {
          branch alt = b;
          alt.todo.push_back(n.left);
          insert_sorted(alt.next, id);
          insert_sorted(alt.postponed, n.acc);
          b.todo.push_back(n.right);
          run(std::move(b), out);
          run(std::move(alt), out);
          return;
        }
        case op::eventually: {
          branch alt = b;
          insert_sorted(alt.next, id);
          insert_sorted(alt.postponed, n.acc);
          b.todo.push_back(n.left);
          run(std::move(b), out);
          run(std::move(alt), out);
          return;
        }
        case op::release: {
          branch alt = b;
          alt.todo.push_back(n.right);
          insert_sorted(alt.next, id);
          b.todo.push_back(n.right);
          b.todo.push_back(n.left);
          run(std::move(b), out);
          run(std::move(alt), out);
          return;
        }
        case op::globally:
          insert_sorted(b.next, id);
          b.todo.push_back(n.left);
          break;
        default:
          break;
      }
    }
    out.push_back({std::move(b.label), std::move(b.next), std::move(b.postponed)});
  }

  // Drops duplicate terms and, among terms with equal label and successor,
  // those whose postponed set strictly contains another's.
  static std::vector<term> normalise(std::vector<term> terms) {
    std::vector<term> kept;
    for (auto& t : terms) {
      bool dominated = false;
      for (const auto& k : kept) {
        if (k.label == t.label && k.next == t.next &&
            std::includes(t.postponed.begin(), t.postponed.end(), k.postponed.begin(), k.postponed.end())) {
          dominated = true;
          break;
        }
      }
      if (dominated) continue;
      std::erase_if(kept, [&](const term& k) {
        return k.label == t.label && k.next == t.next &&
               std::includes(k.postponed.begin(), k.postponed.end(), t.postponed.begin(), t.postponed.end());
      });
      kept.push_back(std::move(t));
    }
    return kept;
  }

  std::map<std::string, std::uint32_t> atom_index_;
  std::vector<std::string> ap_;
  std::vector<closure_node> nodes_;
  std::unordered_map<formula, int, formula_hash> ids_;
  int acc_count_ = 0;
  int root_ = -1;
};

}  // namespace

buchi_automaton translate(const formula& f, const translate_options& opts) {
  const formula input = to_nnf(simplify(to_nnf(f)));
  tableau tab(input);
  const int k = tab.acceptance_sets();

  std::unordered_map<std::vector<int>, int, vector_hash> set_ids;
  std::vector<std::vector<term>> expansions;
  auto set_id = [&](std::vector<int> s) {
    auto [it, fresh] = set_ids.emplace(s, static_cast<int>(expansions.size()));
    if (fresh) expansions.push_back(tab.expand(s));
    return it->second;
  };

  // Degeneralised states are (obligation set, counter level); level k accepts.
  std::map<std::pair<int, int>, state_id> states;
  std::deque<std::pair<int, int>> queue;
  buchi_automaton a;
  a.ap = tab.ap();
  auto state_of = [&](int set, int level) {
    auto [it, fresh] = states.emplace(std::make_pair(set, level), static_cast<state_id>(states.size()));
    if (fresh) {
      if (states.size() > opts.max_states) {
        throw capacity_error("automaton exceeds the state limit of " + std::to_string(opts.max_states));
      }
      queue.emplace_back(set, level);
      if (level == k) a.accepting_states.push_back(it->second);
    }
    return it->second;
  };

  std::vector<int> init;
  if (!tab.is_true(tab.root())) init.push_back(tab.root());
  a.initial.push_back(state_of(set_id(std::move(init)), 0));

  while (!queue.empty()) {
    const auto [set, level] = queue.front();
    queue.pop_front();
    const state_id src = states.at({set, level});
    const std::vector<term> terms = expansions[set];
    std::vector<edge> out;
    for (const term& t : terms) {
      int next_level = level == k ? 0 : level;
      while (next_level < k && !std::binary_search(t.postponed.begin(), t.postponed.end(), next_level)) ++next_level;
      const int next_set = set_id(t.next);
      const state_id dst = state_of(next_set, next_level);
      out.push_back({src, dst, t.label});
    }
    // A parallel edge whose label includes another's adds no words.
    for (std::size_t i = 0; i < out.size(); ++i) {
      const bool subsumed = std::any_of(out.begin(), out.end(), [&](const edge& o) {
        if (&o == &out[i] || o.dst != out[i].dst) return false;
        if (!std::includes(out[i].label.begin(), out[i].label.end(), o.label.begin(), o.label.end())) return false;
        return o.label.size() < out[i].label.size() || &o < &out[i];
      });
      if (!subsumed) a.edges.push_back(out[i]);
    }
  }
  a.num_states = states.size();
  std::sort(a.accepting_states.begin(), a.accepting_states.end());
  return prune_useless(a);
}

sat_result check_sat(const std::vector<formula>& conjuncts, const translate_options& opts) {
  auto res = is_empty(translate(conjoin(conjuncts), opts));
  return {!res.empty, std::move(res.witness)};
}

}  // namespace ltlsanity

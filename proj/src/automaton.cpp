#include <algorithm>
#include <charconv>
#include <deque>
#include <set>
#include <sstream>

#include "ltlsanity/automaton.hpp"

namespace ltlsanity {

void buchi_automaton::validate() const {
  if (initial.empty()) throw automaton_error("automaton has an empty set of initial states");
  auto check_state = [&](state_id s, const char* what) {
    if (s >= num_states) {
      throw automaton_error(std::string(what) + " refers to state " + std::to_string(s) + " but only " +
                            std::to_string(num_states) + " states exist");
    }
  };
  for (state_id s : initial) check_state(s, "initial set");
  for (state_id s : accepting_states) check_state(s, "accepting set");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const edge& e = edges[i];
    check_state(e.src, ("edge " + std::to_string(i)).c_str());
    check_state(e.dst, ("edge " + std::to_string(i)).c_str());
    std::set<std::uint32_t> seen;
    for (const literal& l : e.label) {
      if (l.atom >= ap.size()) throw automaton_error("edge " + std::to_string(i) + " uses an undeclared proposition");
      for (const literal& m : e.label) {
        if (m.atom == l.atom && m.negated != l.negated) {
          throw automaton_error("edge " + std::to_string(i) + " has a contradictory label on '" + ap[l.atom] + "'");
        }
      }
    }
  }
  for (edge_id e : accepting_edges) {
    if (e >= edges.size()) throw automaton_error("accepting edge " + std::to_string(e) + " does not exist");
  }
  if (mode == acceptance_mode::state_based && !accepting_edges.empty()) {
    throw automaton_error("state-based automaton lists accepting edges");
  }
  if (mode == acceptance_mode::transition_based && !accepting_states.empty()) {
    throw automaton_error("transition-based automaton lists accepting states");
  }
}

bool buchi_automaton::is_accepting_state(state_id s) const {
  return std::binary_search(accepting_states.begin(), accepting_states.end(), s);
}

bool buchi_automaton::is_accepting_edge(edge_id e) const {
  return std::binary_search(accepting_edges.begin(), accepting_edges.end(), e);
}

std::vector<std::vector<edge_id>> buchi_automaton::successors() const {
  std::vector<std::vector<edge_id>> out(num_states);
  for (std::size_t i = 0; i < edges.size(); ++i) out[edges[i].src].push_back(static_cast<edge_id>(i));
  return out;
}

// --- nested depth-first search ---------------------------------------------

namespace {

// Search graph node: state * 2 + bit. In transition-based mode the bit
// records whether the entering edge was accepting; in state-based mode it is
// always zero.
class ndfs {
 public:
  explicit ndfs(const buchi_automaton& a)
      : a_(a), succ_(a.successors()), tb_(a.mode == acceptance_mode::transition_based) {
    outer_.assign(a.num_states * 2, false);
    inner_.assign(a.num_states * 2, false);
  }

  emptiness_result run() {
    for (state_id init : a_.initial) {
      const std::size_t start = init * 2;
      if (outer_[start]) continue;
      if (auto w = outer_search(start)) return {false, std::move(w)};
    }
    return {true, std::nullopt};
  }

 private:
  struct frame {
    std::size_t node;
    std::size_t next = 0;  // index into successors of the node's state
    edge_id via = 0;       // edge used to enter this node
  };

  std::size_t target(edge_id e) const {
    const edge& ed = a_.edges[e];
    return ed.dst * 2 + ((tb_ && a_.is_accepting_edge(e)) ? 1 : 0);
  }

  bool accepting(std::size_t node) const {
    return tb_ ? (node & 1) != 0 : a_.is_accepting_state(static_cast<state_id>(node / 2));
  }

  std::optional<lasso> outer_search(std::size_t start) {
    std::vector<frame> stack{{start}};
    outer_[start] = true;
    while (!stack.empty()) {
      frame& top = stack.back();
      const auto& out = succ_[top.node / 2];
      if (top.next < out.size()) {
        const edge_id e = out[top.next++];
        const std::size_t t = target(e);
        if (!outer_[t]) {
          outer_[t] = true;
          stack.push_back({t, 0, e});
        }
        continue;
      }
      if (accepting(top.node)) {
        if (auto loop = inner_search(top.node)) {
          lasso l;
          for (std::size_t i = 1; i < stack.size(); ++i) l.stem.push_back(stack[i].via);
          l.loop = std::move(*loop);
          return l;
        }
      }
      stack.pop_back();
    }
    return std::nullopt;
  }

  std::optional<std::vector<edge_id>> inner_search(std::size_t seed) {
    std::vector<frame> stack{{seed}};
    inner_[seed] = true;
    while (!stack.empty()) {
      frame& top = stack.back();
      const auto& out = succ_[top.node / 2];
      if (top.next < out.size()) {
        const edge_id e = out[top.next++];
        const std::size_t t = target(e);
        if (t == seed) {
          std::vector<edge_id> loop;
          for (std::size_t i = 1; i < stack.size(); ++i) loop.push_back(stack[i].via);
          loop.push_back(e);
          return loop;
        }
        if (!inner_[t]) {
          inner_[t] = true;
          stack.push_back({t, 0, e});
        }
        continue;
      }
      stack.pop_back();
    }
    return std::nullopt;
  }

  const buchi_automaton& a_;
  std::vector<std::vector<edge_id>> succ_;
  bool tb_;
  std::vector<bool> outer_;
  std::vector<bool> inner_;
};

}  // namespace

emptiness_result is_empty(const buchi_automaton& a) { return ndfs(a).run(); }

buchi_automaton prune_useless(const buchi_automaton& a) {
  const std::size_t n = a.num_states;
  const auto succ = a.successors();

  // Iterative Tarjan.
  std::vector<std::int64_t> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<state_id> stack;
  std::int64_t counter = 0, comps = 0;
  for (state_id root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<std::pair<state_id, std::size_t>> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < succ[v].size()) {
        const state_id w = a.edges[succ[v][i++]].dst;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const state_id done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        state_id w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
        } while (w != done);
        ++comps;
      }
    }
  }

  // An SCC is good if some accepting state or edge lies on a cycle in it.
  std::vector<bool> good_comp(static_cast<std::size_t>(comps), false);
  for (edge_id e = 0; e < a.edges.size(); ++e) {
    const auto& ed = a.edges[e];
    if (comp[ed.src] != comp[ed.dst]) continue;
    const bool acc = a.mode == acceptance_mode::state_based ? a.is_accepting_state(ed.src) : a.is_accepting_edge(e);
    if (acc) good_comp[comp[ed.src]] = true;
  }

  std::vector<std::vector<state_id>> pred(n);
  for (const auto& ed : a.edges) pred[ed.dst].push_back(ed.src);
  std::vector<bool> useful(n, false);
  std::deque<state_id> queue;
  for (state_id s = 0; s < n; ++s) {
    if (good_comp[comp[s]]) {
      useful[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const state_id s = queue.front();
    queue.pop_front();
    for (state_id p : pred[s]) {
      if (!useful[p]) {
        useful[p] = true;
        queue.push_back(p);
      }
    }
  }
  std::vector<bool> reached(n, false);
  for (state_id q : a.initial) {
    if (useful[q] && !reached[q]) {
      reached[q] = true;
      queue.push_back(q);
    }
  }
  while (!queue.empty()) {
    const state_id s = queue.front();
    queue.pop_front();
    for (edge_id e : succ[s]) {
      const state_id w = a.edges[e].dst;
      if (useful[w] && !reached[w]) {
        reached[w] = true;
        queue.push_back(w);
      }
    }
  }

  buchi_automaton out;
  out.mode = a.mode;
  out.ap = a.ap;
  std::vector<std::int64_t> renumber(n, -1);
  for (state_id s = 0; s < n; ++s) {
    if (reached[s]) renumber[s] = static_cast<std::int64_t>(out.num_states++);
  }
  if (out.num_states == 0) {
    out.num_states = 1;
    out.initial = {0};
    return out;
  }
  for (state_id q : a.initial) {
    if (reached[q]) out.initial.push_back(static_cast<state_id>(renumber[q]));
  }
  for (state_id s : a.accepting_states) {
    if (reached[s]) out.accepting_states.push_back(static_cast<state_id>(renumber[s]));
  }
  for (edge_id e = 0; e < a.edges.size(); ++e) {
    const auto& ed = a.edges[e];
    if (!reached[ed.src] || !reached[ed.dst]) continue;
    if (a.is_accepting_edge(e)) out.accepting_edges.push_back(static_cast<edge_id>(out.edges.size()));
    out.edges.push_back(
        {static_cast<state_id>(renumber[ed.src]), static_cast<state_id>(renumber[ed.dst]), ed.label});
  }
  return out;
}

// --- neutral text format ----------------------------------------------------

namespace {

template <typename Id>
void append_list(std::ostringstream& os, const char* key, const std::vector<Id>& ids) {
  os << key << ':';
  for (auto i : ids) os << ' ' << i;
  os << '\n';
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::uint32_t parse_index(const std::string& word, int line) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec != std::errc() || ptr != word.data() + word.size()) {
    throw automaton_error("line " + std::to_string(line) + ": expected a number, got '" + word + "'");
  }
  return v;
}

}  // namespace

std::string export_automaton(const buchi_automaton& a) {
  std::ostringstream os;
  os << "ba v1\n";
  os << "acceptance: " << (a.mode == acceptance_mode::state_based ? "state" : "transition") << '\n';
  os << "states: " << a.num_states << '\n';
  append_list(os, "initial", a.initial);
  if (a.mode == acceptance_mode::state_based) {
    append_list(os, "accepting-states", a.accepting_states);
  } else {
    append_list(os, "accepting-edges", a.accepting_edges);
  }
  os << "ap:";
  for (const auto& p : a.ap) os << ' ' << p;
  os << '\n';
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    const edge& e = a.edges[i];
    os << "edge " << i << ": " << e.src << ' ' << e.dst;
    for (const literal& l : e.label) os << ' ' << (l.negated ? "!" : "") << a.ap[l.atom];
    os << '\n';
  }
  return os.str();
}

buchi_automaton import_automaton(std::string_view text) {
  buchi_automaton a;
  bool header = false;
  std::set<std::string> seen_keys;
  std::vector<std::pair<int, std::string>> edge_lines;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (!header) {
      if (line != "ba v1") throw automaton_error("line " + std::to_string(lineno) + ": expected header 'ba v1'");
      header = true;
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw automaton_error("line " + std::to_string(lineno) + ": expected 'key: value'");
    }
    const std::string key(trim(line.substr(0, colon)));
    const std::string_view value = line.substr(colon + 1);
    if (key.rfind("edge ", 0) == 0) {
      edge_lines.emplace_back(lineno, std::string(line));
      continue;
    }
    if (!edge_lines.empty()) {
      throw automaton_error("line " + std::to_string(lineno) + ": '" + key + "' after the first edge");
    }
    if (!seen_keys.insert(key).second) throw automaton_error("line " + std::to_string(lineno) + ": duplicate '" + key + "'");
    auto words = split_words(value);
    if (key == "acceptance") {
      if (words.size() != 1 || (words[0] != "state" && words[0] != "transition")) {
        throw automaton_error("line " + std::to_string(lineno) + ": acceptance must be 'state' or 'transition'");
      }
      a.mode = words[0] == "state" ? acceptance_mode::state_based : acceptance_mode::transition_based;
    } else if (key == "states") {
      if (words.size() != 1) throw automaton_error("line " + std::to_string(lineno) + ": malformed state count");
      a.num_states = parse_index(words[0], lineno);
    } else if (key == "initial") {
      for (const auto& w : words) a.initial.push_back(parse_index(w, lineno));
    } else if (key == "accepting-states") {
      for (const auto& w : words) a.accepting_states.push_back(parse_index(w, lineno));
    } else if (key == "accepting-edges") {
      for (const auto& w : words) a.accepting_edges.push_back(parse_index(w, lineno));
    } else if (key == "ap") {
      a.ap = words;
    } else {
      throw automaton_error("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!header) throw automaton_error("missing header 'ba v1'");
  for (const char* required : {"acceptance", "states", "initial", "ap"}) {
    if (!seen_keys.count(required)) throw automaton_error(std::string("missing '") + required + "' line");
  }
  const bool sb = a.mode == acceptance_mode::state_based;
  if (sb && seen_keys.count("accepting-edges")) throw automaton_error("state-based automaton lists accepting edges");
  if (!sb && seen_keys.count("accepting-states")) {
    throw automaton_error("transition-based automaton lists accepting states");
  }

  for (const auto& [ln, line] : edge_lines) {
    const auto colon = line.find(':');
    const auto head = split_words(std::string_view(line).substr(0, colon));
    if (head.size() != 2 || parse_index(head[1], ln) != a.edges.size()) {
      throw automaton_error("line " + std::to_string(ln) + ": edges must be numbered consecutively from 0");
    }
    auto words = split_words(std::string_view(line).substr(colon + 1));
    if (words.size() < 2) throw automaton_error("line " + std::to_string(ln) + ": edge needs a source and a target");
    edge e;
    e.src = parse_index(words[0], ln);
    e.dst = parse_index(words[1], ln);
    for (std::size_t i = 2; i < words.size(); ++i) {
      std::string_view w = words[i];
      literal l;
      if (!w.empty() && w.front() == '!') {
        l.negated = true;
        w.remove_prefix(1);
      }
      auto it = std::find(a.ap.begin(), a.ap.end(), w);
      if (it == a.ap.end()) {
        throw automaton_error("line " + std::to_string(ln) + ": undeclared proposition '" + std::string(w) + "'");
      }
      l.atom = static_cast<std::uint32_t>(it - a.ap.begin());
      e.label.push_back(l);
    }
    a.edges.push_back(std::move(e));
  }
  std::sort(a.accepting_states.begin(), a.accepting_states.end());
  std::sort(a.accepting_edges.begin(), a.accepting_edges.end());
  a.validate();
  return a;
}

}  // namespace ltlsanity

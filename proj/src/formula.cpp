#include "ltlsanity/formula.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>

namespace ltlsanity {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 12) + (seed >> 4));
}

}  // namespace

bool is_unary(op o) {
  return o == op::negation || o == op::next || o == op::eventually || o == op::globally;
}

bool is_binary(op o) {
  switch (o) {
    case op::conjunction:
    case op::disjunction:
    case op::implication:
    case op::equivalence:
    case op::until:
    case op::release:
      return true;
    default:
      return false;
  }
}

formula formula::build(op kind, std::string name, std::vector<formula> children) {
  std::size_t h = std::hash<std::uint8_t>{}(static_cast<std::uint8_t>(kind));
  int depth = 1;
  if (kind == op::atom) h = mix(h, std::hash<std::string>{}(name));
  for (const auto& c : children) {
    h = mix(h, c.hash());
    depth = std::max(depth, c.depth() + 1);
  }
  return formula(std::make_shared<const node>(node{kind, std::move(name), std::move(children), h, depth}));
}

formula::formula() : formula(tt()) {}

formula formula::atom(std::string name) { return build(op::atom, std::move(name), {}); }

formula formula::tt() {
  static const formula t = build(op::tt, {}, {});
  return t;
}

formula formula::ff() {
  static const formula f = build(op::ff, {}, {});
  return f;
}

formula formula::negation(formula f) { return build(op::negation, {}, {std::move(f)}); }
formula formula::conjunction(formula l, formula r) { return build(op::conjunction, {}, {std::move(l), std::move(r)}); }
formula formula::disjunction(formula l, formula r) { return build(op::disjunction, {}, {std::move(l), std::move(r)}); }
formula formula::implication(formula l, formula r) { return build(op::implication, {}, {std::move(l), std::move(r)}); }
formula formula::equivalence(formula l, formula r) { return build(op::equivalence, {}, {std::move(l), std::move(r)}); }
formula formula::next(formula f) { return build(op::next, {}, {std::move(f)}); }
formula formula::until(formula l, formula r) { return build(op::until, {}, {std::move(l), std::move(r)}); }
formula formula::release(formula l, formula r) { return build(op::release, {}, {std::move(l), std::move(r)}); }
formula formula::eventually(formula f) { return build(op::eventually, {}, {std::move(f)}); }
formula formula::globally(formula f) { return build(op::globally, {}, {std::move(f)}); }

formula formula::make(op o, formula l, formula r) {
  if (o == op::tt) return tt();
  if (o == op::ff) return ff();
  assert(o != op::atom);
  if (is_unary(o)) return build(o, {}, {std::move(l)});
  return build(o, {}, {std::move(l), std::move(r)});
}

const formula& formula::child() const {
  assert(!node_->children.empty());
  return node_->children.front();
}

const formula& formula::right() const {
  assert(node_->children.size() == 2);
  return node_->children.back();
}

bool operator==(const formula& a, const formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
  return a.node_->name == b.node_->name && a.node_->children == b.node_->children;
}

std::strong_ordering operator<=>(const formula& a, const formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.node_->kind <=> b.node_->kind; c != 0) return c;
  if (auto c = a.node_->name.compare(b.node_->name); c != 0) {
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  const auto& ac = a.node_->children;
  const auto& bc = b.node_->children;
  for (std::size_t i = 0; i < std::min(ac.size(), bc.size()); ++i) {
    if (auto c = ac[i] <=> bc[i]; c != 0) return c;
  }
  return ac.size() <=> bc.size();
}

// --- negation normal form ---------------------------------------------------

namespace {

formula nnf(const formula& f, bool neg) {
  using F = formula;
  switch (f.kind()) {
    case op::atom:
      return neg ? F::negation(f) : f;
    case op::tt:
      return neg ? F::ff() : F::tt();
    case op::ff:
      return neg ? F::tt() : F::ff();
    case op::negation:
      return nnf(f.child(), !neg);
    case op::conjunction:
      return neg ? F::disjunction(nnf(f.left(), true), nnf(f.right(), true))
                 : F::conjunction(nnf(f.left(), false), nnf(f.right(), false));
    case op::disjunction:
      return neg ? F::conjunction(nnf(f.left(), true), nnf(f.right(), true))
                 : F::disjunction(nnf(f.left(), false), nnf(f.right(), false));
    case op::implication:
      return neg ? F::conjunction(nnf(f.left(), false), nnf(f.right(), true))
                 : F::disjunction(nnf(f.left(), true), nnf(f.right(), false));
    case op::equivalence: {
      auto lp = nnf(f.left(), false);
      auto ln = nnf(f.left(), true);
      auto rp = nnf(f.right(), false);
      auto rn = nnf(f.right(), true);
      return neg ? F::disjunction(F::conjunction(lp, rn), F::conjunction(ln, rp))
                 : F::disjunction(F::conjunction(lp, rp), F::conjunction(ln, rn));
    }
    case op::next:
      return F::next(nnf(f.child(), neg));
    case op::until:
      return neg ? F::release(nnf(f.left(), true), nnf(f.right(), true))
                 : F::until(nnf(f.left(), false), nnf(f.right(), false));
    case op::release:
      return neg ? F::until(nnf(f.left(), true), nnf(f.right(), true))
                 : F::release(nnf(f.left(), false), nnf(f.right(), false));
    case op::eventually:
      return neg ? F::globally(nnf(f.child(), true)) : F::eventually(nnf(f.child(), false));
    case op::globally:
      return neg ? F::eventually(nnf(f.child(), true)) : F::globally(nnf(f.child(), false));
  }
  return f;
}

}  // namespace

formula to_nnf(const formula& f) { return nnf(f, false); }

// --- simplification ---------------------------------------------------------

namespace {

bool complementary(const formula& a, const formula& b) {
  return (a.kind() == op::negation && a.child() == b) || (b.kind() == op::negation && b.child() == a);
}

void flatten(const formula& f, op kind, std::vector<formula>& out) {
  if (f.kind() == kind) {
    flatten(f.left(), kind, out);
    flatten(f.right(), kind, out);
  } else {
    out.push_back(f);
  }
}

// Rebuilds an n-ary conjunction or disjunction after applying the
// identity, annihilator, idempotence and complement laws.
formula simplify_junction(op kind, const formula& l, const formula& r) {
  const op unit = kind == op::conjunction ? op::tt : op::ff;
  const op zero = kind == op::conjunction ? op::ff : op::tt;
  std::vector<formula> parts;
  flatten(l, kind, parts);
  flatten(r, kind, parts);
  std::vector<formula> kept;
  for (const auto& p : parts) {
    if (p.kind() == zero) return formula::make(zero, {});
    if (p.kind() == unit) continue;
    if (std::find(kept.begin(), kept.end(), p) != kept.end()) continue;
    for (const auto& k : kept) {
      if (complementary(k, p)) return formula::make(zero, {});
    }
    kept.push_back(p);
  }
  if (kept.empty()) return formula::make(unit, {});
  formula acc = kept.front();
  for (std::size_t i = 1; i < kept.size(); ++i) acc = formula::make(kind, acc, kept[i]);
  return acc;
}

formula simplify_negation(const formula& c) {
  switch (c.kind()) {
    case op::tt:
      return formula::ff();
    case op::ff:
      return formula::tt();
    case op::negation:
      return c.child();
    default:
      return formula::negation(c);
  }
}

formula simplify_node(op kind, const formula& l, const formula& r) {
  using F = formula;
  switch (kind) {
    case op::negation:
      return simplify_negation(l);
    case op::conjunction:
    case op::disjunction:
      return simplify_junction(kind, l, r);
    case op::implication:
      if (l.kind() == op::tt) return r;
      if (l.kind() == op::ff || r.kind() == op::tt || l == r) return F::tt();
      if (r.kind() == op::ff) return simplify_negation(l);
      return F::implication(l, r);
    case op::equivalence:
      if (l == r) return F::tt();
      if (l.kind() == op::tt) return r;
      if (r.kind() == op::tt) return l;
      if (l.kind() == op::ff) return simplify_negation(r);
      if (r.kind() == op::ff) return simplify_negation(l);
      return F::equivalence(l, r);
    case op::next:
      if (l.kind() == op::tt || l.kind() == op::ff) return l;
      return F::next(l);
    case op::eventually:
      if (l.kind() == op::tt || l.kind() == op::ff) return l;
      if (l.kind() == op::eventually) return l;
      return F::eventually(l);
    case op::globally:
      if (l.kind() == op::tt || l.kind() == op::ff) return l;
      if (l.kind() == op::globally) return l;
      return F::globally(l);
    case op::until:
      if (r.kind() == op::tt || r.kind() == op::ff) return r;
      if (l.kind() == op::ff || l == r) return r;
      if (l.kind() == op::tt) return simplify_node(op::eventually, r, {});
      return F::until(l, r);
    case op::release:
      if (r.kind() == op::tt || r.kind() == op::ff) return r;
      if (l.kind() == op::tt || l == r) return r;
      if (l.kind() == op::ff) return simplify_node(op::globally, r, {});
      return F::release(l, r);
    default:
      break;
  }
  return F::make(kind, l, r);
}

}  // namespace

formula simplify(const formula& f) {
  if (f.kind() == op::atom || f.kind() == op::tt || f.kind() == op::ff) return f;
  if (is_unary(f.kind())) return simplify_node(f.kind(), simplify(f.child()), {});
  return simplify_node(f.kind(), simplify(f.left()), simplify(f.right()));
}

// --- occurrences ------------------------------------------------------------

namespace {

polarity flip(polarity p) {
  switch (p) {
    case polarity::positive:
      return polarity::negative;
    case polarity::negative:
      return polarity::positive;
    default:
      return polarity::mixed;
  }
}

void collect(const formula& f, polarity pol, std::vector<int>& path, std::vector<atom_occurrence>& out) {
  switch (f.kind()) {
    case op::atom:
      out.push_back({path, f.name(), pol});
      return;
    case op::tt:
    case op::ff:
      return;
    case op::negation:
      path.push_back(0);
      collect(f.child(), flip(pol), path, out);
      path.pop_back();
      return;
    case op::implication:
      path.push_back(0);
      collect(f.left(), flip(pol), path, out);
      path.back() = 1;
      collect(f.right(), pol, path, out);
      path.pop_back();
      return;
    case op::equivalence:
      path.push_back(0);
      collect(f.left(), polarity::mixed, path, out);
      path.back() = 1;
      collect(f.right(), polarity::mixed, path, out);
      path.pop_back();
      return;
    default:
      break;
  }
  path.push_back(0);
  collect(f.child(), pol, path, out);
  if (is_binary(f.kind())) {
    path.back() = 1;
    collect(f.right(), pol, path, out);
  }
  path.pop_back();
}

formula replace_from(const formula& f, const std::vector<int>& path, std::size_t at, const formula& with) {
  if (at == path.size()) return with;
  if (is_unary(f.kind())) {
    if (path[at] != 0) throw std::out_of_range("replace_at: path leaves the tree");
    return formula::make(f.kind(), replace_from(f.child(), path, at + 1, with));
  }
  if (!is_binary(f.kind()) || path[at] < 0 || path[at] > 1) {
    throw std::out_of_range("replace_at: path leaves the tree");
  }
  if (path[at] == 0) return formula::make(f.kind(), replace_from(f.left(), path, at + 1, with), f.right());
  return formula::make(f.kind(), f.left(), replace_from(f.right(), path, at + 1, with));
}

void collect_atoms(const formula& f, std::set<std::string>& out) {
  if (f.kind() == op::atom) {
    out.insert(f.name());
    return;
  }
  if (is_unary(f.kind())) {
    collect_atoms(f.child(), out);
  } else if (is_binary(f.kind())) {
    collect_atoms(f.left(), out);
    collect_atoms(f.right(), out);
  }
}

}  // namespace

std::vector<atom_occurrence> atom_occurrences(const formula& f) {
  std::vector<atom_occurrence> out;
  std::vector<int> path;
  collect(f, polarity::positive, path, out);
  return out;
}

formula replace_at(const formula& f, const std::vector<int>& path, const formula& replacement) {
  return replace_from(f, path, 0, replacement);
}

quantified_formula negate_quantified(const quantified_formula& q) {
  return {q.is_universal() ? quantifier::existential : quantifier::universal, to_nnf(formula::negation(q.body))};
}

std::vector<std::string> atoms(const formula& f) {
  std::set<std::string> s;
  collect_atoms(f, s);
  return {s.begin(), s.end()};
}

formula conjoin(const std::vector<formula>& fs) {
  if (fs.empty()) return formula::tt();
  formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = formula::conjunction(acc, fs[i]);
  return acc;
}

formula disjoin(const std::vector<formula>& fs) {
  if (fs.empty()) return formula::ff();
  formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = formula::disjunction(acc, fs[i]);
  return acc;
}

std::string_view to_string(quantifier q) { return q == quantifier::universal ? "forall" : "exists"; }

std::string_view to_string(category c) {
  switch (c) {
    case category::assumption:
      return "assumptions";
    case category::required:
      return "required";
    case category::forbidden:
      return "forbidden";
    default:
      return "plain";
  }
}

std::string_view to_string(polarity p) {
  switch (p) {
    case polarity::positive:
      return "positive";
    case polarity::negative:
      return "negative";
    default:
      return "mixed";
  }
}

}  // namespace ltlsanity

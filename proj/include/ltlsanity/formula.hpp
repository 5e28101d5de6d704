#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ltlsanity {

enum class op : std::uint8_t {
  atom,
  tt,
  ff,
  negation,
  conjunction,
  disjunction,
  implication,
  equivalence,
  next,
  until,
  release,
  eventually,
  globally,
};

bool is_unary(op o);
bool is_binary(op o);

/// Immutable LTL syntax tree. Copies share structure; equality and ordering
/// are structural.
class formula {
 public:
  /// Defaults to `true`.
  formula();

  static formula atom(std::string name);
  static formula tt();
  static formula ff();
  static formula negation(formula f);
  static formula conjunction(formula l, formula r);
  static formula disjunction(formula l, formula r);
  static formula implication(formula l, formula r);
  static formula equivalence(formula l, formula r);
  static formula next(formula f);
  static formula until(formula l, formula r);
  static formula release(formula l, formula r);
  static formula eventually(formula f);
  static formula globally(formula f);

  /// Generic constructor used by rewriting passes.
  static formula make(op o, formula l, formula r = formula());

  op kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }

  /// Operand of a unary node, or left operand of a binary node.
  const formula& child() const;
  const formula& left() const { return child(); }
  const formula& right() const;

  std::size_t hash() const { return node_->hash; }
  /// Syntax tree depth; atoms and constants have depth 1.
  int depth() const { return node_->depth; }

  friend bool operator==(const formula& a, const formula& b);
  friend std::strong_ordering operator<=>(const formula& a, const formula& b);

 private:
  struct node {
    op kind;
    std::string name;
    std::vector<formula> children;
    std::size_t hash;
    int depth;
  };
  explicit formula(std::shared_ptr<const node> n) : node_(std::move(n)) {}
  static formula build(op kind, std::string name, std::vector<formula> children);

  std::shared_ptr<const node> node_;
};

struct formula_hash {
  std::size_t operator()(const formula& f) const { return f.hash(); }
};

enum class quantifier : std::uint8_t { universal, existential };

struct quantified_formula {
  quantifier quant = quantifier::universal;
  formula body;

  bool is_universal() const { return quant == quantifier::universal; }
  bool is_existential() const { return quant == quantifier::existential; }

  friend bool operator==(const quantified_formula&, const quantified_formula&) = default;
};

enum class category : std::uint8_t { assumption, required, forbidden, plain };

struct requirement {
  std::string id;
  category cat = category::plain;
  quantified_formula formula;
  std::string source_text;
};

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  int line_;
  int column_;
};

/// Parses the surface syntax. A missing quantifier means `forall`.
quantified_formula parse(std::string_view text);
/// Parses a quantifier-free formula; a quantifier anywhere is an error.
formula parse_formula(std::string_view text);

std::string render(const formula& f);
std::string render(const quantified_formula& q);

/// Negation normal form over {true, false, literals, &, |, X, U, R, F, G}.
formula to_nnf(const formula& f);

/// Language-preserving Boolean and temporal simplification.
formula simplify(const formula& f);

enum class polarity : std::uint8_t { positive, negative, mixed };

struct atom_occurrence {
  std::vector<int> path;  // child indices from the root
  std::string name;
  polarity pol;
};

std::vector<atom_occurrence> atom_occurrences(const formula& f);

/// Returns `f` with the subtree at `path` replaced by `replacement`.
formula replace_at(const formula& f, const std::vector<int>& path, const formula& replacement);

/// Flips the quantifier and negates the body (result in NNF).
quantified_formula negate_quantified(const quantified_formula& q);

/// Distinct atom names in lexicographic order.
std::vector<std::string> atoms(const formula& f);

/// Conjunction/disjunction of a list; empty lists give true/false.
formula conjoin(const std::vector<formula>& fs);
formula disjoin(const std::vector<formula>& fs);

std::string_view to_string(quantifier q);
std::string_view to_string(category c);
std::string_view to_string(polarity p);

}  // namespace ltlsanity

#include <cctype>
#include <optional>

#include "ltlsanity/formula.hpp"

namespace ltlsanity {

parse_error::parse_error(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      detail_(msg),
      line_(line),
      column_(column) {}

namespace {

enum class tok {
  ident,
  kw_true,
  kw_false,
  kw_next,
  kw_eventually,
  kw_globally,
  kw_until,
  kw_release,
  kw_forall,
  kw_exists,
  bang,
  amp,
  bar,
  arrow,
  double_arrow,
  lparen,
  rparen,
  end,
};

struct token {
  tok kind;
  std::string text;
  int line;
  int column;
};

std::optional<tok> keyword(std::string_view word) {
  if (word == "true") return tok::kw_true;
  if (word == "false") return tok::kw_false;
  if (word == "X") return tok::kw_next;
  if (word == "F") return tok::kw_eventually;
  if (word == "G") return tok::kw_globally;
  if (word == "U") return tok::kw_until;
  if (word == "R") return tok::kw_release;
  if (word == "forall") return tok::kw_forall;
  if (word == "exists") return tok::kw_exists;
  return std::nullopt;
}

std::vector<token> lex(std::string_view text) {
  std::vector<token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const int tl = line;
    const int tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      std::string word(text.substr(i, j - i));
      auto kw = keyword(word);
      out.push_back({kw.value_or(tok::ident), word, tl, tc});
      advance(j - i);
      continue;
    }
    auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };
    if (starts("<->")) {
      out.push_back({tok::double_arrow, "<->", tl, tc});
      advance(3);
    } else if (starts("->")) {
      out.push_back({tok::arrow, "->", tl, tc});
      advance(2);
    } else if (c == '!') {
      out.push_back({tok::bang, "!", tl, tc});
      advance(1);
    } else if (c == '&') {
      out.push_back({tok::amp, "&", tl, tc});
      advance(1);
    } else if (c == '|') {
      out.push_back({tok::bar, "|", tl, tc});
      advance(1);
    } else if (c == '(') {
      out.push_back({tok::lparen, "(", tl, tc});
      advance(1);
    } else if (c == ')') {
      out.push_back({tok::rparen, ")", tl, tc});
      advance(1);
    } else {
      throw parse_error(std::string("unexpected character '") + c + "'", tl, tc);
    }
  }
  out.push_back({tok::end, "", line, col});
  return out;
}

class parser {
 public:
  explicit parser(std::vector<token> toks) : toks_(std::move(toks)) {}

  quantified_formula parse_top(bool allow_quantifier) {
    quantified_formula q;
    if (allow_quantifier && (peek().kind == tok::kw_forall || peek().kind == tok::kw_exists)) {
      q.quant = take().kind == tok::kw_forall ? quantifier::universal : quantifier::existential;
    }
    q.body = equivalence();
    if (peek().kind != tok::end) fail("unexpected '" + peek().text + "'");
    return q;
  }

 private:
  const token& peek() const { return toks_[pos_]; }
  const token& take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    throw parse_error(msg, t.line, t.column);
  }

  formula equivalence() {
    formula lhs = implication();
    while (peek().kind == tok::double_arrow) {
      take();
      lhs = formula::equivalence(lhs, implication());
    }
    return lhs;
  }

  formula implication() {
    formula lhs = disjunction();
    if (peek().kind == tok::arrow) {
      take();
      return formula::implication(lhs, implication());
    }
    return lhs;
  }

  formula disjunction() {
    formula lhs = conjunction();
    while (peek().kind == tok::bar) {
      take();
      lhs = formula::disjunction(lhs, conjunction());
    }
    return lhs;
  }

  formula conjunction() {
    formula lhs = binary_temporal();
    while (peek().kind == tok::amp) {
      take();
      lhs = formula::conjunction(lhs, binary_temporal());
    }
    return lhs;
  }

  formula binary_temporal() {
    formula lhs = unary();
    if (peek().kind == tok::kw_until) {
      take();
      return formula::until(lhs, binary_temporal());
    }
    if (peek().kind == tok::kw_release) {
      take();
      return formula::release(lhs, binary_temporal());
    }
    return lhs;
  }

  formula unary() {
    switch (peek().kind) {
      case tok::bang:
        take();
        return formula::negation(unary());
      case tok::kw_next:
        take();
        return formula::next(unary());
      case tok::kw_eventually:
        take();
        return formula::eventually(unary());
      case tok::kw_globally:
        take();
        return formula::globally(unary());
      default:
        return primary();
    }
  }

  formula primary() {
    switch (peek().kind) {
      case tok::ident:
        return formula::atom(take().text);
      case tok::kw_true:
        take();
        return formula::tt();
      case tok::kw_false:
        take();
        return formula::ff();
      case tok::lparen: {
        take();
        formula inner = equivalence();
        if (peek().kind != tok::rparen) fail("expected ')'");
        take();
        return inner;
      }
      case tok::kw_forall:
      case tok::kw_exists:
        fail("nested path quantifier '" + peek().text + "' (quantifiers are only allowed at top level)");
      case tok::end:
        fail("unexpected end of input");
      default:
        fail("unexpected '" + peek().text + "'");
    }
  }

  std::vector<token> toks_;
  std::size_t pos_ = 0;
};

// Binding strength; larger binds tighter.
int precedence(op o) {
  switch (o) {
    case op::equivalence:
      return 1;
    case op::implication:
      return 2;
    case op::disjunction:
      return 3;
    case op::conjunction:
      return 4;
    case op::until:
    case op::release:
      return 5;
    case op::negation:
    case op::next:
    case op::eventually:
    case op::globally:
      return 6;
    default:
      return 7;
  }
}

bool right_assoc(op o) { return o == op::implication || o == op::until || o == op::release; }

std::string_view symbol(op o) {
  switch (o) {
    case op::negation:
      return "!";
    case op::conjunction:
      return "&";
    case op::disjunction:
      return "|";
    case op::implication:
      return "->";
    case op::equivalence:
      return "<->";
    case op::next:
      return "X";
    case op::until:
      return "U";
    case op::release:
      return "R";
    case op::eventually:
      return "F";
    case op::globally:
      return "G";
    default:
      return "";
  }
}

void emit(const formula& f, std::string& out);

void emit_operand(const formula& f, bool parens, std::string& out) {
  if (parens) out += '(';
  emit(f, out);
  if (parens) out += ')';
}

void emit(const formula& f, std::string& out) {
  const op k = f.kind();
  switch (k) {
    case op::atom:
      out += f.name();
      return;
    case op::tt:
      out += "true";
      return;
    case op::ff:
      out += "false";
      return;
    default:
      break;
  }
  const int p = precedence(k);
  if (is_unary(k)) {
    const bool parens = precedence(f.child().kind()) < p;
    out += symbol(k);
    if (k != op::negation) out += ' ';
    emit_operand(f.child(), parens, out);
    return;
  }
  const int lp = precedence(f.left().kind());
  const int rp = precedence(f.right().kind());
  emit_operand(f.left(), lp < p || (lp == p && right_assoc(k)), out);
  out += ' ';
  out += symbol(k);
  out += ' ';
  emit_operand(f.right(), rp < p || (rp == p && !right_assoc(k)), out);
}

}  // namespace

quantified_formula parse(std::string_view text) { return parser(lex(text)).parse_top(true); }

formula parse_formula(std::string_view text) { return parser(lex(text)).parse_top(false).body; }

std::string render(const formula& f) {
  std::string out;
  emit(f, out);
  return out;
}

std::string render(const quantified_formula& q) {
  return std::string(to_string(q.quant)) + " " + render(q.body);
}

}  // namespace ltlsanity

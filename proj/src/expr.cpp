#include "magma/expr.hpp"

#include <algorithm>
#include <cctype>

namespace magma {

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->leaf_node != b->leaf_node) return false;
  if (a->leaf_node) return a->v == b->v;
  return a->op == b->op && expr_equal(a->l, b->l) && expr_equal(a->r, b->r);
}

int depth(const ExprPtr& e) {
  if (e->leaf_node) return 0;
  return 1 + std::max(depth(e->l), depth(e->r));
}

unsigned var_mask(const ExprPtr& e) {
  if (e->leaf_node) return 1u << (int)e->v;
  return var_mask(e->l) | var_mask(e->r);
}

std::vector<Var> vars(const ExprPtr& e) {
  unsigned m = var_mask(e);
  std::vector<Var> out;
  for (int i = 0; i < 3; ++i)
    if (m & (1u << i)) out.push_back((Var)i);
  return out;
}

int tree_size(const ExprPtr& e) {
  if (e->leaf_node) return 1;
  return 1 + tree_size(e->l) + tree_size(e->r);
}

std::vector<std::string> expr_ops(const ExprPtr& e) {
  std::vector<std::string> out;
  auto rec = [&](auto&& self, const ExprPtr& t) -> void {
    if (t->leaf_node) return;
    if (std::find(out.begin(), out.end(), t->op) == out.end()) out.push_back(t->op);
    self(self, t->l);
    self(self, t->r);
  };
  rec(rec, e);
  return out;
}

std::vector<ExprPtr> subexpressions(const ExprPtr& e) {
  std::vector<ExprPtr> out;
  auto seen = [&](const ExprPtr& t) {
    for (const auto& s : out)
      if (expr_equal(s, t)) return true;
    return false;
  };
  auto rec = [&](auto&& self, const ExprPtr& t) -> void {
    if (!seen(t)) out.push_back(t);
    if (!t->leaf_node) {
      self(self, t->l);
      self(self, t->r);
    }
  };
  rec(rec, e);
  return out;
}

bool is_subexpression(const ExprPtr& f, const ExprPtr& g) {
  if (expr_equal(f, g)) return true;
  if (g->leaf_node) return false;
  return is_subexpression(f, g->l) || is_subexpression(f, g->r);
}

bool is_decomposable(const ExprPtr& f, const ExprPtr& h) {
  if (expr_equal(f, h)) return true;
  if (f->leaf_node) return false;
  return is_decomposable(f->l, h) && is_decomposable(f->r, h);
}

bool is_similar(const ExprPtr& f, const ExprPtr& g) {
  for (const auto& h : subexpressions(f))
    if (is_decomposable(f, h) && is_decomposable(g, h)) return true;
  return false;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Quadratic: return "quadratic";
    case Regime::Matrix: return "matrix";
    case Regime::Cubic: return "cubic";
  }
  return "?";
}

ElementId eval_pattern(const Pattern& p, const Structure& s, ElementId hole0, ElementId hole1) {
  if (p.hole >= 0) return p.hole == 0 ? hole0 : hole1;
  ElementId a = eval_pattern(*p.l, s, hole0, hole1);
  ElementId b = eval_pattern(*p.r, s, hole0, hole1);
  return s.table(p.op).at(a, b);
}

namespace {

// Rebuild f as a pattern whose leaves are tok0 / tok1 occurrences. tok0 may
// be null (hole never used). Token match takes precedence over recursion;
// holes bind whole fixed expressions, so the greedy choice is complete.
std::unique_ptr<Pattern> build_pattern(const ExprPtr& f, const ExprPtr& tok0, const ExprPtr& tok1) {
  auto mk_leaf = [](int h) {
    auto p = std::make_unique<Pattern>();
    p->hole = h;
    return p;
  };
  if (tok0 && expr_equal(f, tok0)) return mk_leaf(0);
  if (tok1 && expr_equal(f, tok1)) return mk_leaf(1);
  if (f->leaf_node) return nullptr;
  auto l = build_pattern(f->l, tok0, tok1);
  if (!l) return nullptr;
  auto r = build_pattern(f->r, tok0, tok1);
  if (!r) return nullptr;
  auto p = std::make_unique<Pattern>();
  p->op = f->op;
  p->l = std::move(l);
  p->r = std::move(r);
  return p;
}

Var other1(Var v) { return (Var)((((int)v) + 1) % 3); }

// Candidate inner expressions: subexpressions avoiding the outer variable,
// plus "unused" (null).
std::vector<ExprPtr> inner_candidates(const std::vector<ExprPtr>& subs, Var outer) {
  std::vector<ExprPtr> out;
  out.push_back(nullptr);
  unsigned bad = 1u << (int)outer;
  for (const auto& s : subs)
    if (!(var_mask(s) & bad)) out.push_back(s);
  return out;
}

std::optional<QuadMatch> match_quadratic_for(const ExprPtr& f, Var outer,
                                             const std::vector<ExprPtr>& subs) {
  ExprPtr vleaf = Expr::leaf(outer);
  for (const auto& g : inner_candidates(subs, outer)) {
    if (auto pat = build_pattern(f, g, vleaf)) {
      QuadMatch m;
      m.outer = outer;
      m.inner = g ? g : Expr::leaf(other1(outer));
      m.shape = std::move(*pat);
      return m;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<QuadMatch> match_quadratic(const ExprPtr& f) {
  auto subs = subexpressions(f);
  for (Var v : {Var::C, Var::A, Var::B}) {
    if (auto m = match_quadratic_for(f, v, subs)) return m;
  }
  return std::nullopt;
}

std::optional<MatrixMatch> match_matrix(const ExprPtr& f) {
  auto subs = subexpressions(f);
  for (Var v : {Var::C, Var::A, Var::B}) {
    ExprPtr vleaf = Expr::leaf(v);
    ExprPtr fallback = Expr::leaf(other1(v));
    std::vector<ExprPtr> ucands = subs;
    ucands.push_back(vleaf);
    for (const auto& u : ucands) {
      // u must itself have the quadratic shape I(H(p,q), v)
      auto usubs = subexpressions(u);
      auto inner = match_quadratic_for(u, v, usubs);
      if (!inner) continue;
      for (const auto& g : inner_candidates(subs, v)) {
        if (auto outer_pat = build_pattern(f, u, g)) {
          MatrixMatch m;
          m.outer = v;
          m.h = inner->inner;
          m.g = g ? g : fallback;
          m.inner_shape = std::move(inner->shape);
          m.outer_shape = std::move(*outer_pat);
          return m;
        }
      }
    }
  }
  return std::nullopt;
}

Regime classify_shape(const ExprPtr& f) {
  if (match_quadratic(f)) return Regime::Quadratic;
  if (match_matrix(f)) return Regime::Matrix;
  return Regime::Cubic;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Token {
  enum Kind { LParen, RParen, Equals, Variable, Op, ConstKw, End } kind;
  char var = 0;
  std::string text;
  int pos = 0;
};

struct Lexer {
  const std::string& s;
  const std::vector<std::string>& alphabet;
  size_t i = 0;

  bool in_alphabet(const std::string& t) const {
    return std::find(alphabet.begin(), alphabet.end(), t) != alphabet.end();
  }

  Token next() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    if (i >= s.size()) return {Token::End, 0, "", (int)i};
    int pos = (int)i;
    char c = s[i];
    if (c == '(') return ++i, Token{Token::LParen, 0, "(", pos};
    if (c == ')') return ++i, Token{Token::RParen, 0, ")", pos};
    if (c == '=') return ++i, Token{Token::Equals, 0, "=", pos};
    if (c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
      std::string kw = s.substr(i, j - i);
      i = j;
      if (kw == "_const") return {Token::ConstKw, 0, kw, pos};
      throw MagmaError(Err::ParseError, "unknown keyword '" + kw + "' at column " + std::to_string(pos));
    }
    if (std::isalpha((unsigned char)c)) {
      size_t j = i + 1;
      if (j < s.size() && std::isalnum((unsigned char)s[j])) {
        // multi-character alphanumeric token is an operator name
        while (j < s.size() && std::isalnum((unsigned char)s[j])) ++j;
        std::string t = s.substr(i, j - i);
        i = j;
        return {Token::Op, 0, t, pos};
      }
      std::string single(1, c);
      ++i;
      if (!alphabet.empty() && in_alphabet(single) && c != 'a' && c != 'b' && c != 'c')
        return {Token::Op, 0, single, pos};
      return {Token::Variable, c, single, pos};
    }
    // run of symbol characters forms one operator token
    size_t j = i;
    auto is_sym = [](char ch) {
      return !std::isalnum((unsigned char)ch) && !std::isspace((unsigned char)ch) && ch != '(' &&
             ch != ')' && ch != '=' && ch != '_';
    };
    while (j < s.size() && is_sym(s[j])) ++j;
    if (j == i) throw MagmaError(Err::ParseError, "unexpected character at column " + std::to_string(pos));
    std::string t = s.substr(i, j - i);
    i = j;
    return {Token::Op, 0, t, pos};
  }
};

struct Parser {
  Lexer lex;
  Token cur;

  Parser(const std::string& s, const std::vector<std::string>& alphabet) : lex{s, alphabet} {
    cur = lex.next();
  }

  void advance() { cur = lex.next(); }

  void check_op(const Token& t) {
    if (!lex.alphabet.empty() && !lex.in_alphabet(t.text))
      throw MagmaError(Err::UnknownSymbol, "operation '" + t.text + "' not in alphabet");
  }

  ExprPtr primary() {
    if (cur.kind == Token::Variable) {
      char v = cur.var;
      if (v != 'a' && v != 'b' && v != 'c')
        throw MagmaError(Err::UnboundVariable, std::string("variable '") + v + "' is not in {a,b,c}");
      advance();
      return Expr::leaf((Var)(v - 'a'));
    }
    if (cur.kind == Token::LParen) {
      advance();
      ExprPtr e = expression();
      if (cur.kind != Token::RParen) throw MagmaError(Err::ParseError, "expected ')'");
      advance();
      return e;
    }
    throw MagmaError(Err::ParseError, "expected variable or '(' at column " + std::to_string(cur.pos));
  }

  // one unparenthesized infix level at most
  ExprPtr expression() {
    ExprPtr left = primary();
    if (cur.kind == Token::Op) {
      Token op = cur;
      check_op(op);
      advance();
      ExprPtr right = primary();
      if (cur.kind == Token::Op)
        throw MagmaError(Err::ParseError, "ambiguous chain of infix operators; add parentheses");
      return Expr::node(op.text, std::move(left), std::move(right));
    }
    return left;
  }
};

bool op_needs_spaces(const std::string& op) {
  for (char c : op)
    if (std::isalnum((unsigned char)c)) return true;
  return false;
}

void print_expr(const ExprPtr& e, std::string& out) {
  if (e->leaf_node) {
    out += (char)('a' + (int)e->v);
    return;
  }
  out += '(';
  print_expr(e->l, out);
  if (op_needs_spaces(e->op)) out += ' ';
  out += e->op;
  if (op_needs_spaces(e->op)) out += ' ';
  print_expr(e->r, out);
  out += ')';
}

}  // namespace

ExprPtr parse_expression(const std::string& text, const std::vector<std::string>& op_alphabet) {
  Parser p(text, op_alphabet);
  ExprPtr e = p.expression();
  if (p.cur.kind != Token::End) throw MagmaError(Err::ParseError, "trailing input after expression");
  return e;
}

Identity parse_identity(const std::string& text, const std::vector<std::string>& op_alphabet) {
  Parser p(text, op_alphabet);
  Identity id;
  id.lhs = p.expression();
  if (p.cur.kind != Token::Equals) throw MagmaError(Err::ParseError, "expected '='");
  p.advance();
  if (p.cur.kind == Token::ConstKw) {
    p.advance();
    if (p.cur.kind != Token::End) throw MagmaError(Err::ParseError, "trailing input after _const");
    id.constant_term = true;
    return id;
  }
  id.rhs = p.expression();
  if (p.cur.kind != Token::End) throw MagmaError(Err::ParseError, "trailing input after identity");
  return id;
}

std::string to_string(const ExprPtr& e) {
  std::string out;
  print_expr(e, out);
  return out;
}

std::string to_string(const Identity& id) {
  std::string out = to_string(id.lhs);
  out += " = ";
  out += id.constant_term ? "_const" : to_string(id.rhs);
  return out;
}

std::vector<std::string> identity_ops(const Identity& id) {
  std::vector<std::string> out = expr_ops(id.lhs);
  if (id.rhs) {
    for (const auto& o : expr_ops(id.rhs))
      if (std::find(out.begin(), out.end(), o) == out.end()) out.push_back(o);
  }
  return out;
}

Regime classify_identity(const Identity& id) {
  if (id.constant_term) return classify_shape(id.lhs);
  if (is_subexpression(id.lhs, id.rhs) || is_subexpression(id.rhs, id.lhs))
    throw MagmaError(Err::SubexpressionPair, "one side is a subexpression of the other");
  Regime a = classify_shape(id.lhs);
  Regime b = classify_shape(id.rhs);
  return (Regime)std::max((int)a, (int)b);
}

}  // namespace magma

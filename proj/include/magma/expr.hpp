#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "magma/core.hpp"

namespace magma {

enum class Var : int { A = 0, B = 1, C = 2 };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Rooted ordered binary tree; leaves are variables from {a,b,c}.
struct Expr {
  bool leaf_node;
  Var v = Var::A;
  std::string op;
  ExprPtr l, r;

  static ExprPtr leaf(Var v) {
    auto e = std::make_shared<Expr>();
    e->leaf_node = true;
    e->v = v;
    return e;
  }
  static ExprPtr node(std::string op, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<Expr>();
    e->leaf_node = false;
    e->op = std::move(op);
    e->l = std::move(l);
    e->r = std::move(r);
    return e;
  }
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
int depth(const ExprPtr& e);
unsigned var_mask(const ExprPtr& e);  // bit i set iff variable i occurs
std::vector<Var> vars(const ExprPtr& e);
int tree_size(const ExprPtr& e);
std::vector<std::string> expr_ops(const ExprPtr& e);  // distinct, in first-use order

// All distinct subtrees, preorder of first occurrence; includes e itself.
std::vector<ExprPtr> subexpressions(const ExprPtr& e);

// f occurs as a subtree of g (same ops, same operand order).
bool is_subexpression(const ExprPtr& f, const ExprPtr& g);

// f == F(h) for some single-variable expression F.
bool is_decomposable(const ExprPtr& f, const ExprPtr& h);

// Some subexpression h of f decomposes both f and g.
bool is_similar(const ExprPtr& f, const ExprPtr& g);

enum class Regime : int { Quadratic = 0, Matrix = 1, Cubic = 2 };

const char* regime_name(Regime r);

// Binary tree whose leaves are hole indices (0 or 1).
struct Pattern {
  int hole = -1;  // >= 0 at leaves
  std::string op;
  std::unique_ptr<Pattern> l, r;

  Pattern() = default;
  Pattern(const Pattern& o) : hole(o.hole), op(o.op) {
    if (o.l) l = std::make_unique<Pattern>(*o.l);
    if (o.r) r = std::make_unique<Pattern>(*o.r);
  }
  Pattern& operator=(const Pattern& o) {
    Pattern tmp(o);
    std::swap(hole, tmp.hole);
    std::swap(op, tmp.op);
    std::swap(l, tmp.l);
    std::swap(r, tmp.r);
    return *this;
  }
  Pattern(Pattern&&) = default;
  Pattern& operator=(Pattern&&) = default;
};

ElementId eval_pattern(const Pattern& p, const Structure& s, ElementId hole0, ElementId hole1);

// f == H(G(p,q), v): outer var v, inner expression G over the other two
// variables, H given as a pattern with hole 0 = G-value, hole 1 = v.
struct QuadMatch {
  Var outer;
  ExprPtr inner;
  Pattern shape;
};

// f == J(I(H(p,q), v), G(p,q)): patterns I (hole 0 = H-value, hole 1 = v)
// and J (hole 0 = I-result, hole 1 = G-value).
struct MatrixMatch {
  Var outer;
  ExprPtr h, g;
  Pattern inner_shape;  // I
  Pattern outer_shape;  // J
};

std::optional<QuadMatch> match_quadratic(const ExprPtr& f);
std::optional<MatrixMatch> match_matrix(const ExprPtr& f);
Regime classify_shape(const ExprPtr& f);

struct Identity {
  bool constant_term = false;
  ExprPtr lhs;
  ExprPtr rhs;  // null when constant_term
};

// Grammar: var = a|b|c; expr = primary [op primary]; primary = var | '(' expr ')'.
// An empty alphabet accepts any operator token.
ExprPtr parse_expression(const std::string& text, const std::vector<std::string>& op_alphabet);
Identity parse_identity(const std::string& text, const std::vector<std::string>& op_alphabet);

std::string to_string(const ExprPtr& e);
std::string to_string(const Identity& id);

std::vector<std::string> identity_ops(const Identity& id);

// Equation: the weaker of the two sides; ConstantTerm: the shape of f.
// Throws SubexpressionPair when one side occurs inside the other.
Regime classify_identity(const Identity& id);

}  // namespace magma

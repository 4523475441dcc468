#include <vector>

#include "doctest.h"
#include "magma/expr.hpp"
#include "magma/fp.hpp"

using namespace magma;

namespace {

const std::vector<std::string> kOps = {"+", "*", "o1", "o2", "o3", "o4"};

ExprPtr pe(const std::string& text) { return parse_expression(text, kOps); }

// independent oracle for decomposability, straight from the definition
bool oracle_decomposable(const ExprPtr& f, const ExprPtr& h) {
  if (expr_equal(f, h)) return true;
  if (f->leaf_node) return false;
  return oracle_decomposable(f->l, h) && oracle_decomposable(f->r, h);
}

bool oracle_similar(const ExprPtr& f, const ExprPtr& g) {
  for (const auto& h : subexpressions(f))
    if (oracle_decomposable(f, h) && oracle_decomposable(g, h)) return true;
  return false;
}

ExprPtr random_expr(fp::Rng& rng, int budget) {
  if (budget <= 1 || rng.below(3) == 0) return Expr::leaf((Var)rng.below(3));
  int left = 1 + (int)rng.below((uint64_t)budget - 1);
  return Expr::node(kOps[rng.below(2)], random_expr(rng, left), random_expr(rng, budget - left));
}

ExprPtr rename_vars(const ExprPtr& e, const std::array<Var, 3>& perm) {
  if (e->leaf_node) return Expr::leaf(perm[(int)e->v]);
  return Expr::node(e->op, rename_vars(e->l, perm), rename_vars(e->r, perm));
}

}  // namespace

TEST_CASE("parsing, printing, vars and depth") {
  Identity dist = parse_identity("a*(b+c) = (a*b)+(a*c)", kOps);
  CHECK_FALSE(dist.constant_term);
  CHECK(to_string(dist.lhs) == "(a*(b+c))");
  CHECK(vars(dist.lhs).size() == 3);

  Identity ct = parse_identity("((a*b)+(a*c))+(b*c) = _const", kOps);
  CHECK(ct.constant_term);

  CHECK(depth(pe("a")) == 0);
  CHECK(depth(pe("(a*b)+(c*a)")) == 2);
  CHECK(var_mask(pe("a*a")) == 1u);

  CHECK_THROWS_AS(parse_identity("a*(d+c) = a", kOps), MagmaError);
  try {
    parse_identity("a*(d+c) = a", kOps);
  } catch (const MagmaError& e) {
    CHECK(e.kind == Err::UnboundVariable);
  }
  CHECK_THROWS_AS(parse_identity("a*b+c = a", kOps), MagmaError);     // missing parens
  CHECK_THROWS_AS(parse_identity("a % b = a", kOps), MagmaError);    // unknown symbol
  try {
    parse_identity("a % b = a", kOps);
  } catch (const MagmaError& e) {
    CHECK(e.kind == Err::UnknownSymbol);
  }

  // print -> parse is the identity on random expressions
  fp::Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    ExprPtr e = random_expr(rng, 6);
    CHECK(expr_equal(pe(to_string(e)), e));
  }
}

TEST_CASE("subexpression relation") {
  CHECK(is_subexpression(pe("a*b"), pe("(a*b)+c")));
  CHECK_FALSE(is_subexpression(pe("b*a"), pe("(a*b)+c")));
  ExprPtr f = pe("(a+b)*(a+c)");
  CHECK(is_subexpression(f, f));
}

TEST_CASE("decomposability and similarity examples") {
  // f = (a+b)+((a+b)*(a+b)) decomposes into (a+b)
  ExprPtr f = pe("(a+b)+((a+b)*(a+b))");
  ExprPtr g = pe("(a+b)*(a+b)");
  CHECK(is_decomposable(f, pe("a+b")));
  CHECK(is_similar(f, g));

  CHECK_FALSE(is_similar(pe("a*b"), pe("b*a")));
  CHECK(is_similar(f, f));
}

TEST_CASE("similarity is an equivalence relation on random pools") {
  fp::Rng rng(31337);
  std::vector<ExprPtr> pool;
  for (int i = 0; i < 24; ++i) pool.push_back(random_expr(rng, 5));
  for (const auto& f : pool) CHECK(is_similar(f, f));
  for (const auto& f : pool)
    for (const auto& g : pool) {
      CHECK(is_similar(f, g) == is_similar(g, f));
      CHECK(is_similar(f, g) == oracle_similar(f, g));
    }
  int triples = 0;
  for (const auto& f : pool)
    for (const auto& g : pool)
      for (const auto& h : pool) {
        if (is_similar(f, g) && is_similar(g, h)) {
          ++triples;
          CHECK(is_similar(f, h));
        }
      }
  CHECK(triples > 0);
}

TEST_CASE("shape classification: canonical examples") {
  CHECK(classify_shape(pe("a*(b+c)")) == Regime::Quadratic);
  CHECK(classify_shape(pe("(a*b)+(a*c)")) == Regime::Matrix);
  CHECK(classify_shape(pe("((a*b)+(a*c))+(b*c)")) == Regime::Cubic);
  CHECK(classify_shape(pe("((a*b)+(a*c))+b")) == Regime::Cubic);
  CHECK(classify_shape(pe("(a*b)*c")) == Regime::Quadratic);
  CHECK(classify_shape(pe("a")) == Regime::Quadratic);
  // regime-1 but far from read-once
  CHECK(classify_shape(pe("(c*((a*b)*(b*a)))*(c+c)")) == Regime::Quadratic);
  CHECK(classify_shape(pe("(b*a)+(a*b)")) == Regime::Quadratic);
}

TEST_CASE("the six hard families classify cubic") {
  const char* families[] = {
      "((a o1 b) o3 (a o2 c)) o4 c",
      "(a o1 b) o4 ((a o2 c) o3 b)",
      "(((a o1 b) o2 c) o3 a) o4 b",
      "(((a o1 b) o2 c) o3 a) o4 c",
      "((a o1 b) o3 (a o2 c)) o4 a",
      "(a o1 b) o4 (a o3 (c o2 (a o1 b)))",
  };
  for (const char* text : families) CHECK(classify_shape(pe(text)) == Regime::Cubic);
}

TEST_CASE("classification is invariant under variable renaming") {
  fp::Rng rng(555);
  const std::array<Var, 3> perms[6] = {
      {Var::A, Var::B, Var::C}, {Var::A, Var::C, Var::B}, {Var::B, Var::A, Var::C},
      {Var::B, Var::C, Var::A}, {Var::C, Var::A, Var::B}, {Var::C, Var::B, Var::A}};
  for (int i = 0; i < 60; ++i) {
    ExprPtr e = random_expr(rng, 6);
    Regime r = classify_shape(e);
    for (const auto& perm : perms) CHECK(classify_shape(rename_vars(e, perm)) == r);
  }
}

TEST_CASE("quadratic expressions always match the matrix pattern too") {
  fp::Rng rng(99);
  int quad = 0;
  for (int i = 0; i < 150; ++i) {
    ExprPtr e = random_expr(rng, 6);
    if (match_quadratic(e)) {
      ++quad;
      CHECK(match_matrix(e).has_value());
    }
  }
  CHECK(quad > 10);
}

TEST_CASE("read-once identities classify quadratic") {
  for (const char* text : {"(a*b)*c", "a*(b*c)", "(a+b)*c", "c*(b+a)", "(a*c)+b"})
    CHECK(classify_shape(pe(text)) == Regime::Quadratic);
}

TEST_CASE("identity classification and the subexpression guard") {
  CHECK(classify_identity(parse_identity("(a*b)*c = a*(b*c)", kOps)) == Regime::Quadratic);
  CHECK(classify_identity(parse_identity("a*(b+c) = (a*b)+(a*c)", kOps)) == Regime::Matrix);
  CHECK(classify_identity(parse_identity("((a*b)+(a*c))+b = _const", kOps)) == Regime::Cubic);
  CHECK(classify_identity(parse_identity("(c*((a*b)*(b*a)))*(c+c) = (b*a)+(a*b)", kOps)) ==
        Regime::Quadratic);
  CHECK_THROWS_AS(classify_identity(parse_identity("a*(b+c) = b+c", kOps)), MagmaError);
  try {
    classify_identity(parse_identity("a*(b+c) = b+c", kOps));
  } catch (const MagmaError& e) {
    CHECK(e.kind == Err::SubexpressionPair);
  }
}

#include <cmath>
#include <vector>

#include "doctest.h"
#include "magma/reduce.hpp"
#include "magma/verify.hpp"
#include "test_util.hpp"

using namespace magma;

namespace {

const std::vector<std::string> kOps = {"+", "*", "o1", "o2", "o3", "o4"};

WeightVectors random_weights(fp::Rng& rng, int n, uint64_t p) {
  WeightVectors wv;
  wv.x = fp::random_vector(rng, n, p);
  wv.y = fp::random_vector(rng, n, p);
  wv.z = fp::random_vector(rng, n, p);
  wv.w = fp::random_vector(rng, n, p);
  return wv;
}

}  // namespace

TEST_CASE("brute force verdicts on small rings") {
  Structure z5 = make_zn(5, true);
  Identity dist = parse_identity("a*(b+c) = (a*b)+(a*c)", z5.op_names());
  CHECK(brute_force_verify(z5, dist).holds);
  Identity assoc = parse_identity("(a+b)+c = a+(b+c)", z5.op_names());
  CHECK(brute_force_verify(make_zn(6, false), assoc).holds);

  // one broken entry yields the lexicographically least counterexample
  Structure bad = mutate_entry(make_zn(4, true), "*", 2, 3, 1);
  Verdict v = brute_force_verify(bad, dist);
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness.has_value());
  Verdict vs = brute_force_verify_serial(bad, dist);
  REQUIRE(vs.witness.has_value());
  CHECK(v.witness == vs.witness);
  // recheck the witness the slow way
  auto [a, b, c] = std::tuple{v.witness->a, v.witness->b, v.witness->c};
  CHECK(eval_expr(bad, dist.lhs, a, b, c) != eval_expr(bad, dist.rhs, a, b, c));
}

TEST_CASE("parallel and serial brute force agree on random structures") {
  fp::Rng rng(11);
  Identity dist = parse_identity("a*(b+c) = (a*b)+(a*c)", kOps);
  for (int it = 0; it < 30; ++it) {
    Structure s = testutil::random_structure(3 + (int)rng.below(8), rng, it % 3 == 0);
    Verdict a = brute_force_verify(s, dist);
    Verdict b = brute_force_verify_serial(s, dist);
    CHECK(a.holds == b.holds);
    CHECK(a.witness == b.witness);
  }
}

TEST_CASE("weighted sum: all-ones weights count triples") {
  Structure z2 = make_zn(2, true);
  FieldConfig cfg;
  WeightVectors wv;
  wv.x = wv.y = wv.z = wv.w = std::vector<uint64_t>(2, 1);
  ExprPtr f = parse_expression("a+(b+c)", z2.op_names());
  CHECK(evaluate_weighted_sum(z2, f, wv, Regime::Cubic, cfg) == 8);
  CHECK(evaluate_weighted_sum(z2, f, wv, Regime::Quadratic, cfg) == 8);
}

TEST_CASE("weighted sum: output indicator counts xor triples") {
  // oracle: enumerate triples of Z2 with a^b^c == 0
  Structure z2 = make_zn(2, false);
  ExprPtr f = parse_expression("a+(b+c)", z2.op_names());
  long long oracle = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        if (((a + b + c) % 2) == 0) ++oracle;
  CHECK(oracle == 4);
  WeightVectors wv;
  wv.x = wv.y = wv.z = std::vector<uint64_t>(2, 1);
  wv.w = {1, 0};  // indicator of element 0
  FieldConfig cfg;
  CHECK(evaluate_weighted_sum(z2, f, wv, Regime::Cubic, cfg) == (uint64_t)oracle);
}

TEST_CASE("route independence on admissible routes") {
  fp::Rng rng(321);
  FieldConfig cfg;
  for (int it = 0; it < 12; ++it) {
    int n = 3 + (int)rng.below(30);
    Structure s = testutil::random_structure(n, rng, false);
    WeightVectors wv = random_weights(rng, n, cfg.p);
    ExprPtr quad = parse_expression("(a*b)*c", kOps);
    uint64_t q = evaluate_weighted_sum(s, quad, wv, Regime::Quadratic, cfg);
    uint64_t m = evaluate_weighted_sum(s, quad, wv, Regime::Matrix, cfg);
    uint64_t c = evaluate_weighted_sum(s, quad, wv, Regime::Cubic, cfg);
    CHECK(q == m);
    CHECK(m == c);
    ExprPtr mat = parse_expression("(a*b)+(a*c)", kOps);
    CHECK(evaluate_weighted_sum(s, mat, wv, Regime::Matrix, cfg) ==
          evaluate_weighted_sum(s, mat, wv, Regime::Cubic, cfg));
  }
}

TEST_CASE("route below the shape is rejected") {
  Structure s = make_zn(4, true);
  FieldConfig cfg;
  WeightVectors wv;
  wv.x = wv.y = wv.z = wv.w = std::vector<uint64_t>(4, 1);
  ExprPtr mat = parse_expression("(a*b)+(a*c)", s.op_names());
  CHECK_THROWS_AS(evaluate_weighted_sum(s, mat, wv, Regime::Quadratic, cfg), MagmaError);
}

TEST_CASE("pit verifier on canonical cases") {
  FieldConfig cfg;
  cfg.seed = 99;
  Structure z7 = make_zn(7, true);
  Identity dist = parse_identity("a*(b+c) = (a*b)+(a*c)", z7.op_names());
  Verdict v = verify_identity(z7, dist, cfg);
  CHECK(v.holds);
  CHECK(v.err_bound <= std::pow(4.0 / (double)cfg.p, 2) * 1.0001);

  Structure broken = mutate_entry(make_zn(6, true), "*", 2, 3, 1);
  CHECK_FALSE(verify_identity(broken, dist, cfg).holds);
  CHECK(brute_force_verify(broken, dist).holds == false);

  Identity assoc = parse_identity("(a+b)+c = a+(b+c)", z7.op_names());
  CHECK(verify_identity(make_zn(5, false), assoc, cfg).holds);
}

TEST_CASE("pit agrees with brute force over random structures and identities") {
  fp::Rng rng(2718);
  std::vector<Identity> suite;
  for (const char* text :
       {"(a+b)+c = a+(b+c)", "a*(b+c) = (a*b)+(a*c)", "((a o1 b) o3 (a o2 c)) o4 c = _const",
        "(a*c)+b = (c*a)+b", "a*(b+c) = a"}) {
    suite.push_back(parse_identity(text, kOps));
  }
  for (int it = 0; it < 40; ++it) {
    Structure s = testutil::random_structure(3 + (int)rng.below(10), rng, it % 2 == 0);
    FieldConfig cfg;
    cfg.seed = rng.next();
    for (const auto& id : suite) {
      Verdict pit = verify_identity(s, id, cfg);
      Verdict ref = brute_force_verify(s, id);
      CHECK(pit.holds == ref.holds);
    }
  }
}

TEST_CASE("constant-term verification probes against f(0,0,0)") {
  // structure where f = a+(b+c) is constant: the one-element magma
  Structure one = make_zn(1, false);
  Identity ct = parse_identity("a+(b+c) = _const", one.op_names());
  FieldConfig cfg;
  CHECK(verify_identity(one, ct, cfg).holds);
  Structure z3 = make_zn(3, false);
  CHECK_FALSE(verify_identity(z3, ct, cfg).holds);
  CHECK_FALSE(brute_force_verify(z3, ct).holds);
}

TEST_CASE("freivalds distributivity checker") {
  FieldConfig cfg;
  cfg.seed = 5;
  CHECK(freivalds_distributivity(make_zn(9, true), cfg).holds);

  // triangle gadget: K3 is not distributive
  detect::BinaryMatrix k3(3, 3, 0, 0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) k3.set(i, j);
  Structure tri = reduce::triangle_to_distributivity(k3);
  CHECK_FALSE(freivalds_distributivity(tri, cfg).holds);
  Identity dist = parse_identity("a*(b+c) = (a*b)+(a*c)", tri.op_names());
  CHECK_FALSE(brute_force_verify(tri, dist).holds);
}

TEST_CASE("freivalds agrees with brute force on random structures") {
  fp::Rng rng(424242);
  Identity dist = parse_identity("a*(b+c) = (a*b)+(a*c)", kOps);
  int held = 0;
  for (int it = 0; it < 200; ++it) {
    int n = 3 + (int)rng.below(10);
    Structure s = testutil::random_structure(n, rng, it % 4 == 0);
    if (it % 4 == 1) {
      // small random corruption of a distributive base so both verdicts occur
      s = mutate_entry(make_zn(n, true), rng.below(2) ? "*" : "+", (int)rng.below(n),
                       (int)rng.below(n), (ElementId)rng.below(n));
      for (const char* name : {"o1", "o2", "o3", "o4"}) s.add_op(name, s.table("+"));
    }
    FieldConfig cfg;
    cfg.seed = rng.next();
    Verdict f = freivalds_distributivity(s, cfg);
    Verdict ref = brute_force_verify(s, dist);
    CHECK(f.holds == ref.holds);
    held += ref.holds;
  }
  CHECK(held > 0);
  CHECK(held < 200);
}

TEST_CASE("distributive triple counting") {
  Structure z4 = make_zn(4, true);
  CHECK(count_distributive_triples(z4) == 64);
  CHECK(count_distributive_triples_serial(z4) == 64);
  fp::Rng rng(8);
  for (int it = 0; it < 10; ++it) {
    Structure s = testutil::random_structure(3 + (int)rng.below(9), rng, false);
    CHECK(count_distributive_triples(s) == count_distributive_triples_serial(s));
  }
}

TEST_CASE("pit on subexpression pairs falls back to exact brute force") {
  Structure z5 = make_zn(5, true);
  Identity id = parse_identity("a*(b+c) = a", z5.op_names());
  FieldConfig cfg;
  Verdict v = verify_identity(z5, id, cfg);
  CHECK_FALSE(v.holds);
  CHECK(v.witness.has_value());  // exact path carries a witness
}

TEST_CASE("prime too small is rejected") {
  Structure s = make_zn(16, false);
  FieldConfig cfg;
  cfg.p = 61;
  Identity assoc = parse_identity("(a+b)+c = a+(b+c)", s.op_names());
  CHECK_THROWS_AS(verify_identity(s, assoc, cfg), MagmaError);
}

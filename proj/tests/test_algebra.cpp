#include <cmath>
#include <numeric>

#include "doctest.h"
#include "magma/algebra.hpp"
#include "test_util.hpp"

using namespace magma;
using namespace magma::algebra;

namespace {

bool cubic_associative(const Structure& s, const std::string& op) {
  const OpTable& t = s.table(op);
  for (int a = 0; a < s.n; ++a)
    for (int b = 0; b < s.n; ++b)
      for (int c = 0; c < s.n; ++c)
        if (t.at(a, t.at(b, c)) != t.at(t.at(a, b), c)) return false;
  return true;
}

// direct field-axiom check, used as the oracle at tiny sizes
bool oracle_field(const Structure& s) {
  const OpTable& add = s.table("+");
  const OpTable& mul = s.table("*");
  int n = s.n;
  if (n < 2) return false;
  auto zero = find_identity_element(s, "+");
  if (!zero) return false;
  if (!cubic_associative(s, "+")) return false;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (add.at(x, y) != add.at(y, x) || mul.at(x, y) != mul.at(y, x)) return false;
  for (int x = 0; x < n; ++x) {
    bool inv = false;
    for (int y = 0; y < n; ++y) inv |= add.at(x, y) == *zero;
    if (!inv) return false;
  }
  if (!cubic_associative(s, "*")) return false;
  // multiplicative identity on everything
  int one = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = e != *zero;
    for (int x = 0; x < n && ok; ++x) ok = mul.at(e, x) == x;
    if (ok) {
      one = e;
      break;
    }
  }
  if (one < 0) return false;
  for (int x = 0; x < n; ++x) {
    if (x == *zero) continue;
    bool inv = false;
    for (int y = 0; y < n; ++y) inv |= y != *zero && mul.at(x, y) == one;
    if (!inv) return false;
  }
  for (int x = 0; x < n; ++x)
    if (mul.at(x, *zero) != *zero || mul.at(*zero, x) != *zero) return false;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mul.at(a, add.at(b, c)) != add.at(mul.at(a, b), mul.at(a, c))) return false;
  return true;
}

bool oracle_ring(const Structure& s) {
  const OpTable& add = s.table("+");
  const OpTable& mul = s.table("*");
  int n = s.n;
  auto zero = find_identity_element(s, "+");
  if (!zero) return false;
  if (!cubic_associative(s, "+") || !cubic_associative(s, "*")) return false;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (add.at(x, y) != add.at(y, x)) return false;
  for (int x = 0; x < n; ++x) {
    bool inv = false;
    for (int y = 0; y < n; ++y) inv |= add.at(x, y) == *zero;
    if (!inv) return false;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (mul.at(a, add.at(b, c)) != add.at(mul.at(a, b), mul.at(a, c))) return false;
        if (mul.at(add.at(b, c), a) != add.at(mul.at(b, a), mul.at(c, a))) return false;
      }
  return true;
}

}  // namespace

TEST_CASE("identity element search") {
  Structure z5 = make_zn(5, true);
  CHECK(find_identity_element(z5, "+") == 0);
  Structure constant;
  constant.n = 2;
  OpTable t(2);  // all entries 0
  constant.add_op("+", std::move(t));
  CHECK_FALSE(find_identity_element(constant, "+").has_value());
}

TEST_CASE("light associativity equals the cubic check when generators span") {
  Structure z4 = make_zn(4, false);
  CHECK(light_associativity(z4, "+", {1}));
  CHECK(cubic_associative(z4, "+"));

  Structure bad = mutate_entry(z4, "+", 2, 2, 1);
  CHECK(light_associativity(bad, "+", {1}) == cubic_associative(bad, "+"));
  CHECK_FALSE(light_associativity(bad, "+", {1}));

  Structure z6 = make_zn(6, false);
  CHECK(light_associativity(z6, "+", {5}));

  CHECK_THROWS_AS(light_associativity(z6, "+", {2}), MagmaError);  // 2 generates only {0,2,4}

  fp::Rng rng(404);
  for (int it = 0; it < 40; ++it) {
    int n = 3 + (int)rng.below(10);
    Structure s = make_zn(n, false);
    if (rng.below(2))
      s = mutate_entry(s, "+", (int)rng.below(n), (int)rng.below(n), (ElementId)rng.below(n));
    auto gens = greedy_generators(s, "+");
    CHECK(light_associativity(s, "+", gens) == cubic_associative(s, "+"));
  }
}

TEST_CASE("randomized associativity test") {
  FieldConfig cfg;
  cfg.seed = 31;
  CHECK(rs_associativity_test(make_zn(3, false), "+", cfg).holds);
  CHECK(rs_associativity_test(make_zn(1, false), "+", cfg).holds);

  // random Latin square that is not associative
  fp::Rng rng(17);
  Structure latin;
  latin.n = 8;
  bool found = false;
  for (int tries = 0; tries < 100 && !found; ++tries) {
    OpTable t(8);
    // row i is a random cyclic shift composed with a random permutation
    std::vector<int> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 7; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    std::vector<int> rowperm(8);
    std::iota(rowperm.begin(), rowperm.end(), 0);
    for (int i = 7; i > 0; --i) std::swap(rowperm[i], rowperm[rng.below(i + 1)]);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) t.at(i, j) = perm[(rowperm[i] + j) % 8];
    latin.ops.clear();
    latin.add_op("+", std::move(t));
    found = !cubic_associative(latin, "+");
  }
  REQUIRE(found);
  FieldConfig cfg20;
  cfg20.trials = 20;
  cfg20.seed = 77;
  CHECK_FALSE(rs_associativity_test(latin, "+", cfg20).holds);
}

TEST_CASE("abelian decomposition on canonical groups") {
  auto factors = abelian_decomposition(make_zn(6, false), "+");
  long long prod = 1;
  for (auto f : factors) prod *= f.order;
  CHECK(prod == 6);

  Structure klein = testutil::make_cyclic_product({2, 2});
  auto kf = abelian_decomposition(klein, "+");
  REQUIRE(kf.size() == 2);
  CHECK(kf[0].order == 2);
  CHECK(kf[1].order == 2);

  CHECK(abelian_decomposition(make_zn(1, false), "+").empty());
}

TEST_CASE("decomposition spans the group as a direct sum") {
  fp::Rng rng(2023);
  for (int it = 0; it < 30; ++it) {
    std::vector<int> orders;
    int n = 1;
    while (orders.size() < 3 && n < 60) {
      int m = 2 + (int)rng.below(7);
      if (n * m > 100) break;
      orders.push_back(m);
      n *= m;
    }
    if (orders.empty()) orders.push_back(2);
    Structure g = testutil::make_cyclic_product(orders);
    auto factors = abelian_decomposition(g, "+");
    long long prod = 1;
    for (auto f : factors) prod *= f.order;
    CHECK(prod == g.n);
    // enumerate the direct sum and confirm it covers everything exactly once
    std::vector<ElementId> span{(ElementId)*find_identity_element(g, "+")};
    const OpTable& t = g.table("+");
    for (auto f : factors) {
      std::vector<ElementId> next;
      for (ElementId base : span) {
        ElementId cur = base;
        next.push_back(cur);
        for (int d = 1; d < f.order; ++d) {
          cur = t.at(cur, f.generator);
          next.push_back(cur);
        }
      }
      span = std::move(next);
    }
    std::sort(span.begin(), span.end());
    span.erase(std::unique(span.begin(), span.end()), span.end());
    CHECK((int)span.size() == g.n);
  }
}

TEST_CASE("abelian basis covers the group and is small") {
  Structure z9 = make_zn(9, false);
  Basis b9 = abelian_basis(z9, "+");
  std::vector<ElementId> all(9);
  std::iota(all.begin(), all.end(), 0);
  CHECK(basis_covers(z9, b9, all));
  CHECK((int)b9.elements.size() <= 4 * (int)std::ceil(std::sqrt(9.0)));
  // the digit split of Z9 is {0,1,2} and {0,3,6}
  CHECK(b9.elements == std::vector<ElementId>{0, 1, 2, 3, 6});

  Structure klein = testutil::make_cyclic_product({2, 2});
  Basis bk = abelian_basis(klein, "+");
  std::vector<ElementId> all4(4);
  std::iota(all4.begin(), all4.end(), 0);
  CHECK(basis_covers(klein, bk, all4));
  CHECK(bk.elements.size() <= 4);

  Structure z100 = make_zn(100, false);
  Basis b100 = abelian_basis(z100, "+");
  std::vector<ElementId> all100(100);
  std::iota(all100.begin(), all100.end(), 0);
  CHECK(basis_covers(z100, b100, all100));
  CHECK((int)b100.elements.size() <= 21);
}

TEST_CASE("field verification on canonical inputs") {
  for (int p : {2, 3, 5, 7, 11, 13}) {
    auto r = field_verify(make_zn(p, true));
    CHECK(r.ok);
  }
  CHECK(field_verify(testutil::make_gf4()).ok);
  CHECK(field_verify(testutil::make_gf8()).ok);
  CHECK(field_verify(testutil::make_gf9()).ok);
  CHECK_FALSE(field_verify(make_zn(4, true)).ok);
  CHECK_FALSE(field_verify(make_zn(6, true)).ok);
  CHECK(oracle_field(testutil::make_gf4()));
}

TEST_CASE("field verification matches the axiom oracle on tiny structures") {
  fp::Rng rng(606);
  int agree_accept = 0;
  for (int it = 0; it < 120; ++it) {
    int n = 2 + (int)rng.below(8);
    Structure s;
    switch (rng.below(4)) {
      case 0: s = make_zn(n, true); break;
      case 1: s = testutil::make_gf4(); break;
      case 2: {
        s = make_zn(n, true);
        s = mutate_entry(s, rng.below(2) ? "*" : "+", (int)rng.below(s.n), (int)rng.below(s.n),
                         (ElementId)rng.below(s.n));
        break;
      }
      default: {
        s.n = n;
        s.add_op("+", testutil::random_table(n, rng));
        s.add_op("*", testutil::random_table(n, rng));
        break;
      }
    }
    bool expected = oracle_field(s);
    CHECK(field_verify(s).ok == expected);
    agree_accept += expected;
  }
  CHECK(agree_accept > 0);
}

TEST_CASE("mutated field tables are rejected") {
  Structure gf7 = make_zn(7, true);
  CHECK_FALSE(field_verify(mutate_entry(gf7, "*", 2, 3, 0)).ok);
  fp::Rng rng(515);
  for (int it = 0; it < 100; ++it) {
    const char* op = rng.below(2) ? "*" : "+";
    int i = (int)rng.below(7), j = (int)rng.below(7);
    ElementId old = gf7.table(op).at(i, j);
    ElementId v = (ElementId)((old + 1 + rng.below(6)) % 7);
    CHECK_FALSE(field_verify(mutate_entry(gf7, op, i, j, v)).ok);
  }
}

TEST_CASE("ring verification") {
  FieldConfig cfg;
  cfg.seed = 10;
  for (int n = 2; n <= 16; ++n) CHECK(ring_verify(make_zn(n, true), cfg).ok);
  Structure mat = testutil::make_mat2_z2();
  CHECK(oracle_ring(mat));
  auto r = ring_verify(mat, cfg);
  CHECK(r.ok);
  CHECK(r.unity.has_value());  // identity matrix
  CHECK(*r.unity == 0b1001);

  // non-unital ring: even integers mod 8 -> {0,2,4,6}; index i stands for 2i
  Structure even;
  even.n = 4;
  OpTable add(4), mul(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      add.at(i, j) = (i + j) % 4;
      mul.at(i, j) = (4 * i * j % 8) / 2;
    }
  even.add_op("+", std::move(add));
  even.add_op("*", std::move(mul));
  CHECK(oracle_ring(even));
  CHECK(ring_verify(even, cfg).ok);
  CHECK_FALSE(ring_verify(even, cfg, true).ok);  // --require-unital flips it
}

TEST_CASE("ring rejection is sound against the oracle") {
  fp::Rng rng(707);
  Identity dummy;  // silence unused warnings in some stdlibs
  (void)dummy;
  for (int it = 0; it < 60; ++it) {
    int n = 2 + (int)rng.below(11);
    Structure s = make_zn(n, true);
    if (it % 3) {
      s = mutate_entry(s, rng.below(2) ? "*" : "+", (int)rng.below(n), (int)rng.below(n),
                       (ElementId)rng.below(n));
    }
    FieldConfig cfg;
    cfg.seed = rng.next();
    bool expected = oracle_ring(s);
    auto got = ring_verify(s, cfg);
    if (!got.ok) CHECK_FALSE(expected);  // Reject is sound
    if (expected) CHECK(got.ok);
  }
}

TEST_CASE("mutated Z8 ring is rejected across seeds") {
  Structure z8 = make_zn(8, true);
  fp::Rng rng(88);
  for (int it = 0; it < 40; ++it) {
    const char* op = rng.below(2) ? "*" : "+";
    int i = (int)rng.below(8), j = (int)rng.below(8);
    ElementId old = z8.table(op).at(i, j);
    ElementId v = (ElementId)((old + 1 + rng.below(7)) % 8);
    Structure bad = mutate_entry(z8, op, i, j, v);
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
      FieldConfig cfg;
      cfg.seed = seed;
      CHECK_FALSE(ring_verify(bad, cfg).ok);
    }
  }
}

TEST_CASE("group analysis report") {
  FieldConfig cfg;
  auto rep = analyze_group(make_zn(12, false), "+", cfg);
  CHECK(rep.is_group());
  CHECK(rep.abelian);
  CHECK(rep.assoc_method == "light");
  auto rnd = analyze_group(make_zn(12, false), "+", cfg, AssocMethod::Randomized);
  CHECK(rnd.associative);
  CHECK(rnd.assoc_method == "randomized");
}

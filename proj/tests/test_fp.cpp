#include "doctest.h"
#include "magma/fp.hpp"

using namespace magma;

TEST_CASE("modular arithmetic basics") {
  uint64_t p = fp::kMersenne61;
  CHECK(fp::is_probable_prime(p));
  CHECK(fp::mulmod(p - 1, p - 1, p) == 1);  // (-1)^2
  CHECK(fp::addmod(p - 1, 1, p) == 0);
  CHECK(fp::submod(0, 1, p) == p - 1);
  CHECK(fp::powmod(3, p - 1, p) == 1);  // Fermat
  CHECK(fp::mulmod(5, fp::invmod(5, p), p) == 1);
}

TEST_CASE("rng is deterministic and in range") {
  fp::Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  fp::Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    uint64_t v = c.below(97);
    CHECK(v < 97);
  }
}

TEST_CASE("matrix product: identity and hand example") {
  uint64_t p = fp::kMersenne61;
  fp::Matrix a(2, 2), id(2, 2);
  a.at(0, 0) = 1;
  a.at(0, 1) = 2;
  a.at(1, 0) = 3;
  a.at(1, 1) = 4;
  id.at(0, 0) = id.at(1, 1) = 1;
  CHECK(fp::mm(a, id, p) == a);
  fp::Matrix b(2, 2);
  b.at(0, 0) = 5;
  b.at(0, 1) = 6;
  b.at(1, 0) = 7;
  b.at(1, 1) = 8;
  fp::Matrix c = fp::mm(a, b, p);
  CHECK(c.at(0, 0) == 19);
  CHECK(c.at(0, 1) == 22);
  CHECK(c.at(1, 0) == 43);
  CHECK(c.at(1, 1) == 50);
}

TEST_CASE("blocked product matches the schoolbook reference") {
  uint64_t p = fp::kMersenne61;
  fp::Rng rng(123);
  for (int n : {1, 7, 64, 65, 130}) {
    fp::Matrix a(n, n), b(n, n);
    for (auto& v : a.a) v = rng.below(p);
    for (auto& v : b.a) v = rng.below(p);
    CHECK(fp::mm(a, b, p) == fp::mm_serial(a, b, p));
  }
}

TEST_CASE("strassen path agrees with blocked multiplication") {
  uint64_t p = fp::kMersenne61;
  fp::Rng rng(9);
  fp::MatMulConfig cfg;
  cfg.strassen_threshold = 32;
  for (int n : {64, 96, 129}) {
    fp::Matrix a(n, n), b(n, n);
    for (auto& v : a.a) v = rng.below(p);
    for (auto& v : b.a) v = rng.below(p);
    CHECK(fp::mm(a, b, p, cfg) == fp::mm_serial(a, b, p));
  }
}

TEST_CASE("generic modulus path") {
  uint64_t p = 1000003;  // prime
  fp::Rng rng(5);
  fp::Matrix a(20, 20), b(20, 20);
  for (auto& v : a.a) v = rng.below(p);
  for (auto& v : b.a) v = rng.below(p);
  CHECK(fp::mm(a, b, p) == fp::mm_serial(a, b, p));
}

#pragma once

#include <cstdint>
#include <vector>

namespace magma::fp {

// Default modulus: the Mersenne prime 2^61 - 1, reducible without division.
inline constexpr uint64_t kMersenne61 = (1ull << 61) - 1;

inline uint64_t addmod(uint64_t a, uint64_t b, uint64_t p) {
  uint64_t s = a + b;  // a, b < p < 2^62
  return s >= p ? s - p : s;
}

inline uint64_t submod(uint64_t a, uint64_t b, uint64_t p) {
  return a >= b ? a - b : a + (p - b);
}

inline uint64_t reduce128(unsigned __int128 m, uint64_t p) {
  if (p == kMersenne61) {
    // 2^61 == 1 (mod p): fold twice, 128 -> 68 -> 62 bits
    unsigned __int128 t = (m & kMersenne61) + (m >> 61);
    uint64_t r = (uint64_t)((t & kMersenne61) + (t >> 61));
    if (r >= kMersenne61) r -= kMersenne61;
    if (r >= kMersenne61) r -= kMersenne61;
    return r;
  }
  return (uint64_t)(m % p);
}

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
  return reduce128((unsigned __int128)a * b, p);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t p);
uint64_t invmod(uint64_t a, uint64_t p);  // p prime, a != 0 mod p
bool is_probable_prime(uint64_t n);

// splitmix64 + xoshiro256**; self-contained so streams are identical on
// every platform given the same seed.
struct Rng {
  uint64_t s[4];

  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& w : s) {
      x += 0x9e3779b97f4a7c15ull;
      uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      w = z ^ (z >> 31);
    }
  }

  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t next() {
    uint64_t r = rotl(s[1] * 5, 7) * 9;
    uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return r;
  }

  // uniform in [0, bound) by rejection
  uint64_t below(uint64_t bound) {
    uint64_t lim = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
      v = next();
    } while (v >= lim);
    return v % bound;
  }

  int64_t in(int64_t lo, int64_t hi) {  // inclusive range
    return lo + (int64_t)below((uint64_t)(hi - lo + 1));
  }

  double unit() { return (next() >> 11) * (1.0 / 9007199254740992.0); }
};

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<uint64_t> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a((size_t)r * c, 0) {}

  uint64_t& at(int i, int j) { return a[(size_t)i * cols + j]; }
  uint64_t at(int i, int j) const { return a[(size_t)i * cols + j]; }
  bool operator==(const Matrix&) const = default;
};

struct MatMulConfig {
  int strassen_threshold = 0;  // 0: strassen disabled
};

// Schoolbook, single-threaded. Reference implementation for tests.
Matrix mm_serial(const Matrix& A, const Matrix& B, uint64_t p);

// Blocked, OpenMP-parallel, optional Strassen above the threshold.
Matrix mm(const Matrix& A, const Matrix& B, uint64_t p, const MatMulConfig& cfg = {});

std::vector<uint64_t> random_vector(Rng& rng, int n, uint64_t p);

}  // namespace magma::fp

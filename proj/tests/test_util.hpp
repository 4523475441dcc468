#pragma once

#include <vector>

#include "magma/core.hpp"
#include "magma/detect.hpp"
#include "magma/fp.hpp"
#include "magma/reduce.hpp"

namespace testutil {

using magma::ElementId;
using magma::OpTable;
using magma::Structure;

inline OpTable random_table(int n, magma::fp::Rng& rng) {
  OpTable t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.at(i, j) = (ElementId)rng.below(n);
  return t;
}

// Random structure with the six operations the identity suite uses.
inline Structure random_structure(int n, magma::fp::Rng& rng, bool zn_based) {
  Structure s;
  if (zn_based) {
    s = magma::make_zn(n, true);
  } else {
    s.n = n;
    s.add_op("+", random_table(n, rng));
    s.add_op("*", random_table(n, rng));
  }
  for (const char* name : {"o1", "o2", "o3", "o4"}) {
    switch (rng.below(3)) {
      case 0: s.add_op(name, s.table("+")); break;
      case 1: s.add_op(name, s.table("*")); break;
      default: s.add_op(name, random_table(n, rng)); break;
    }
  }
  return s;
}

// GF(p^k) for the polynomial with coefficient vector irr (degree k, monic,
// given as its non-leading coefficients, lowest first).
inline Structure make_gf(int p, int k, const std::vector<int>& irr) {
  int n = 1;
  for (int i = 0; i < k; ++i) n *= p;
  auto digits = [&](int v) {
    std::vector<int> d(k);
    for (int i = 0; i < k; ++i) {
      d[i] = v % p;
      v /= p;
    }
    return d;
  };
  auto value = [&](const std::vector<int>& d) {
    int v = 0;
    for (int i = k - 1; i >= 0; --i) v = v * p + d[i];
    return v;
  };
  Structure s;
  s.n = n;
  OpTable add(n), mul(n);
  for (int x = 0; x < n; ++x) {
    auto dx = digits(x);
    for (int y = 0; y < n; ++y) {
      auto dy = digits(y);
      std::vector<int> sum(k);
      for (int i = 0; i < k; ++i) sum[i] = (dx[i] + dy[i]) % p;
      add.at(x, y) = value(sum);
      // polynomial product reduced by x^k = -irr
      std::vector<int> prod(2 * k - 1, 0);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + dx[i] * dy[j]) % p;
      for (int d = 2 * k - 2; d >= k; --d) {
        int c = prod[d];
        if (!c) continue;
        prod[d] = 0;
        for (int i = 0; i < k; ++i) prod[d - k + i] = ((prod[d - k + i] - c * irr[i]) % p + p * p) % p;
      }
      mul.at(x, y) = value({prod.begin(), prod.begin() + k});
    }
  }
  s.add_op("+", std::move(add));
  s.add_op("*", std::move(mul));
  s.set_constant("zero", 0);
  return s;
}

inline Structure make_gf4() { return make_gf(2, 2, {1, 1}); }   // x^2 + x + 1
inline Structure make_gf8() { return make_gf(2, 3, {1, 1, 0}); }  // x^3 + x + 1
inline Structure make_gf9() { return make_gf(3, 2, {1, 0}); }   // x^2 + 1

// Ring of 2x2 matrices over Z2, 16 elements, element index = 4 bits.
inline Structure make_mat2_z2() {
  Structure s;
  s.n = 16;
  OpTable add(16), mul(16);
  auto bit = [](int v, int i) { return v >> i & 1; };
  for (int x = 0; x < 16; ++x)
    for (int y = 0; y < 16; ++y) {
      int a = 0;
      for (int i = 0; i < 4; ++i) a |= ((bit(x, i) ^ bit(y, i)) << i);
      add.at(x, y) = a;
      // entries (0,0)=b0 (0,1)=b1 (1,0)=b2 (1,1)=b3
      int m00 = (bit(x, 0) & bit(y, 0)) ^ (bit(x, 1) & bit(y, 2));
      int m01 = (bit(x, 0) & bit(y, 1)) ^ (bit(x, 1) & bit(y, 3));
      int m10 = (bit(x, 2) & bit(y, 0)) ^ (bit(x, 3) & bit(y, 2));
      int m11 = (bit(x, 2) & bit(y, 1)) ^ (bit(x, 3) & bit(y, 3));
      mul.at(x, y) = m00 | (m01 << 1) | (m10 << 2) | (m11 << 3);
    }
  s.add_op("+", std::move(add));
  s.add_op("*", std::move(mul));
  s.set_constant("zero", 0);
  return s;
}

// Direct product of cyclic groups under "+".
inline Structure make_cyclic_product(const std::vector<int>& orders) {
  int n = 1;
  for (int m : orders) n *= m;
  auto decode = [&](int v) {
    std::vector<int> d(orders.size());
    for (size_t i = 0; i < orders.size(); ++i) {
      d[i] = v % orders[i];
      v /= orders[i];
    }
    return d;
  };
  auto encode = [&](const std::vector<int>& d) {
    int v = 0;
    for (int i = (int)orders.size() - 1; i >= 0; --i) v = v * orders[i] + d[i];
    return v;
  };
  Structure s;
  s.n = n;
  OpTable add(n);
  for (int x = 0; x < n; ++x) {
    auto dx = decode(x);
    for (int y = 0; y < n; ++y) {
      auto dy = decode(y);
      std::vector<int> r(orders.size());
      for (size_t i = 0; i < orders.size(); ++i) r[i] = (dx[i] + dy[i]) % orders[i];
      add.at(x, y) = encode(r);
    }
  }
  s.add_op("+", std::move(add));
  s.set_constant("zero", 0);
  return s;
}

// Random simple graph as a 0-offset adjacency matrix.
inline magma::detect::BinaryMatrix random_graph(int n, double density, magma::fp::Rng& rng) {
  magma::detect::BinaryMatrix adj(n, n, 0, 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.unit() < density) {
        adj.set(i, j);
        adj.set(j, i);
      }
  return adj;
}

inline magma::reduce::WeightedGraph random_weighted_graph(int n, double density,
                                                          magma::fp::Rng& rng) {
  magma::reduce::WeightedGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.unit() < density) g.set_edge(i, j, rng.in(-n, n));
  return g;
}

// Brute-force zero-triangle test on a general weighted graph.
inline bool has_zero_triangle(const magma::reduce::WeightedGraph& g) {
  for (int a = 0; a < g.n; ++a)
    for (int b = a + 1; b < g.n; ++b) {
      long long wab = g.get(a, b);
      if (wab == magma::detect::kAbsentWeight) continue;
      for (int c = b + 1; c < g.n; ++c) {
        long long wbc = g.get(b, c), wca = g.get(c, a);
        if (wbc == magma::detect::kAbsentWeight || wca == magma::detect::kAbsentWeight) continue;
        if (wab + wbc + wca == 0) return true;
      }
    }
  return false;
}

// Ordered triples (a,b,c) with w(a,b) + w(a,c) == -w(b,c) after completion.
inline long long count_zero_sum_ordered(const magma::reduce::WeightedGraph& g) {
  long long z = 0;
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b)
      for (int c = 0; c < g.n; ++c) {
        long long wab = magma::reduce::completed_weight(g, a, b);
        long long wac = magma::reduce::completed_weight(g, a, c);
        long long wbc = magma::reduce::completed_weight(g, b, c);
        if (wab + wac == -wbc) ++z;
      }
  return z;
}

// Random sparse multichromatic 4-AP instance over {0..n}; about half get a
// planted progression (step possibly zero or negative).
inline std::array<magma::detect::IntSet, 4> random_4ap_instance(long long n, int size,
                                                                bool plant, magma::fp::Rng& rng) {
  std::array<std::vector<long long>, 4> vals;
  for (int i = 0; i < 4; ++i)
    for (int t = 0; t < size; ++t) vals[i].push_back(rng.in(0, n));
  if (plant) {
    long long d = rng.in(-n / 4, n / 4);
    long long lo = std::max(0ll, -3 * d), hi = std::min(n, n - 3 * d);
    if (lo <= hi) {
      long long a = rng.in(lo, hi);
      for (int i = 0; i < 4; ++i) vals[i].push_back(a + i * d);
    }
  }
  std::array<magma::detect::IntSet, 4> out{
      magma::detect::make_intset(n, vals[0]), magma::detect::make_intset(n, vals[1]),
      magma::detect::make_intset(n, vals[2]), magma::detect::make_intset(n, vals[3])};
  return out;
}

}  // namespace testutil

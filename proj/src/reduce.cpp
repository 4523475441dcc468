#include "magma/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "magma/fp.hpp"

namespace magma::reduce {

WeightedGraph graph_from_tripartite(const detect::WeightedTripartite& g) {
  WeightedGraph out(3 * g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      long long wxy = g.at(g.xy, i, j);
      if (wxy != kAbsentWeight) out.set_edge(i, g.n + j, wxy);
      long long wyz = g.at(g.yz, i, j);
      if (wyz != kAbsentWeight) out.set_edge(g.n + i, 2 * g.n + j, wyz);
      long long wzx = g.at(g.zx, i, j);
      if (wzx != kAbsentWeight) out.set_edge(2 * g.n + i, j, wzx);
    }
  return out;
}

Structure triangle_to_distributivity(const BinaryMatrix& adj) {
  if (adj.rows != adj.cols) throw MagmaError(Err::ShapeMismatch, "adjacency must be square");
  int n = adj.rows;
  int delta = n, inf = n + 1;
  Structure s;
  s.n = n + 2;
  OpTable add(s.n), mul(s.n);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) {
      add.at(i, j) = inf;
      mul.at(i, j) = inf;
    }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (adj.get(adj.row0 + u, adj.col0 + v)) {
        add.at(u, v) = delta;
        mul.at(u, v) = v;
      }
    }
  s.add_op("+", std::move(add));
  s.add_op("*", std::move(mul));
  s.set_constant("delta", delta);
  s.set_constant("inf", inf);
  return s;
}

IdentityInstance zero_triangle_to_constant_identity(const WeightedGraph& g) {
  int n = g.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      long long w = g.get(i, j);
      if (w != kAbsentWeight && (w < -n || w > n))
        throw MagmaError(Err::WeightOutOfRange, "edge weights must lie in [-n, n]");
    }
  // layout: inf, delta, V, [-n..n] pairs tagged 1, [-2n..2n] pairs tagged 2
  const int inf = 0, delta = 1;
  const int vbase = 2;
  const int w1base = vbase + n;              // 2n+1 entries
  const int w2base = w1base + (2 * n + 1);   // 4n+1 entries
  Structure s;
  s.n = w2base + (4 * n + 1);  // == 7n+4
  auto w1 = [&](long long a) { return (ElementId)(w1base + a + n); };
  auto w2 = [&](long long c) { return (ElementId)(w2base + c + 2 * n); };

  OpTable mul(s.n), add(s.n);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) mul.at(i, j) = inf, add.at(i, j) = inf;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      long long w = g.get(u, v);
      if (w != kAbsentWeight) mul.at(vbase + u, vbase + v) = w1(w);
    }
  for (long long a = -n; a <= n; ++a)
    for (long long b = -n; b <= n; ++b) add.at(w1(a), w1(b)) = w2(a + b);
  for (long long c = -2 * n; c <= 2 * n; ++c)
    for (long long b = -n; b <= n; ++b) add.at(w2(c), w1(b)) = (c + b == 0) ? delta : inf;
  s.add_op("+", std::move(add));
  s.add_op("*", std::move(mul));
  s.set_constant("inf", inf);
  s.set_constant("delta", delta);

  IdentityInstance inst;
  inst.s = std::move(s);
  inst.id = parse_identity("((a*b)+(a*c))+(b*c) = _const", {"+", "*"});
  inst.family = "zero-triangle-ctic";
  inst.witness_map = "a,b,c are vertex elements 2+u, 2+v, 2+w; value delta flags a zero triangle";
  return inst;
}

long long completed_weight(const WeightedGraph& g, int i, int j) {
  long long w = g.get(i, j);
  return w == kAbsentWeight ? 3ll * g.n + 1 : w;
}

Structure zero_triangle_to_counting(const WeightedGraph& g) {
  int n = g.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      long long w = g.get(i, j);
      if (w != kAbsentWeight && (w < -n || w > n))
        throw MagmaError(Err::WeightOutOfRange, "edge weights must lie in [-n, n]");
    }
  const long long R = 10 * n;  // weight window half-width
  const int inf = 0;
  const int vbase = 1;
  const int base0 = vbase + n;
  const int span = (int)(2 * R + 1);
  const int base1 = base0 + span;
  const int base2 = base1 + span;
  Structure s;
  s.n = base2 + span;  // == 61n+4
  auto wtag = [&](long long w, int tag) {
    return (ElementId)((tag == 0 ? base0 : tag == 1 ? base1 : base2) + w + R);
  };
  auto clamp = [&](long long v) { return (v > R) ? R : (v < -R ? -R : v); };

  OpTable add(s.n), mul(s.n);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) add.at(i, j) = inf, mul.at(i, j) = inf;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      long long w = completed_weight(g, u, v);
      add.at(vbase + u, vbase + v) = wtag(w, 1);
      mul.at(vbase + u, vbase + v) = wtag(w, 2);
    }
  for (long long w1 = -R; w1 <= R; ++w1)
    for (long long w2 = -R; w2 <= R; ++w2)
      add.at(wtag(w1, 2), wtag(w2, 2)) = wtag(clamp(w1 + w2), 0);
  for (int u = 0; u < n; ++u)
    for (long long w = -R; w <= R; ++w) {
      mul.at(vbase + u, wtag(w, 1)) = wtag(-w, 0);
      mul.at(wtag(w, 1), vbase + u) = wtag(-w, 0);
    }
  s.add_op("+", std::move(add));
  s.add_op("*", std::move(mul));
  s.set_constant("inf", inf);
  return s;
}

// --- Behrend partition -------------------------------------------------------

BehrendPartition behrend_partition(long long n, int q) {
  if (q < 4 || q % 2 != 0) throw MagmaError(Err::InvalidSize, "digit base must be even and >= 4");
  if (n < 0) throw MagmaError(Err::InvalidSize, "universe bound must be nonnegative");
  int digits = 1;
  {
    long long pow = q;
    while (pow <= n) {
      pow *= q;
      ++digits;
    }
  }
  BehrendPartition part;
  part.n = n;
  part.q = q;
  // class key: (set of positions with digit >= q/2, squared norm after
  // subtracting q/2 at those positions)
  std::map<std::pair<unsigned, long long>, int> index;
  std::vector<std::vector<long long>> members;
  for (long long x = 0; x <= n; ++x) {
    unsigned pattern = 0;
    long long norm = 0;
    long long rest = x;
    for (int d = 0; d < digits; ++d) {
      long long dig = rest % q;
      rest /= q;
      if (dig >= q / 2) {
        pattern |= 1u << d;
        dig -= q / 2;
      }
      norm += dig * dig;
    }
    auto key = std::make_pair(pattern, norm);
    auto it = index.find(key);
    int cls;
    if (it == index.end()) {
      cls = (int)members.size();
      index.emplace(key, cls);
      members.emplace_back();
    } else {
      cls = it->second;
    }
    members[cls].push_back(x);
  }
  for (auto& m : members) part.classes.push_back(detect::make_intset(n, std::move(m)));
  return part;
}

int behrend_class_of(const BehrendPartition& p, long long x) {
  for (size_t i = 0; i < p.classes.size(); ++i)
    if (p.classes[i].contains(x)) return (int)i;
  return -1;
}

std::vector<std::vector<IntSet>> colorize_kap(const IntSet& a, int k, int trials, uint64_t seed) {
  if (k < 3) throw MagmaError(Err::InvalidSize, "k must be >= 3");
  if (trials < 1) throw MagmaError(Err::InvalidSize, "trials must be >= 1");
  fp::Rng rng(seed);
  std::vector<std::vector<IntSet>> out;
  out.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    std::vector<std::vector<long long>> colors(k);
    for (long long v : a.members) colors[rng.below(k)].push_back(v);
    std::vector<IntSet> inst;
    inst.reserve(k);
    for (auto& c : colors) inst.push_back(detect::make_intset(a.universe_bound, std::move(c)));
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<IntSet> monochromatize_kap(const std::vector<IntSet>& as, int q) {
  if (as.size() < 3) throw MagmaError(Err::ArityMismatch, "need k >= 3 sets");
  int k = (int)as.size();
  long long n = 0;
  for (const auto& a : as) n = std::max(n, a.universe_bound);
  BehrendPartition part = behrend_partition(n, q);
  int nclasses = (int)part.classes.size();

  // slices[i][c] = members of A_i in class c (non-empty only)
  std::vector<std::vector<std::vector<long long>>> slices(k);
  for (int i = 0; i < k; ++i) {
    slices[i].assign(nclasses, {});
    for (long long v : as[i].members) slices[i][behrend_class_of(part, v)].push_back(v);
  }
  std::vector<std::vector<int>> usable(k);
  for (int i = 0; i < k; ++i)
    for (int c = 0; c < nclasses; ++c)
      if (!slices[i][c].empty()) usable[i].push_back(c);

  // a monochromatic k-AP must span all k shifted segments, so tuples with an
  // empty slice can never fire and are skipped
  std::vector<IntSet> out;
  std::vector<int> choice(k, 0);
  long long bound = (long long)k * 10 * n + n;
  auto emit = [&]() {
    std::vector<long long> members;
    for (int i = 0; i < k; ++i) {
      long long shift = (long long)(i + 1) * 10 * n;
      for (long long v : slices[i][usable[i][choice[i]]]) members.push_back(v + shift);
    }
    out.push_back(detect::make_intset(bound, std::move(members)));
  };
  for (int i = 0; i < k; ++i)
    if (usable[i].empty()) return out;  // some color empty: no AP possible
  while (true) {
    emit();
    int d = k - 1;
    while (d >= 0 && choice[d] + 1 >= (int)usable[d].size()) choice[d--] = 0;
    if (d < 0) break;
    ++choice[d];
  }
  return out;
}

// --- 4-AP -> square / T ------------------------------------------------------

namespace {

struct HashedSet {
  std::unordered_set<long long> values;
  explicit HashedSet(const IntSet& a, long long scale) {
    values.reserve(a.members.size() * 2);
    for (long long v : a.members) values.insert(v * scale);
  }
  bool has(long long v) const { return values.count(v) != 0; }
};

long long isqrt_ceil(long long v) {
  long long r = (long long)std::ceil(std::sqrt((double)v));
  while (r * r < v) ++r;
  while (r > 1 && (r - 1) * (r - 1) >= v) --r;
  return r;
}

}  // namespace

DeltaInstances fourap_to_square(const std::array<IntSet, 4>& as, const WindowConfig& cfg) {
  long long n = 0;
  for (const auto& a : as) n = std::max(n, a.universe_bound);
  n = std::max(n, 1ll);
  const long long U = 6 * n;
  const long long N = std::max<long long>(2, isqrt_ceil(U));

  long long wlo, whi, dlo, dhi;
  if (N <= 16) {
    wlo = -8 * N - 16;
    whi = 8 * N + 16;
    dlo = -8 * N - 16;
    dhi = 8 * N + 16;
  } else {
    wlo = -4 * N - 8;
    whi = 6 * N + 8;
    dlo = -2;
    dhi = N + 2;
  }
  if (cfg.win_lo != LLONG_MIN) wlo = cfg.win_lo;
  if (cfg.win_hi != LLONG_MIN) whi = cfg.win_hi;
  if (cfg.delta_lo != LLONG_MIN) dlo = cfg.delta_lo;
  if (cfg.delta_hi != LLONG_MIN) dhi = cfg.delta_hi;

  HashedSet a1(as[0], 6), a2(as[1], 6), a3(as[2], 6), a4(as[3], 6);
  int side = (int)(whi - wlo + 1);

  DeltaInstances out;
  out.N = N;
  for (long long delta = dlo; delta <= dhi; ++delta) {
    std::array<BinaryMatrix, 4> ms{BinaryMatrix(side, side, wlo, wlo),
                                   BinaryMatrix(side, side, wlo, wlo),
                                   BinaryMatrix(side, side, wlo, wlo),
                                   BinaryMatrix(side, side, wlo, wlo)};
    for (long long i = wlo; i <= whi; ++i) {
      for (long long j = wlo; j <= whi; ++j) {
        // detector-ordered: hits at (i,j), (i+k,j), (i+k,j+k), (i,j+k)
        if (a1.has(6 * i * N - 3 * j)) ms[0].set(i, j);
        if (a3.has(N * (2 * i + 2 * j) + 2 * delta - 4 * i - j)) ms[1].set(i, j);
        if (a4.has(3 * j * N + 3 * delta - 6 * i)) ms[2].set(i, j);
        if (a2.has(N * (4 * i + j) + delta - 2 * i - 2 * j)) ms[3].set(i, j);
      }
    }
    out.deltas.push_back(delta);
    out.instances.push_back(std::move(ms));
  }
  return out;
}

DeltaInstances fourap_to_T(const std::array<IntSet, 4>& as, const WindowConfig& cfg) {
  long long n = 0;
  for (const auto& a : as) n = std::max(n, a.universe_bound);
  n = std::max(n, 1ll);
  const long long U = 3 * n;
  const long long N = std::max<long long>(2, isqrt_ceil(U));

  long long wlo, whi, dlo, dhi;
  if (N <= 16) {
    wlo = -8 * N - 16;
    whi = 8 * N + 16;
    dlo = -8 * N - 16;
    dhi = 8 * N + 16;
  } else {
    wlo = -2 * N - 8;
    whi = 5 * N + 8;
    dlo = -2 * N - 8;
    dhi = 2 * N + 8;
  }
  if (cfg.win_lo != LLONG_MIN) wlo = cfg.win_lo;
  if (cfg.win_hi != LLONG_MIN) whi = cfg.win_hi;
  if (cfg.delta_lo != LLONG_MIN) dlo = cfg.delta_lo;
  if (cfg.delta_hi != LLONG_MIN) dhi = cfg.delta_hi;

  HashedSet a1(as[0], 3), a2(as[1], 3), a3(as[2], 3), a4(as[3], 3);
  int side = (int)(whi - wlo + 1);

  DeltaInstances out;
  out.N = N;
  for (long long delta = dlo; delta <= dhi; ++delta) {
    std::array<BinaryMatrix, 4> ms{BinaryMatrix(side, side, wlo, wlo),
                                   BinaryMatrix(side, side, wlo, wlo),
                                   BinaryMatrix(side, side, wlo, wlo),
                                   BinaryMatrix(side, side, wlo, wlo)};
    for (long long i = wlo; i <= whi; ++i) {
      for (long long j = wlo; j <= whi; ++j) {
        // detector-ordered: hits at (i,j+k), (i,j-k), (i+k,j), (i,j)
        if (a3.has(N * (2 * delta + i) + 4 * i + 3 * j)) ms[0].set(i, j);
        if (a1.has(3 * i * N + 3 * j)) ms[1].set(i, j);
        if (a4.has(3 * delta * N + 6 * i + 3 * j)) ms[2].set(i, j);
        if (a2.has(N * (delta + 2 * i) + 2 * i + 3 * j)) ms[3].set(i, j);
      }
    }
    out.deltas.push_back(delta);
    out.instances.push_back(std::move(ms));
  }
  return out;
}

// --- square / T instance -> constant-term identity ---------------------------

namespace {

constexpr long long kUniverseScale = 10;  // C

long long matrix_extent(const std::array<BinaryMatrix, 4>& ms) {
  long long m = 1;
  for (const auto& b : ms) {
    m = std::max({m, std::llabs(b.row0), std::llabs(b.row0 + b.rows - 1), std::llabs(b.col0),
                  std::llabs(b.col0 + b.cols - 1)});
  }
  return m;
}

struct IdentityBuilder {
  const std::array<BinaryMatrix, 4>& ms;
  long long m;        // largest index magnitude
  long long cn;       // C * m
  Structure s;

  explicit IdentityBuilder(const std::array<BinaryMatrix, 4>& mats)
      : ms(mats), m(matrix_extent(mats)), cn(kUniverseScale * m) {
    long long size = 2 * cn + 2;
    if (size > 30000) throw MagmaError(Err::InvalidSize, "identity instance would be too large");
    s.n = (int)size;
    s.set_constant("inf", 0);
  }

  long long val(ElementId e) const { return (long long)e - 1 - cn; }  // element -> integer
  ElementId elem(long long v) const { return (ElementId)(v + cn + 1); }
  bool in_range(long long v) const { return v >= -cn && v <= cn; }

  // rule(x, y) returns the result value or LLONG_MIN for inf
  template <typename Rule>
  void add_table(const std::string& name, Rule&& rule) {
    OpTable t(s.n);
    for (int i = 0; i < s.n; ++i) t.at(0, i) = 0, t.at(i, 0) = 0;
    for (ElementId xe = 1; xe < s.n; ++xe) {
      long long x = val(xe);
      for (ElementId ye = 1; ye < s.n; ++ye) {
        long long r = rule(x, val(ye));
        t.at(xe, ye) = (r == LLONG_MIN || !in_range(r)) ? 0 : elem(r);
      }
    }
    s.add_op(name, std::move(t));
  }
};

}  // namespace

IdentityInstance square_to_identity(const std::array<BinaryMatrix, 4>& ms, int family) {
  if (family < 1 || family > 4)
    throw MagmaError(Err::ShapeMismatch, "square families are f1..f4");
  for (int t = 1; t < 4; ++t)
    if (ms[t].rows != ms[0].rows || ms[t].cols != ms[0].cols)
      throw MagmaError(Err::ShapeMismatch, "matrices must share shape");
  IdentityBuilder b(ms);
  const auto& M1 = ms[0];
  const auto& M2 = ms[1];
  const auto& M3 = ms[2];
  const auto& M4 = ms[3];
  const long long inf = LLONG_MIN;

  std::string expr_text, wmap;
  switch (family) {
    case 1:
      b.add_table("o1", [&](long long x, long long y) { return M1.get(x + y, x) ? y : inf; });
      b.add_table("o2", [&](long long x, long long y) { return M2.get(y - x, x) ? y - x : inf; });
      b.add_table("o3", [&](long long x, long long y) { return M3.get(y, y - x) ? y - x : inf; });
      b.add_table("o4", [&](long long x, long long y) { return M4.get(y - x, x) ? 0ll : inf; });
      expr_text = "((a o1 b) o3 (a o2 c)) o4 c";
      wmap = "a=j, b=i-j, c=i+j+k";
      break;
    case 2:
      b.add_table("o1", [&](long long x, long long y) { return M1.get(x + y, x) ? x + y : inf; });
      b.add_table("o2", [&](long long x, long long y) { return M2.get(y - x, x) ? y - x : inf; });
      b.add_table("o3", [&](long long x, long long y) { return M3.get(x, x - y) ? x - y : inf; });
      b.add_table("o4", [&](long long x, long long y) { return M4.get(x, y) ? 0ll : inf; });
      expr_text = "(a o1 b) o4 ((a o2 c) o3 b)";
      wmap = "a=j, b=i-j, c=i+j+k";
      break;
    case 3:
      b.add_table("o1", [&](long long x, long long y) { return M1.get(y, y - x) ? y - x : inf; });
      b.add_table("o2", [&](long long x, long long y) { return M2.get(y - x, x) ? y - x : inf; });
      b.add_table("o3", [&](long long x, long long y) { return M3.get(x, x - y) ? x - y : inf; });
      b.add_table("o4", [&](long long x, long long y) { return M4.get(y, x) ? 0ll : inf; });
      expr_text = "(((a o1 b) o2 c) o3 a) o4 b";
      wmap = "a=i-j, b=i, c=i+j+k";
      break;
    case 4:
      b.add_table("o1", [&](long long x, long long y) { return M1.get(y, y - x) ? y - x : inf; });
      b.add_table("o2", [&](long long x, long long y) { return M2.get(y - x, x) ? y - x : inf; });
      b.add_table("o3", [&](long long x, long long y) { return M3.get(x, x - y) ? x - y : inf; });
      b.add_table("o4", [&](long long x, long long y) { return M4.get(y - x, x) ? 0ll : inf; });
      expr_text = "(((a o1 b) o2 c) o3 a) o4 c";
      wmap = "a=i-j, b=i, c=i+j+k";
      break;
  }
  IdentityInstance inst;
  inst.s = std::move(b.s);
  inst.id = parse_identity(expr_text + " = _const", {"o1", "o2", "o3", "o4"});
  inst.family = "f" + std::to_string(family);
  inst.witness_map = wmap + "; element e encodes integer e-1-" + std::to_string(b.cn);
  return inst;
}

IdentityInstance T_to_identity(const std::array<BinaryMatrix, 4>& ms, int family) {
  if (family < 5 || family > 6) throw MagmaError(Err::ShapeMismatch, "T families are f5..f6");
  for (int t = 1; t < 4; ++t)
    if (ms[t].rows != ms[0].rows || ms[t].cols != ms[0].cols)
      throw MagmaError(Err::ShapeMismatch, "matrices must share shape");
  IdentityBuilder b(ms);
  const auto& M1 = ms[0];
  const auto& M2 = ms[1];
  const auto& M3 = ms[2];
  const auto& M4 = ms[3];
  const long long inf = LLONG_MIN;

  std::string expr_text, wmap;
  if (family == 5) {
    b.add_table("o1", [&](long long x, long long y) { return M1.get(x, y) ? x + y : inf; });
    b.add_table("o2", [&](long long x, long long y) { return M2.get(x, y) ? x - y : inf; });
    b.add_table("o3", [&](long long x, long long y) {
      if ((x - y) % 2 != 0) return inf;
      return M3.get((x + y) / 2, (x - y) / 2) ? (x - y) / 2 : inf;
    });
    b.add_table("o4", [&](long long x, long long y) { return M4.get(y, x) ? 0ll : inf; });
    expr_text = "((a o1 b) o3 (a o2 c)) o4 a";
    wmap = "a=i, b=j+k, c=j-k";
  } else {
    b.add_table("o1", [&](long long x, long long y) { return M4.get(y - x, x) ? y - x : inf; });
    b.add_table("o2", [&](long long x, long long y) { return M2.get(y, y - x) ? x : inf; });
    b.add_table("o3",
                [&](long long x, long long y) { return M3.get(x + y, x) ? 2 * x + y : inf; });
    b.add_table("o4", [&](long long x, long long y) { return M1.get(x, y - x) ? 0ll : inf; });
    expr_text = "(a o1 b) o4 (a o3 (c o2 (a o1 b)))";
    wmap = "a=j, b=i+j, c=i-j+k";
  }
  IdentityInstance inst;
  inst.s = std::move(b.s);
  inst.id = parse_identity(expr_text + " = _const", {"o1", "o2", "o3", "o4"});
  inst.family = "f" + std::to_string(family);
  inst.witness_map = wmap + "; element e encodes integer e-1-" + std::to_string(b.cn);
  return inst;
}

// --- square-free overlays ----------------------------------------------------

std::vector<BinaryMatrix> squarefree_matrices(long long n, int q) {
  // partition of differences i-j over {-n..n} via the 3-AP-free classes
  BehrendPartition part = behrend_partition(2 * n, q);
  std::vector<int> cls(2 * n + 1);
  std::vector<char> used(part.classes.size(), 0);
  for (long long d = 0; d <= 2 * n; ++d) {
    int c = behrend_class_of(part, d);
    if (c < 0) throw MagmaError(Err::InvalidSize, "difference escaped the partition");
    cls[d] = c;
    used[c] = 1;
  }
  std::vector<int> remap(part.classes.size(), -1);
  int nused = 0;
  for (size_t c = 0; c < used.size(); ++c)
    if (used[c]) remap[c] = nused++;
  std::vector<BinaryMatrix> out;
  for (int c = 0; c < nused; ++c) out.emplace_back((int)n, (int)n, 1, 1);
  for (long long i = 1; i <= n; ++i)
    for (long long j = 1; j <= n; ++j) out[remap[cls[i - j + n]]].set(i, j);
  return out;
}

size_t MonoSquareFamily::count() const {
  size_t c = overlays.size();
  return c * c * c * c;
}

BinaryMatrix MonoSquareFamily::instance(const std::array<int, 4>& ell) const {
  int n = (int)block;
  long long r0 = inputs[0].row0, c0 = inputs[0].col0;
  BinaryMatrix out(3 * n, 3 * n, r0, c0);
  // block grid: [[M1 & S, 0, M4 & S], [0,0,0], [M2 & S, 0, M3 & S]]
  struct Blk {
    int which;
    int bi, bj;
  };
  const Blk blocks[4] = {{0, 0, 0}, {3, 0, 2}, {1, 2, 0}, {2, 2, 2}};
  for (const auto& blk : blocks) {
    const BinaryMatrix& src = inputs[blk.which];
    const BinaryMatrix& ov = overlays[ell[blk.which]];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (src.get(r0 + i, c0 + j) && ov.get(ov.row0 + i, ov.col0 + j))
          out.set(r0 + (long long)blk.bi * n + i, c0 + (long long)blk.bj * n + j);
      }
  }
  return out;
}

std::array<int, 4> MonoSquareFamily::tuple_for_witness(const detect::CornerWitness& w) const {
  int n = (int)block;
  auto cls_of = [&](long long i, long long j) {
    // overlay index holding (i,j); overlays partition the window
    for (size_t c = 0; c < overlays.size(); ++c)
      if (overlays[c].get(overlays[c].row0 + (i - inputs[0].row0),
                          overlays[c].col0 + (j - inputs[0].col0)))
        return (int)c;
    return -1;
  };
  (void)n;
  return {cls_of(w.i, w.j), cls_of(w.i + w.k, w.j), cls_of(w.i + w.k, w.j + w.k),
          cls_of(w.i, w.j + w.k)};
}

MonoSquareFamily multi_to_mono_square(const std::array<BinaryMatrix, 4>& ms, int q) {
  for (int t = 1; t < 4; ++t)
    if (ms[t].rows != ms[0].rows || ms[t].cols != ms[0].cols || ms[t].row0 != ms[0].row0 ||
        ms[t].col0 != ms[0].col0)
      throw MagmaError(Err::ShapeMismatch, "matrices must share shape and offset");
  if (ms[0].rows != ms[0].cols) throw MagmaError(Err::ShapeMismatch, "matrices must be square");
  MonoSquareFamily fam;
  fam.inputs = ms;
  fam.block = ms[0].rows;
  fam.overlays = squarefree_matrices(ms[0].rows, q);
  // overlays are built over the 1-based grid; shift to the inputs' window
  for (auto& ov : fam.overlays) {
    ov.row0 = ms[0].row0;
    ov.col0 = ms[0].col0;
  }
  return fam;
}

// --- AP -> hyperclique -------------------------------------------------------

long long hyperclique_digit_base(long long n, int k) {
  long long q = 2;
  while (true) {
    long long pw = 1;
    bool enough = false;
    for (int i = 0; i < k; ++i) {
      pw *= q;
      if (pw > n) {
        enough = true;
        break;
      }
    }
    if (enough) return q;
    ++q;
  }
}

std::vector<long long> ruler_solution(long long a1, long long a2, int k, long long q) {
  // digit decomposition: a[l] = value of the l-th base-q digit (times q^l)
  auto dig = [&](long long v, int l) {
    long long pw = 1;
    for (int t = 0; t < l; ++t) pw *= q;
    return (v / pw % q) * pw;
  };
  std::vector<long long> x(k + 1, 0);  // 1-based
  long long km1 = k - 1;
  x[1] = -(k - 2) * dig(a1, 0) + km1 * dig(a2, 0) + km1 * dig(a2, 1);
  for (int j = 2; j <= k - 1; ++j) {
    x[j] = km1 * ((j - 3) * dig(a1, j - 1) - (j - 2) * dig(a2, j - 1) - (j - 1) * dig(a1, j) +
                  (long long)j * dig(a2, j));
  }
  x[k] = km1 * ((k - 3) * dig(a1, k - 1) - (k - 2) * dig(a2, k - 1)) - dig(a1, 0);
  return std::vector<long long>(x.begin() + 1, x.end());
}

detect::Hypergraph ap_to_hyperclique(const std::vector<IntSet>& as, const HypercliqueConfig& cfg) {
  int k = cfg.k;
  if (k < 4) throw MagmaError(Err::InvalidSize, "hyperclique reduction needs k >= 4");
  if ((int)as.size() != k) throw MagmaError(Err::ArityMismatch, "need exactly k sets");
  long long n = 0;
  for (const auto& a : as) n = std::max(n, a.universe_bound);
  long long q = hyperclique_digit_base(n, k);

  // X = all values the explicit digit-split solution can emit
  std::set<long long> xset;
  {
    auto powq = [&](int l) {
      long long pw = 1;
      for (int t = 0; t < l; ++t) pw *= q;
      return pw;
    };
    long long km1 = k - 1;
    // j = 1: digits d1 = a1[0], d2 = a2[0], d3 = a2[1]
    for (long long d1 = 0; d1 < q; ++d1)
      for (long long d2 = 0; d2 < q; ++d2)
        for (long long d3 = 0; d3 < q; ++d3)
          xset.insert(-(k - 2) * d1 + km1 * d2 + km1 * d3 * q);
    // middle j: digits at positions j-1 and j
    for (int j = 2; j <= k - 1; ++j) {
      long long pj1 = powq(j - 1), pj = powq(j);
      std::set<long long> lo, hi;
      for (long long d1 = 0; d1 < q; ++d1)
        for (long long d2 = 0; d2 < q; ++d2) {
          lo.insert(km1 * ((j - 3) * d1 - (j - 2) * d2) * pj1);
          hi.insert(km1 * (-(long long)(j - 1) * d1 + (long long)j * d2) * pj);
        }
      for (long long a : lo)
        for (long long b : hi) xset.insert(a + b);
    }
    // j = k: digits at position k-1 and position 0
    {
      long long pk1 = powq(k - 1);
      for (long long d1 = 0; d1 < q; ++d1)
        for (long long d2 = 0; d2 < q; ++d2)
          for (long long d0 = 0; d0 < q; ++d0)
            xset.insert(km1 * ((k - 3) * d1 - (k - 2) * d2) * pk1 - d0);
    }
  }
  std::vector<long long> xs(xset.begin(), xset.end());
  std::unordered_map<long long, int> xindex;
  xindex.reserve(xs.size() * 2);
  for (size_t i = 0; i < xs.size(); ++i) xindex.emplace(xs[i], (int)i);

  detect::Hypergraph h;
  h.k = k;
  h.parts.assign(k, xs);
  h.edges.resize(k);

  // edge omitting part i: sum over j != i of (i-j) * x_j must equal (k-1) * a
  // for some a in A_i; enumerate all but the last coordinate and solve for it
  long long km1 = k - 1;
  for (int omit = 0; omit < k; ++omit) {
    std::vector<int> coords;  // part indices present in the edge, ascending
    for (int j = 0; j < k; ++j)
      if (j != omit) coords.push_back(j);
    size_t solve_pos = coords.size() - 1;
    long long solve_coef = (long long)(omit - coords[solve_pos]);
    size_t free_count = coords.size() - 1;

    std::vector<size_t> od(free_count, 0);
    bool done = false;
    while (!done) {
      long long sum = 0;
      for (size_t t = 0; t < free_count; ++t)
        sum += (long long)(omit - coords[t]) * xs[od[t]];
      for (long long a : as[omit].members) {
        long long rhs = km1 * a - sum;
        if (rhs % solve_coef != 0) continue;
        auto it = xindex.find(rhs / solve_coef);
        if (it == xindex.end()) continue;
        std::vector<int> e(coords.size());
        for (size_t t = 0; t < free_count; ++t) e[t] = (int)od[t];
        e[solve_pos] = it->second;
        h.edges[omit].push_back(std::move(e));
      }
      if (free_count == 0) break;
      size_t d = free_count - 1;
      while (true) {
        if (++od[d] < xs.size()) break;
        od[d] = 0;
        if (d == 0) {
          done = true;
          break;
        }
        --d;
      }
    }
    std::sort(h.edges[omit].begin(), h.edges[omit].end());
    h.edges[omit].erase(std::unique(h.edges[omit].begin(), h.edges[omit].end()),
                        h.edges[omit].end());
  }
  return h;
}

std::array<std::vector<long long>, 4> fourap_to_foursum(const std::array<IntSet, 4>& as) {
  long long n = 1;
  for (const auto& a : as) n = std::max(n, a.universe_bound);
  long long K = 10 * n;  // coordinate embedding base
  std::array<std::vector<long long>, 4> out;
  for (long long a : as[0].members) out[0].push_back(a + 2 * a * K);
  for (long long a : as[1].members) out[1].push_back(-2 * a + -3 * a * K);
  for (long long a : as[2].members) out[2].push_back(a);
  for (long long a : as[3].members) out[3].push_back(a * K);
  return out;
}

// --- subexpression embedding -------------------------------------------------

std::pair<Structure, ExprPtr> subexpression_embedding(const Structure& s, const ExprPtr& f) {
  ElementId inf = s.constant("inf");
  for (const auto& op : expr_ops(f)) s.table(op);
  auto tags = subexpressions(f);
  int nt = (int)tags.size();
  int n = s.n;

  Structure out;
  out.n = n * nt + 1;
  out.set_constant("inf", 0);
  auto enc = [&](int x, int tag) { return (ElementId)(1 + tag * n + x); };

  for (const auto& [name, table] : s.ops) {
    // tag composition: which subexpression is Node(op, t1, t2)?
    std::vector<int> comp((size_t)nt * nt, -1);
    for (int t1 = 0; t1 < nt; ++t1)
      for (int t2 = 0; t2 < nt; ++t2) {
        ExprPtr combined = Expr::node(name, tags[t1], tags[t2]);
        for (int t3 = 0; t3 < nt; ++t3)
          if (expr_equal(combined, tags[t3])) {
            comp[(size_t)t1 * nt + t2] = t3;
            break;
          }
      }
    OpTable t(out.n);
    for (int i = 0; i < out.n; ++i) t.at(0, i) = 0, t.at(i, 0) = 0;
    for (int t1 = 0; t1 < nt; ++t1)
      for (int x = 0; x < n; ++x) {
        ElementId xe = enc(x, t1);
        for (int t2 = 0; t2 < nt; ++t2) {
          int t3 = comp[(size_t)t1 * nt + t2];
          for (int y = 0; y < n; ++y) {
            ElementId ye = enc(y, t2);
            ElementId r = table.at(x, y);
            t.at(xe, ye) = (t3 >= 0 && r != inf) ? enc(r, t3) : 0;
          }
        }
      }
    out.add_op(name, std::move(t));
  }
  return {std::move(out), f};
}

}  // namespace magma::reduce

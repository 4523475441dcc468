#include "magma/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace magma::algebra {

using fp::addmod;
using fp::mulmod;

std::optional<ElementId> find_identity_element(const Structure& s, const std::string& op) {
  const OpTable& t = s.table(op);
  for (int e = 0; e < s.n; ++e) {
    bool ok = true;
    for (int x = 0; x < s.n && ok; ++x) ok = t.at(e, x) == x && t.at(x, e) == x;
    if (ok) return (ElementId)e;
  }
  return std::nullopt;
}

std::vector<ElementId> closure(const Structure& s, const std::string& op,
                               const std::vector<ElementId>& gens) {
  const OpTable& t = s.table(op);
  std::vector<char> in(s.n, 0);
  std::vector<ElementId> members;
  std::vector<ElementId> queue;
  for (ElementId g : gens) {
    if (g < 0 || g >= s.n) throw MagmaError(Err::IndexOutOfRange, "generator out of range");
    if (!in[g]) {
      in[g] = 1;
      members.push_back(g);
      queue.push_back(g);
    }
  }
  while (!queue.empty()) {
    ElementId w = queue.back();
    queue.pop_back();
    // products with every current member, both orders
    size_t cur = members.size();
    for (size_t i = 0; i < cur; ++i) {
      ElementId m = members[i];
      for (ElementId prod : {t.at(w, m), t.at(m, w)}) {
        if (!in[prod]) {
          in[prod] = 1;
          members.push_back(prod);
          queue.push_back(prod);
        }
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

bool light_associativity(const Structure& s, const std::string& op,
                         const std::vector<ElementId>& generators) {
  if ((int)closure(s, op, generators).size() != s.n)
    throw MagmaError(Err::NotGenerating, "generators do not generate the whole set");
  const OpTable& t = s.table(op);
  for (ElementId b : generators) {
    for (int a = 0; a < s.n; ++a) {
      ElementId ab = t.at(a, b);
      for (int c = 0; c < s.n; ++c) {
        if (t.at(a, t.at(b, c)) != t.at(ab, c)) return false;
      }
    }
  }
  return true;
}

std::vector<ElementId> greedy_generators(const Structure& s, const std::string& op) {
  std::vector<ElementId> gens;
  std::vector<char> in(s.n, 0);
  int covered = 0;
  while (covered < s.n) {
    ElementId next = -1;
    for (int x = 0; x < s.n; ++x)
      if (!in[x]) {
        next = x;
        break;
      }
    gens.push_back(next);
    auto cl = closure(s, op, gens);
    covered = (int)cl.size();
    std::fill(in.begin(), in.end(), 0);
    for (ElementId x : cl) in[x] = 1;
  }
  return gens;
}

Verdict rs_associativity_test(const Structure& s, const std::string& op, const FieldConfig& cfg) {
  const OpTable& t = s.table(op);
  int n = s.n;
  uint64_t p = cfg.p;
  fp::Rng rng(cfg.seed);
  auto formal_product = [&](const std::vector<uint64_t>& u, const std::vector<uint64_t>& v) {
    std::vector<uint64_t> out(n, 0);
    for (int a = 0; a < n; ++a) {
      if (!u[a]) continue;
      for (int b = 0; b < n; ++b) {
        ElementId k = t.at(a, b);
        out[k] = addmod(out[k], mulmod(u[a], v[b], p), p);
      }
    }
    return out;
  };
  int trials = std::max(1, cfg.trials);
  for (int trial = 0; trial < trials; ++trial) {
    auto r = fp::random_vector(rng, n, p);
    auto sv = fp::random_vector(rng, n, p);
    auto tv = fp::random_vector(rng, n, p);
    auto left = formal_product(formal_product(r, sv), tv);
    auto right = formal_product(r, formal_product(sv, tv));
    if (left != right) return {false, 0.0, std::nullopt};
  }
  return {true, std::pow(3.0 / (double)p, trials), std::nullopt};
}

GroupReport analyze_group(const Structure& s, const std::string& op, const FieldConfig& cfg,
                          AssocMethod method) {
  const OpTable& t = s.table(op);
  GroupReport rep;
  rep.identity_elem = find_identity_element(s, op);
  if (!rep.identity_elem) return rep;
  ElementId e = *rep.identity_elem;
  rep.inverses_ok = true;
  for (int x = 0; x < s.n && rep.inverses_ok; ++x) {
    bool has = false;
    for (int y = 0; y < s.n; ++y)
      if (t.at(x, y) == e && t.at(y, x) == e) {
        has = true;
        break;
      }
    rep.inverses_ok = has;
  }
  rep.abelian = true;
  for (int x = 0; x < s.n && rep.abelian; ++x)
    for (int y = x + 1; y < s.n; ++y)
      if (t.at(x, y) != t.at(y, x)) {
        rep.abelian = false;
        break;
      }
  if (method == AssocMethod::Light) {
    rep.associative = light_associativity(s, op, greedy_generators(s, op));
    rep.assoc_method = "light";
  } else {
    rep.associative = rs_associativity_test(s, op, cfg).holds;
    rep.assoc_method = "randomized";
  }
  return rep;
}

namespace {

// Dense local view of a (sub)group: label maps local index -> caller index.
struct DenseGroup {
  int n = 0;
  std::vector<int> label;
  std::vector<int> tab;  // n*n, local indices
  int id = -1;           // local identity

  int op(int i, int j) const { return tab[(size_t)i * n + j]; }
};

[[noreturn]] void not_group(const std::string& why) {
  throw MagmaError(Err::NotAGroup, "not a group: " + why);
}

int order_of(const DenseGroup& g, int x) {
  int cur = x, ord = 1;
  while (cur != g.id) {
    cur = g.op(cur, x);
    if (++ord > g.n) not_group("element order exceeds group size");
  }
  return ord;
}

int find_dense_identity(const DenseGroup& g) {
  for (int e = 0; e < g.n; ++e) {
    bool ok = true;
    for (int x = 0; x < g.n && ok; ++x) ok = g.op(e, x) == x && g.op(x, e) == x;
    if (ok) return e;
  }
  not_group("no identity element");
}

int pow_dense(const DenseGroup& g, int x, long long e) {
  int acc = g.id;
  int base = x;
  while (e > 0) {
    if (e & 1) acc = g.op(acc, base);
    base = g.op(base, base);
    e >>= 1;
  }
  return acc;
}

// Basis of an abelian p-group: peel off a maximal-order cyclic factor, solve
// the quotient recursively, then lift the quotient generators so their
// p-power lands on the identity instead of inside the peeled factor.
std::vector<std::pair<int, int>> p_group_basis(const DenseGroup& g, long long prime) {
  if (g.n == 1) return {};
  int best = -1, best_ord = 0;
  for (int x = 0; x < g.n; ++x) {
    int o = order_of(g, x);
    if (o > best_ord) best = x, best_ord = o;
  }
  // cyclic subgroup and discrete logs within it
  std::vector<int> dlog(g.n, -1);
  {
    int cur = g.id, t = 0;
    do {
      if (dlog[cur] != -1) not_group("cyclic subgroup revisits an element");
      dlog[cur] = t++;
      cur = g.op(cur, best);
    } while (cur != g.id);
    if (t != best_ord) not_group("inconsistent element order");
  }
  if (best_ord == g.n) return {{best, best_ord}};

  // quotient by the cyclic subgroup: representative = least local index in
  // the coset
  std::vector<int> rep(g.n, -1);
  for (int x = 0; x < g.n; ++x) {
    if (rep[x] != -1) continue;
    int mn = x, cur = x;
    std::vector<int> coset;
    do {
      coset.push_back(cur);
      mn = std::min(mn, cur);
      cur = g.op(cur, best);
    } while (cur != x);
    if ((int)coset.size() != best_ord) not_group("coset size mismatch");
    for (int y : coset) rep[y] = mn;
  }
  std::vector<int> reps;
  std::vector<int> local_of(g.n, -1);
  for (int x = 0; x < g.n; ++x)
    if (rep[x] == x) {
      local_of[x] = (int)reps.size();
      reps.push_back(x);
    }
  DenseGroup q;
  q.n = (int)reps.size();
  q.label = reps;
  q.tab.resize((size_t)q.n * q.n);
  for (int i = 0; i < q.n; ++i)
    for (int j = 0; j < q.n; ++j) q.tab[(size_t)i * q.n + j] = local_of[rep[g.op(reps[i], reps[j])]];
  q.id = local_of[rep[g.id]];

  auto qbasis = p_group_basis(q, prime);
  std::vector<std::pair<int, int>> out;
  out.push_back({best, best_ord});
  for (auto [qgen, qord] : qbasis) {
    int h = q.label[qgen];  // lift: any representative of the coset
    int power = pow_dense(g, h, qord);
    int tt = dlog[power];
    if (tt < 0) not_group("lifted power escapes the cyclic subgroup");
    if (tt % qord != 0) not_group("lift adjustment is not divisible");
    long long u = tt / qord;
    // h' = h * best^{-u}
    long long inv_exp = (best_ord - (u % best_ord)) % best_ord;
    int adjusted = g.op(h, pow_dense(g, best, inv_exp));
    if (pow_dense(g, adjusted, qord) != g.id) not_group("adjusted generator has wrong order");
    out.push_back({adjusted, qord});
  }
  return out;
}

// Restriction of a DenseGroup to a subset of its local indices.
DenseGroup dense_view_local(const DenseGroup& g, const std::vector<ElementId>& subset) {
  DenseGroup h;
  h.n = (int)subset.size();
  h.label.assign(subset.begin(), subset.end());
  std::vector<int> local(g.n, -1);
  for (int i = 0; i < h.n; ++i) local[subset[i]] = i;
  h.tab.resize((size_t)h.n * h.n);
  for (int i = 0; i < h.n; ++i)
    for (int j = 0; j < h.n; ++j) {
      int r = g.op(subset[i], subset[j]);
      if (local[r] < 0) not_group("primary component not closed");
      h.tab[(size_t)i * h.n + j] = local[r];
    }
  h.id = find_dense_identity(h);
  return h;
}

DenseGroup dense_view(const Structure& s, const std::string& op,
                      const std::vector<ElementId>& elems) {
  const OpTable& t = s.table(op);
  DenseGroup g;
  g.n = (int)elems.size();
  g.label.assign(elems.begin(), elems.end());
  std::vector<int> local(s.n, -1);
  for (int i = 0; i < g.n; ++i) local[elems[i]] = i;
  g.tab.resize((size_t)g.n * g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      ElementId r = t.at(elems[i], elems[j]);
      if (local[r] < 0) not_group("subset not closed under the operation");
      g.tab[(size_t)i * g.n + j] = local[r];
    }
  g.id = find_dense_identity(g);
  return g;
}

std::vector<CyclicFactor> decompose_view(const Structure& s, const std::string& op,
                                         const std::vector<ElementId>& elems) {
  DenseGroup g = dense_view(s, op, elems);
  // commutativity is a precondition; verify to fail fast on bad input
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (g.op(i, j) != g.op(j, i)) not_group("operation not commutative");

  std::vector<int> ord(g.n);
  for (int x = 0; x < g.n; ++x) ord[x] = order_of(g, x);

  // primary decomposition: one p-group per prime dividing n
  long long n = g.n;
  std::vector<long long> primes;
  long long m = n;
  for (long long p = 2; p * p <= m; ++p)
    if (m % p == 0) {
      primes.push_back(p);
      while (m % p == 0) m /= p;
    }
  if (m > 1) primes.push_back(m);

  std::vector<CyclicFactor> out;
  long long prod = 1;
  for (long long p : primes) {
    std::vector<ElementId> part;
    for (int x = 0; x < g.n; ++x) {
      int o = ord[x];
      while (o % p == 0) o /= (int)p;
      if (o == 1) part.push_back((ElementId)x);
    }
    DenseGroup pg = dense_view_local(g, part);
    for (auto [gen, o] : p_group_basis(pg, p)) {
      out.push_back({(ElementId)g.label[pg.label[gen]], o});
      prod *= o;
    }
  }
  if (g.n == 1) return out;
  if (prod != n) not_group("cyclic factor orders do not multiply to n");
  return out;
}

}  // namespace

std::vector<CyclicFactor> abelian_decomposition(const Structure& s, const std::string& op) {
  std::vector<ElementId> all(s.n);
  std::iota(all.begin(), all.end(), 0);
  return decompose_view(s, op, all);
}

namespace {

std::vector<CyclicFactor> decompose_elems(const Structure& s, const std::string& op,
                                          const std::vector<ElementId>& elems) {
  return decompose_view(s, op, elems);
}

// Split one factor of order m into "virtual digit" positions.
struct DigitPos {
  ElementId unit;  // group element advancing this digit by one
  int domain;      // number of digit values
};

Basis basis_from_factors(const Structure& s, const std::string& op,
                         const std::vector<CyclicFactor>& factors, int n) {
  const OpTable& t = s.table(op);
  // recover the identity as g^m for the first factor
  ElementId g0 = factors.at(0).generator;
  ElementId ident = g0;
  for (int k = 1; k < factors[0].order; ++k) ident = t.at(ident, g0);

  std::vector<DigitPos> positions;
  for (const auto& f : factors) {
    if (f.order <= 3) {
      positions.push_back({f.generator, f.order});
    } else {
      int r = (int)std::ceil(std::sqrt((double)f.order));
      ElementId hi_unit = ident;
      for (int k = 0; k < r; ++k) hi_unit = t.at(hi_unit, f.generator);
      positions.push_back({f.generator, r});                      // low digit
      positions.push_back({hi_unit, (f.order + r - 1) / r});      // high digit
    }
  }

  // partition positions into two sets with near-minimal max digit-product
  int kpos = (int)positions.size();
  std::vector<int> side(kpos, 0);
  if (kpos <= 20) {
    double best = 1e300;
    for (unsigned mask = 0; mask < (1u << kpos); ++mask) {
      double p0 = 1, p1 = 1;
      for (int i = 0; i < kpos; ++i) (mask >> i & 1 ? p1 : p0) *= positions[i].domain;
      double v = std::max(p0, p1);
      if (v < best) {
        best = v;
        for (int i = 0; i < kpos; ++i) side[i] = mask >> i & 1;
      }
    }
  } else {
    std::vector<int> order(kpos);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return positions[a].domain > positions[b].domain; });
    double p0 = 1, p1 = 1;
    for (int i : order) {
      if (p0 <= p1) {
        side[i] = 0;
        p0 *= positions[i].domain;
      } else {
        side[i] = 1;
        p1 *= positions[i].domain;
      }
    }
  }

  // enumerate all elements supported on one side
  auto span_side = [&](int which) {
    std::vector<ElementId> out;
    out.push_back(ident);
    for (int i = 0; i < kpos; ++i) {
      if (side[i] != which) continue;
      std::vector<ElementId> next;
      next.reserve(out.size() * positions[i].domain);
      for (ElementId base : out) {
        ElementId cur = base;
        next.push_back(cur);
        for (int d = 1; d < positions[i].domain; ++d) {
          cur = t.at(cur, positions[i].unit);
          next.push_back(cur);
        }
      }
      out = std::move(next);
    }
    return out;
  };

  Basis b;
  b.op = op;
  std::vector<char> seen(s.n, 0);
  for (int which : {0, 1}) {
    for (ElementId x : span_side(which)) {
      if (!seen[x]) {
        seen[x] = 1;
        b.elements.push_back(x);
      }
    }
  }
  std::sort(b.elements.begin(), b.elements.end());
  (void)n;
  return b;
}

}  // namespace

Basis abelian_basis(const Structure& s, const std::string& op) {
  auto factors = abelian_decomposition(s, op);
  if (factors.empty()) return {{(ElementId)0}, op};  // n == 1
  return basis_from_factors(s, op, factors, s.n);
}

Basis abelian_basis_on(const Structure& s, const std::string& op,
                       const std::vector<ElementId>& elems) {
  auto factors = decompose_elems(s, op, elems);
  if (factors.empty()) return {{elems.at(0)}, op};
  return basis_from_factors(s, op, factors, (int)elems.size());
}

bool basis_covers(const Structure& s, const Basis& b, const std::vector<ElementId>& universe) {
  const OpTable& t = s.table(b.op);
  std::vector<char> hit(s.n, 0);
  for (ElementId x : b.elements)
    for (ElementId y : b.elements) hit[t.at(x, y)] = 1;
  for (ElementId u : universe)
    if (!hit[u]) return false;
  return true;
}

namespace {

struct AbelianGroupCheck {
  bool ok;
  std::string fail;
  ElementId zero;
};

AbelianGroupCheck check_abelian_group(const Structure& s, const std::string& op) {
  const OpTable& t = s.table(op);
  auto e = find_identity_element(s, op);
  if (!e) return {false, "'" + op + "' has no identity element", 0};
  for (int x = 0; x < s.n; ++x)
    for (int y = x + 1; y < s.n; ++y)
      if (t.at(x, y) != t.at(y, x)) return {false, "'" + op + "' is not commutative", 0};
  for (int x = 0; x < s.n; ++x) {
    bool has = false;
    for (int y = 0; y < s.n; ++y)
      if (t.at(x, y) == *e) {
        has = true;
        break;
      }
    if (!has) return {false, "'" + op + "' lacks inverses", 0};
  }
  if (!light_associativity(s, op, greedy_generators(s, op)))
    return {false, "'" + op + "' is not associative", 0};
  return {true, "", *e};
}

}  // namespace

CheckResult field_verify(const Structure& s) {
  const OpTable& add = s.table("+");
  const OpTable& mul = s.table("*");
  int n = s.n;
  auto reject = [](const std::string& why) { return CheckResult{false, why, 0.0, std::nullopt}; };
  if (n < 2) return reject("a field needs at least two elements");

  auto ab = check_abelian_group(s, "+");
  if (!ab.ok) return reject(ab.fail);
  ElementId zero = ab.zero;

  // zero absorbs multiplication
  for (int x = 0; x < n; ++x)
    if (mul.at(zero, x) != zero || mul.at(x, zero) != zero)
      return reject("zero does not absorb '*'");

  // nonzero elements closed under '*'
  for (int x = 0; x < n; ++x) {
    if (x == zero) continue;
    for (int y = 0; y < n; ++y) {
      if (y == zero) continue;
      if (mul.at(x, y) == zero) return reject("zero divisors under '*'");
    }
  }
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (mul.at(x, y) != mul.at(y, x)) return reject("'*' is not commutative");

  std::vector<ElementId> units;
  units.reserve(n - 1);
  for (int x = 0; x < n; ++x)
    if (x != zero) units.push_back((ElementId)x);

  // multiplicative identity on the nonzero elements
  ElementId one = -1;
  for (ElementId e : units) {
    bool ok = true;
    for (ElementId x : units)
      if (mul.at(e, x) != x) {
        ok = false;
        break;
      }
    if (ok) {
      one = e;
      break;
    }
  }
  if (one < 0) return reject("no multiplicative identity");
  for (ElementId x : units) {
    bool has = false;
    for (ElementId y : units)
      if (mul.at(x, y) == one) {
        has = true;
        break;
      }
    if (!has) return reject("missing multiplicative inverse");
  }

  // Light's check on the multiplicative group
  {
    // greedy generators within the unit subset
    std::vector<ElementId> gens;
    std::vector<char> in(n, 0);
    in[zero] = 1;
    int covered = 1;
    while (covered < n) {
      ElementId nxt = -1;
      for (ElementId x : units)
        if (!in[x]) {
          nxt = x;
          break;
        }
      gens.push_back(nxt);
      // closure within units
      std::vector<char> cl(n, 0);
      std::vector<ElementId> q;
      for (ElementId g : gens)
        if (!cl[g]) {
          cl[g] = 1;
          q.push_back(g);
        }
      std::vector<ElementId> mem = q;
      while (!q.empty()) {
        ElementId w = q.back();
        q.pop_back();
        size_t cur = mem.size();
        for (size_t i = 0; i < cur; ++i) {
          for (ElementId pr : {mul.at(w, mem[i]), mul.at(mem[i], w)}) {
            if (!cl[pr]) {
              cl[pr] = 1;
              mem.push_back(pr);
              q.push_back(pr);
            }
          }
        }
      }
      covered = 1;  // zero
      std::fill(in.begin(), in.end(), 0);
      in[zero] = 1;
      for (ElementId x : mem) {
        if (!in[x]) {
          in[x] = 1;
          ++covered;
        }
      }
    }
    for (ElementId b : gens) {
      for (ElementId a : units) {
        ElementId abv = mul.at(a, b);
        for (ElementId c : units)
          if (mul.at(a, mul.at(b, c)) != mul.at(abv, c)) return reject("'*' is not associative");
      }
    }
  }

  // distributivity with a zero coordinate
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (mul.at(zero, add.at(u, v)) != add.at(mul.at(zero, u), mul.at(zero, v)))
        return reject("distributivity fails with a zero factor");
      if (mul.at(u, add.at(zero, v)) != add.at(mul.at(u, zero), mul.at(u, v)))
        return reject("distributivity fails with a zero summand");
      if (mul.at(u, add.at(v, zero)) != add.at(mul.at(u, v), mul.at(u, zero)))
        return reject("distributivity fails with a zero summand");
    }

  Basis sa, sm;
  try {
    sa = abelian_basis(s, "+");
    sm = abelian_basis_on(s, "*", units);
  } catch (const MagmaError&) {
    return reject("basis construction failed on a non-group");
  }

  // x*(y+z) == x*y + x*z for x in the multiplicative basis, y in the
  // additive basis, z anywhere; right distributivity follows from
  // commutativity of '*'.
  for (ElementId x : sm.elements)
    for (ElementId y : sa.elements)
      for (int z = 0; z < n; ++z)
        if (mul.at(x, add.at(y, z)) != add.at(mul.at(x, y), mul.at(x, z)))
          return reject("distributivity fails");

  CheckResult r;
  r.ok = true;
  r.unity = one;
  return r;
}

CheckResult ring_verify(const Structure& s, const FieldConfig& cfg, bool require_unital) {
  const OpTable& add = s.table("+");
  const OpTable& mul = s.table("*");
  int n = s.n;
  auto reject = [](const std::string& why) { return CheckResult{false, why, 0.0, std::nullopt}; };

  auto ab = check_abelian_group(s, "+");
  if (!ab.ok) return reject(ab.fail);

  Verdict assoc = rs_associativity_test(s, "*", cfg);
  if (!assoc.holds) return reject("'*' is not associative");

  Basis basis;
  try {
    basis = abelian_basis(s, "+");
  } catch (const MagmaError&) {
    return reject("additive basis construction failed");
  }
  const auto& B = basis.elements;

  // four restricted distributivity laws over the additive basis
  for (ElementId a : B)
    for (ElementId b : B)
      for (int c = 0; c < n; ++c) {
        if (mul.at(a, add.at(b, c)) != add.at(mul.at(a, b), mul.at(a, c)))
          return reject("left distributivity fails");
        if (mul.at(add.at(b, c), a) != add.at(mul.at(b, a), mul.at(c, a)))
          return reject("right distributivity fails");
      }
  for (ElementId b : B)
    for (ElementId c : B)
      for (int a = 0; a < n; ++a) {
        if (mul.at(a, add.at(b, c)) != add.at(mul.at(a, b), mul.at(a, c)))
          return reject("left distributivity fails");
        if (mul.at(add.at(b, c), a) != add.at(mul.at(b, a), mul.at(c, a)))
          return reject("right distributivity fails");
      }

  CheckResult r;
  r.ok = true;
  r.err_bound = assoc.err_bound;
  r.unity = find_identity_element(s, "*");
  if (require_unital && !r.unity) return reject("no multiplicative identity");
  return r;
}

}  // namespace magma::algebra

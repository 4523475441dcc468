#include "magma/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace magma {

using fp::addmod;
using fp::mulmod;
using fp::submod;

namespace {

int compile_rec(const Structure& s, const ExprPtr& e, CompiledExpr& out) {
  if (e->leaf_node) return (int)e->v;
  int a = compile_rec(s, e->l, out);
  int b = compile_rec(s, e->r, out);
  const OpTable& t = s.table(e->op);
  out.prog.push_back({t.entries.data(), t.n, a, b});
  return 2 + (int)out.prog.size();
}

}  // namespace

CompiledExpr compile_expr(const Structure& s, const ExprPtr& e) {
  if (tree_size(e) > 60) throw MagmaError(Err::InvalidSize, "expression too large");
  CompiledExpr c;
  c.out_reg = compile_rec(s, e, c);
  return c;
}

ElementId eval_expr(const Structure& s, const ExprPtr& e, ElementId a, ElementId b, ElementId c) {
  if (e->leaf_node) {
    switch (e->v) {
      case Var::A: return a;
      case Var::B: return b;
      case Var::C: return c;
    }
  }
  ElementId l = eval_expr(s, e->l, a, b, c);
  ElementId r = eval_expr(s, e->r, a, b, c);
  return s.table(e->op).at(l, r);
}

namespace {

// Shared sweep for both brute-force variants. cmp(a,b,c) returns true when
// the triple satisfies the identity. The witness is the exact lexicographic
// minimum; a shared atomic bound lets threads skip blocks right of it.
template <typename Cmp>
Verdict brute_sweep(int n, bool parallel, Cmp&& cmp) {
  const long long none = (long long)n * n * n;
  std::atomic<long long> best(none);
  long long total = (long long)n * n;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
#endif
  for (long long ab = 0; ab < total; ++ab) {
    if (ab * n >= best.load(std::memory_order_relaxed)) continue;
    int a = (int)(ab / n), b = (int)(ab % n);
    for (int c = 0; c < n; ++c) {
      if (!cmp(a, b, c)) {
        long long packed = ab * n + c;
        long long prev = best.load(std::memory_order_relaxed);
        while (packed < prev && !best.compare_exchange_weak(prev, packed)) {
        }
        break;
      }
    }
  }
  long long found = best.load();
  if (found == none) return {true, 0.0, std::nullopt};
  int a = (int)(found / ((long long)n * n));
  int b = (int)(found / n % n);
  int c = (int)(found % n);
  return {false, 0.0, Witness{a, b, c}};
}

Verdict brute_force_impl(const Structure& s, const Identity& id, bool parallel) {
  for (const auto& op : identity_ops(id)) s.table(op);  // UnknownOperation up front
  CompiledExpr f = compile_expr(s, id.lhs);
  if (id.constant_term) {
    ElementId ref = f.eval(0, 0, 0);
    return brute_sweep(s.n, parallel, [&](int a, int b, int c) { return f.eval(a, b, c) == ref; });
  }
  CompiledExpr g = compile_expr(s, id.rhs);
  return brute_sweep(s.n, parallel,
                     [&](int a, int b, int c) { return f.eval(a, b, c) == g.eval(a, b, c); });
}

// Pattern flattened against a concrete structure; registers 0,1 hold the
// two hole values.
struct CompiledPattern {
  struct Instr {
    const ElementId* table;
    int n;
    int s1, s2;
  };
  std::vector<Instr> prog;
  int out_reg = 0;

  ElementId eval(ElementId h0, ElementId h1) const {
    ElementId regs[64];
    regs[0] = h0;
    regs[1] = h1;
    int next = 2;
    for (const auto& in : prog) regs[next++] = in.table[(size_t)regs[in.s1] * in.n + regs[in.s2]];
    return regs[out_reg];
  }
};

int compile_pat_rec(const Structure& s, const Pattern& p, CompiledPattern& out) {
  if (p.hole >= 0) return p.hole;
  int a = compile_pat_rec(s, *p.l, out);
  int b = compile_pat_rec(s, *p.r, out);
  const OpTable& t = s.table(p.op);
  out.prog.push_back({t.entries.data(), t.n, a, b});
  return 1 + (int)out.prog.size();
}

CompiledPattern compile_pattern(const Structure& s, const Pattern& p) {
  CompiledPattern c;
  c.out_reg = compile_pat_rec(s, p, c);
  return c;
}

}  // namespace

Verdict brute_force_verify(const Structure& s, const Identity& id) {
  return brute_force_impl(s, id, true);
}

Verdict brute_force_verify_serial(const Structure& s, const Identity& id) {
  return brute_force_impl(s, id, false);
}

namespace {

const std::vector<uint64_t>& vec_for(const WeightVectors& wv, Var v) {
  switch (v) {
    case Var::A: return wv.x;
    case Var::B: return wv.y;
    default: return wv.z;
  }
}

// Evaluate a two-variable expression on concrete elements of the two
// non-outer variables.
ElementId eval_pair_expr(const CompiledExpr& ce, Var p, Var q, ElementId pe, ElementId qe) {
  ElementId in[3] = {0, 0, 0};
  in[(int)p] = pe;
  in[(int)q] = qe;
  return ce.eval(in[0], in[1], in[2]);
}

uint64_t quadratic_route(const Structure& s, const QuadMatch& m, const WeightVectors& wv,
                         uint64_t p) {
  int n = s.n;
  Var pv = (Var)(((int)m.outer + 1) % 3);
  Var qv = (Var)(((int)m.outer + 2) % 3);
  if ((int)pv > (int)qv) std::swap(pv, qv);
  const auto& wp = vec_for(wv, pv);
  const auto& wq = vec_for(wv, qv);
  const auto& wo = vec_for(wv, m.outer);

  CompiledExpr inner = compile_expr(s, m.inner);
  CompiledPattern shape = compile_pattern(s, m.shape);
  std::vector<uint64_t> E(n, 0);
  for (int pe = 0; pe < n; ++pe) {
    uint64_t xp = wp[pe];
    for (int qe = 0; qe < n; ++qe) {
      ElementId t = eval_pair_expr(inner, pv, qv, pe, qe);
      E[t] = addmod(E[t], mulmod(xp, wq[qe], p), p);
    }
  }
  uint64_t acc = 0;
  for (int t = 0; t < n; ++t) {
    if (!E[t]) continue;
    uint64_t row = 0;
    for (int v = 0; v < n; ++v) {
      ElementId out = shape.eval((ElementId)t, (ElementId)v);
      row = addmod(row, mulmod(wo[v], wv.w[out], p), p);
    }
    acc = addmod(acc, mulmod(E[t], row, p), p);
  }
  return acc;
}

uint64_t matrix_route(const Structure& s, const MatrixMatch& m, const WeightVectors& wv,
                      const FieldConfig& cfg) {
  int n = s.n;
  uint64_t p = cfg.p;
  Var pv = (Var)(((int)m.outer + 1) % 3);
  Var qv = (Var)(((int)m.outer + 2) % 3);
  if ((int)pv > (int)qv) std::swap(pv, qv);
  const auto& wp = vec_for(wv, pv);
  const auto& wq = vec_for(wv, qv);
  const auto& wo = vec_for(wv, m.outer);

  CompiledExpr ch = compile_expr(s, m.h);
  CompiledExpr cg = compile_expr(s, m.g);
  CompiledPattern ishape = compile_pattern(s, m.inner_shape);
  CompiledPattern jshape = compile_pattern(s, m.outer_shape);

  // A[h][g] = sum of wp_p wq_q over pairs with H(p,q)=h, G(p,q)=g
  fp::Matrix A(n, n);
  for (int pe = 0; pe < n; ++pe) {
    uint64_t xp = wp[pe];
    for (int qe = 0; qe < n; ++qe) {
      ElementId h = eval_pair_expr(ch, pv, qv, pe, qe);
      ElementId g = eval_pair_expr(cg, pv, qv, pe, qe);
      A.at(h, g) = addmod(A.at(h, g), mulmod(xp, wq[qe], p), p);
    }
  }
  // B[g][i] = w_{J(i,g)}
  fp::Matrix B(n, n);
  for (int g = 0; g < n; ++g)
    for (int i = 0; i < n; ++i) B.at(g, i) = wv.w[jshape.eval((ElementId)i, (ElementId)g)];
  // C[i][h] = sum of wo_v over v with I(h,v)=i
  fp::Matrix C(n, n);
  for (int h = 0; h < n; ++h)
    for (int v = 0; v < n; ++v) {
      ElementId i = ishape.eval((ElementId)h, (ElementId)v);
      C.at(i, h) = addmod(C.at(i, h), wo[v], p);
    }

  fp::Matrix AB = fp::mm(A, B, p, cfg.mm);
  uint64_t acc = 0;
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i) acc = addmod(acc, mulmod(AB.at(h, i), C.at(i, h), p), p);
  return acc;
}

uint64_t cubic_route(const Structure& s, const ExprPtr& f, const WeightVectors& wv, uint64_t p) {
  int n = s.n;
  CompiledExpr cf = compile_expr(s, f);
  uint64_t acc = 0;
#ifdef _OPENMP
#pragma omp parallel
#endif
  {
    uint64_t local = 0;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (int a = 0; a < n; ++a) {
      uint64_t xa = wv.x[a];
      for (int b = 0; b < n; ++b) {
        uint64_t xy = mulmod(xa, wv.y[b], p);
        uint64_t row = 0;
        for (int c = 0; c < n; ++c)
          row = addmod(row, mulmod(wv.z[c], wv.w[cf.eval(a, b, c)], p), p);
        local = addmod(local, mulmod(xy, row, p), p);
      }
    }
#ifdef _OPENMP
#pragma omp critical
#endif
    acc = addmod(acc, local, p);
  }
  return acc;
}

}  // namespace

uint64_t evaluate_weighted_sum(const Structure& s, const ExprPtr& f, const WeightVectors& wv,
                               Regime route, const FieldConfig& cfg) {
  for (const auto& op : expr_ops(f)) s.table(op);
  switch (route) {
    case Regime::Quadratic: {
      auto m = match_quadratic(f);
      if (!m) throw MagmaError(Err::RouteTooWeak, "expression is not quadratic-shaped");
      return quadratic_route(s, *m, wv, cfg.p);
    }
    case Regime::Matrix: {
      auto m = match_matrix(f);
      if (!m) throw MagmaError(Err::RouteTooWeak, "expression is not matrix-shaped");
      return matrix_route(s, *m, wv, cfg);
    }
    case Regime::Cubic: return cubic_route(s, f, wv, cfg.p);
  }
  throw MagmaError(Err::RouteTooWeak, "bad route");
}

Verdict verify_identity(const Structure& s, const Identity& id, const FieldConfig& cfg) {
  for (const auto& op : identity_ops(id)) s.table(op);
  if (cfg.p <= 4ull * (uint64_t)s.n)
    throw MagmaError(Err::PrimeTooSmall, "field modulus must exceed 4n");
  if (cfg.trials < 1) throw MagmaError(Err::InvalidSize, "trials must be >= 1");

  bool subexpr_pair = false;
  Regime lhs_route = Regime::Cubic, rhs_route = Regime::Cubic;
  try {
    (void)classify_identity(id);
    lhs_route = classify_shape(id.lhs);
    if (!id.constant_term) rhs_route = classify_shape(id.rhs);
  } catch (const MagmaError& e) {
    if (e.kind != Err::SubexpressionPair) throw;
    subexpr_pair = true;
  }
  if (subexpr_pair) return brute_force_verify(s, id);

  int n = s.n;
  uint64_t p = cfg.p;
  fp::Rng rng(cfg.seed);
  for (int t = 0; t < cfg.trials; ++t) {
    WeightVectors wv;
    wv.x = fp::random_vector(rng, n, p);
    wv.y = fp::random_vector(rng, n, p);
    wv.z = fp::random_vector(rng, n, p);
    wv.w = fp::random_vector(rng, n, p);
    uint64_t pf = evaluate_weighted_sum(s, id.lhs, wv, lhs_route, cfg);
    uint64_t pg;
    if (id.constant_term) {
      uint64_t sx = 0, sy = 0, sz = 0;
      for (int i = 0; i < n; ++i) {
        sx = addmod(sx, wv.x[i], p);
        sy = addmod(sy, wv.y[i], p);
        sz = addmod(sz, wv.z[i], p);
      }
      ElementId ref = eval_expr(s, id.lhs, 0, 0, 0);
      pg = mulmod(mulmod(sx, sy, p), mulmod(sz, wv.w[ref], p), p);
    } else {
      pg = evaluate_weighted_sum(s, id.rhs, wv, rhs_route, cfg);
    }
    if (pf != pg) return {false, 0.0, std::nullopt};
  }
  return {true, std::pow(4.0 / (double)p, cfg.trials), std::nullopt};
}

Verdict freivalds_distributivity(const Structure& s, const FieldConfig& cfg,
                                 const FreivaldsConfig& fcfg, const std::string& mul_op,
                                 const std::string& add_op) {
  const OpTable& mul = s.table(mul_op);
  const OpTable& add = s.table(add_op);
  int n = s.n;
  uint64_t p = cfg.p;
  if (p <= 4ull * (uint64_t)n) throw MagmaError(Err::PrimeTooSmall, "field modulus must exceed 4n");

  int ell = fcfg.ell;
  if (ell <= 0) ell = std::max(1, (int)std::ceil(8.0 * std::log2(std::max(2, n))));
  int rounds = std::max(1, fcfg.rounds);

  fp::Rng rng(cfg.seed);
  for (int round = 0; round < rounds; ++round) {
    std::vector<uint64_t> wb = fp::random_vector(rng, n, p);

    // Y = sum_b w_b sigma_b ; sigma_b column i is the indicator of b+x_i
    fp::Matrix Y(n, n);
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < n; ++i) {
        int r = add.at(b, i);
        Y.at(r, i) = addmod(Y.at(r, i), wb[b], p);
      }
    // Xp[a][k] = sum of w_b over b with a*b = k
    fp::Matrix Xp(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        int k = mul.at(a, b);
        Xp.at(a, k) = addmod(Xp.at(a, k), wb[b], p);
      }

    for (int t = 0; t < ell; ++t) {
      std::vector<uint64_t> u = fp::random_vector(rng, n, p);
      // X row a = u * pi_a ; (u*pi_a)[i] = u[a*x_i]
      fp::Matrix X(n, n);
      for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i) X.at(a, i) = u[mul.at(a, i)];
      // Yp row k = u * sigma_k ; (u*sigma_k)[j] = u[k+x_j]
      fp::Matrix Yp(n, n);
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) Yp.at(k, j) = u[add.at(k, j)];

      fp::Matrix L = fp::mm(X, Y, p, cfg.mm);    // row a: u pi_a Y
      fp::Matrix Z = fp::mm(Xp, Yp, p, cfg.mm);  // row a: sum_b w_b u sigma_{a*b}
      for (int a = 0; a < n; ++a) {
        const uint64_t* za = &Z.a[(size_t)a * n];
        for (int i = 0; i < n; ++i) {
          // (z_a * pi_a)[i] = z_a[a * x_i]
          if (L.at(a, i) != za[mul.at(a, i)]) return {false, 0.0, std::nullopt};
        }
      }
    }
  }
  double per_round = 2.0 / (double)p;
  return {true, std::pow(per_round, rounds), std::nullopt};
}

namespace {

template <bool kParallel>
long long count_triples_impl(const Structure& s) {
  const OpTable& mul = s.table("*");
  const OpTable& add = s.table("+");
  int n = s.n;
  long long count = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : count) if (kParallel)
#endif
  for (int x = 0; x < n; ++x) {
    const ElementId* mrow = &mul.entries[(size_t)x * n];
    for (int y = 0; y < n; ++y) {
      ElementId xy = mrow[y];
      const ElementId* arow = &add.entries[(size_t)y * n];
      const ElementId* srow = &add.entries[(size_t)xy * n];
      for (int z = 0; z < n; ++z) {
        // x*(y+z) == (x*y)+(x*z)
        if (mrow[arow[z]] == srow[mrow[z]]) ++count;
      }
    }
  }
  return count;
}

}  // namespace

long long count_distributive_triples(const Structure& s) { return count_triples_impl<true>(s); }

long long count_distributive_triples_serial(const Structure& s) {
  return count_triples_impl<false>(s);
}

}  // namespace magma

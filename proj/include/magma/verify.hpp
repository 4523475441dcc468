#pragma once

#include <optional>
#include <string>
#include <vector>

#include "magma/core.hpp"
#include "magma/expr.hpp"
#include "magma/fp.hpp"

namespace magma {

struct FieldConfig {
  uint64_t p = fp::kMersenne61;
  int trials = 2;
  uint64_t seed = 0;
  fp::MatMulConfig mm;
};

struct Witness {
  ElementId a, b, c;
  bool operator==(const Witness&) const = default;
};

struct Verdict {
  bool holds = false;
  double err_bound = 0.0;               // P[wrong "holds"] upper bound
  std::optional<Witness> witness;       // brute force only
};

// Expression flattened to a postfix program for tight inner loops.
struct CompiledExpr {
  struct Instr {
    const ElementId* table;  // borrowed from the structure
    int n;
    int src1, src2;  // register indices; 0..2 are the inputs a,b,c
  };
  std::vector<Instr> prog;
  int out_reg = 0;

  ElementId eval(ElementId a, ElementId b, ElementId c) const {
    ElementId regs[64];
    regs[0] = a;
    regs[1] = b;
    regs[2] = c;
    int next = 3;
    for (const auto& in : prog) regs[next++] = in.table[(size_t)regs[in.src1] * in.n + regs[in.src2]];
    return regs[out_reg];
  }
};

// Structure must outlive the compiled form.
CompiledExpr compile_expr(const Structure& s, const ExprPtr& e);

ElementId eval_expr(const Structure& s, const ExprPtr& e, ElementId a, ElementId b, ElementId c);

// Exhaustive check over S^3; Fails carries the lexicographically least witness.
Verdict brute_force_verify(const Structure& s, const Identity& id);
Verdict brute_force_verify_serial(const Structure& s, const Identity& id);

struct WeightVectors {
  std::vector<uint64_t> x, y, z, w;  // indexed by element; w keyed by f's value
};

// P_f(x,y,z,w) = sum over (a,b,c) of x_a y_b z_c w_{f(a,b,c)} mod p.
// Route selects the aggregation strategy; throws RouteTooWeak when the
// expression does not have the required shape.
uint64_t evaluate_weighted_sum(const Structure& s, const ExprPtr& f, const WeightVectors& wv,
                               Regime route, const FieldConfig& cfg);

// Randomized polynomial identity test dispatched on the identity's regime.
// Fails is sound and carries no witness; Holds has err <= (4/p)^trials.
// Equations where one side is a subexpression of the other fall back to
// brute force (exact).
Verdict verify_identity(const Structure& s, const Identity& id, const FieldConfig& cfg);

struct FreivaldsConfig {
  int ell = 0;     // 0: ceil(8*log2(n))
  int rounds = 3;  // outer repetitions with fresh randomness
};

// Matrix-product formulation of distributivity of mul_op over add_op.
Verdict freivalds_distributivity(const Structure& s, const FieldConfig& cfg,
                                 const FreivaldsConfig& fcfg = {},
                                 const std::string& mul_op = "*", const std::string& add_op = "+");

// Ordered triples (x,y,z) with x*(y+z) == (x*y)+(x*z).
long long count_distributive_triples(const Structure& s);
long long count_distributive_triples_serial(const Structure& s);

}  // namespace magma

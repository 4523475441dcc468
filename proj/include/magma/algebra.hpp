#pragma once

#include <optional>
#include <string>
#include <vector>

#include "magma/core.hpp"
#include "magma/verify.hpp"

namespace magma::algebra {

struct GroupReport {
  std::optional<ElementId> identity_elem;
  bool inverses_ok = false;
  bool associative = false;
  std::string assoc_method;  // "light" or "randomized"
  bool abelian = false;
  bool is_group() const { return identity_elem && inverses_ok && associative; }
};

std::optional<ElementId> find_identity_element(const Structure& s, const std::string& op);

// Closure of the generator set under op (no associativity assumed).
std::vector<ElementId> closure(const Structure& s, const std::string& op,
                               const std::vector<ElementId>& gens);

// Middle operand restricted to the generators; requires closure(gens) == S.
bool light_associativity(const Structure& s, const std::string& op,
                         const std::vector<ElementId>& generators);

// Greedy generating set: repeatedly adjoin the least element outside the
// current closure. For groups this yields at most log2(n) generators.
std::vector<ElementId> greedy_generators(const Structure& s, const std::string& op);

// Bilinear extension of op to random field-weighted formal sums; each trial
// costs O(n^2). Fails is sound; Holds has err <= (3/p)^trials.
Verdict rs_associativity_test(const Structure& s, const std::string& op, const FieldConfig& cfg);

enum class AssocMethod { Light, Randomized };

GroupReport analyze_group(const Structure& s, const std::string& op, const FieldConfig& cfg,
                          AssocMethod method = AssocMethod::Light);

struct CyclicFactor {
  ElementId generator;
  int order;
};

// Cyclic factors whose internal direct sum is the whole group. Pre: op is a
// commutative group operation on all of S (NotAGroup on contradictions).
std::vector<CyclicFactor> abelian_decomposition(const Structure& s, const std::string& op);

struct Basis {
  std::vector<ElementId> elements;
  std::string op;
};

// B with B op B = S and |B| <= 4*ceil(sqrt(n)), by the mixed-radix digit
// split over the cyclic factors.
Basis abelian_basis(const Structure& s, const std::string& op);

// Same construction restricted to a subset closed under op (used for the
// multiplicative group of a field).
Basis abelian_basis_on(const Structure& s, const std::string& op,
                       const std::vector<ElementId>& elems);

bool basis_covers(const Structure& s, const Basis& b, const std::vector<ElementId>& universe);

struct CheckResult {
  bool ok = false;
  std::string reason;            // first failed axiom when !ok
  double err_bound = 0.0;        // randomized Accept only
  std::optional<ElementId> unity;
};

// Deterministic; ops "+" and "*", n >= 2.
CheckResult field_verify(const Structure& s);

// Randomized multiplication-associativity; Reject is sound.
CheckResult ring_verify(const Structure& s, const FieldConfig& cfg, bool require_unital = false);

}  // namespace magma::algebra

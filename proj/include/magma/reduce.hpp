#pragma once

#include <array>
#include <climits>
#include <string>
#include <utility>
#include <vector>

#include "magma/core.hpp"
#include "magma/detect.hpp"
#include "magma/expr.hpp"

namespace magma::reduce {

using detect::BinaryMatrix;
using detect::IntSet;
using detect::kAbsentWeight;

// Simple undirected weighted graph; kAbsentWeight marks a non-edge.
struct WeightedGraph {
  int n = 0;
  std::vector<long long> w;

  WeightedGraph() = default;
  explicit WeightedGraph(int size) : n(size), w((size_t)size * size, kAbsentWeight) {}

  long long get(int i, int j) const { return w[(size_t)i * n + j]; }
  void set_edge(int i, int j, long long wt) {
    w[(size_t)i * n + j] = wt;
    w[(size_t)j * n + i] = wt;
  }
};

WeightedGraph graph_from_tripartite(const detect::WeightedTripartite& g);

// Structure on V + {delta, inf} that is distributive iff the graph is
// triangle-free. Ops "+" and "*"; constants "delta", "inf".
Structure triangle_to_distributivity(const BinaryMatrix& adj);

struct IdentityInstance {
  Structure s;
  Identity id;
  std::string family;
  std::string witness_map;
};

// |S| = 7n+4; the constant-term identity ((a*b)+(a*c))+(b*c) = _const is
// constant (== inf) iff the graph has no zero-weight triangle.
IdentityInstance zero_triangle_to_constant_identity(const WeightedGraph& g);

// Counting gadget: distributive-triple count equals |S|^3 - n^3 + Z where Z
// is the number of ordered vertex triples with w(a,b)+w(a,c) = -w(b,c) after
// completing the graph (missing edges and self-loops get weight 3n+1).
Structure zero_triangle_to_counting(const WeightedGraph& g);
long long completed_weight(const WeightedGraph& g, int i, int j);

struct BehrendPartition {
  long long n = 0;
  int q = 0;
  std::vector<IntSet> classes;  // disjoint cover of {0..n}, each 3-AP-free
};

BehrendPartition behrend_partition(long long n, int q);

// class index of x within the partition scheme (digit pattern + norm)
int behrend_class_of(const BehrendPartition& p, long long x);

// Forward color coding: random k-colorings of A; any fixed non-trivial k-AP
// survives one trial with probability >= k^-k.
std::vector<std::vector<IntSet>> colorize_kap(const IntSet& a, int k, int trials, uint64_t seed);

// Backward direction: one candidate set per tuple of Behrend classes with a
// nonempty slice in every color; a monochromatic k-AP in some output is
// equivalent to a multichromatic k-AP in the input.
std::vector<IntSet> monochromatize_kap(const std::vector<IntSet>& as, int q = 4);

struct DeltaInstances {
  long long N = 0;                // grid scale, ceil(sqrt(scaled universe))
  std::vector<long long> deltas;  // offset per instance
  std::vector<std::array<BinaryMatrix, 4>> instances;
};

struct WindowConfig {
  long long delta_lo = LLONG_MIN, delta_hi = LLONG_MIN;  // LLONG_MIN = auto
  long long win_lo = LLONG_MIN, win_hi = LLONG_MIN;
};

// Multichromatic square instances; OR of square detections over deltas is
// equivalent to a multichromatic 4-AP in the input sets.
DeltaInstances fourap_to_square(const std::array<IntSet, 4>& as, const WindowConfig& cfg = {});

// Same chain through T detection.
DeltaInstances fourap_to_T(const std::array<IntSet, 4>& as, const WindowConfig& cfg = {});

// family is 1..4 (square) resp. 5..6 (T). Universe is [-C*m, C*m] + inf with
// C = 10 and m the largest matrix index magnitude. The constant-term
// identity is constant iff the instance has no multichromatic square / T.
IdentityInstance square_to_identity(const std::array<BinaryMatrix, 4>& ms, int family);
IdentityInstance T_to_identity(const std::array<BinaryMatrix, 4>& ms, int family);

// Square-free overlays: each position of the (1-based) n x n grid is 1 in
// exactly one matrix, and no matrix has a corner (hence no square).
std::vector<BinaryMatrix> squarefree_matrices(long long n, int q = 4);

// Lazy family of 3n x 3n block matrices, one per tuple of overlay classes;
// monochromatic squares across the family correspond to multichromatic
// squares in the inputs with k' = k + 2n.
struct MonoSquareFamily {
  std::array<BinaryMatrix, 4> inputs;
  std::vector<BinaryMatrix> overlays;
  long long block = 0;  // n

  size_t count() const;
  BinaryMatrix instance(const std::array<int, 4>& ell) const;
  std::array<int, 4> tuple_for_witness(const detect::CornerWitness& w) const;
};

MonoSquareFamily multi_to_mono_square(const std::array<BinaryMatrix, 4>& ms, int q = 4);

struct HypercliqueConfig {
  int k = 4;
};

// k-partite (k-1)-uniform hypergraph whose k-cliques correspond to
// multichromatic k-APs.
detect::Hypergraph ap_to_hyperclique(const std::vector<IntSet>& as,
                                     const HypercliqueConfig& cfg = {});

// The AP matrix M (scaled by k-1) and the digit-split solution vector; used
// by the generator and exposed for validation.
std::vector<long long> ruler_solution(long long a1, long long a2, int k, long long q);
long long hyperclique_digit_base(long long n, int k);

std::array<std::vector<long long>, 4> fourap_to_foursum(const std::array<IntSet, 4>& as);

// Pairs every element with a parse-tree position; the embedded structure has
// |S|*#subexpressions + 1 elements and preserves the constant-term property.
std::pair<Structure, ExprPtr> subexpression_embedding(const Structure& s, const ExprPtr& f);

}  // namespace magma::reduce

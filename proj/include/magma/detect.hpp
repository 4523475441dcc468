#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "magma/core.hpp"

namespace magma::detect {

struct IntSet {
  long long universe_bound = 0;           // members live in [0, N]
  std::vector<long long> members;         // strictly increasing

  void validate() const;                  // throws EntryOutOfRange / ParseError
  bool contains(long long v) const;
};

IntSet make_intset(long long n, std::vector<long long> members);

// 0/1 matrix over a window of absolute coordinates; queries outside the
// window return 0.
struct BinaryMatrix {
  int rows = 0, cols = 0;
  long long row0 = 0, col0 = 0;  // index of the first row / column
  std::vector<uint64_t> bits;    // row-major bitset

  BinaryMatrix() = default;
  BinaryMatrix(int r, int c, long long r0, long long c0)
      : rows(r), cols(c), row0(r0), col0(c0), bits((size_t)r * ((c + 63) / 64), 0) {}

  int words_per_row() const { return (cols + 63) / 64; }
  bool in_window(long long r, long long c) const {
    return r >= row0 && r < row0 + rows && c >= col0 && c < col0 + cols;
  }
  bool get(long long r, long long c) const {
    if (!in_window(r, c)) return false;
    size_t rr = (size_t)(r - row0), cc = (size_t)(c - col0);
    return bits[rr * words_per_row() + (cc >> 6)] >> (cc & 63) & 1;
  }
  void set(long long r, long long c, bool v = true) {
    size_t rr = (size_t)(r - row0), cc = (size_t)(c - col0);
    uint64_t& w = bits[rr * words_per_row() + (cc >> 6)];
    if (v)
      w |= 1ull << (cc & 63);
    else
      w &= ~(1ull << (cc & 63));
  }
  const uint64_t* row_ptr(long long r) const { return &bits[(size_t)(r - row0) * words_per_row()]; }
  long long count_ones() const;
};

inline constexpr long long kAbsentWeight = INT64_MIN;

struct WeightedTripartite {
  int n = 0;
  long long weight_bound = 0;  // |w| <= M for present edges
  // blocks xy, yz, zx; kAbsentWeight marks a missing edge
  std::vector<long long> xy, yz, zx;

  WeightedTripartite() = default;
  explicit WeightedTripartite(int size, long long M)
      : n(size),
        weight_bound(M),
        xy((size_t)size * size, kAbsentWeight),
        yz((size_t)size * size, kAbsentWeight),
        zx((size_t)size * size, kAbsentWeight) {}

  long long& at(std::vector<long long>& blk, int i, int j) { return blk[(size_t)i * n + j]; }
  long long at(const std::vector<long long>& blk, int i, int j) const {
    return blk[(size_t)i * n + j];
  }
};

// k-partite (k-1)-uniform hypergraph. Edge lists are per omitted part;
// an edge stores vertex indices for every part except the omitted one, in
// part order.
struct Hypergraph {
  int k = 0;
  std::vector<std::vector<long long>> parts;     // vertex labels per part
  std::vector<std::vector<std::vector<int>>> edges;  // [omitted part][edge][k-1 indices]

  size_t edge_count() const;
};

// --- file formats -----------------------------------------------------------

IntSet load_intset(const std::string& text);
std::string save_intset(const IntSet& s);

std::vector<long long> load_intlist(const std::string& text);  // signed entries
std::string save_intlist(const std::vector<long long>& v);

BinaryMatrix load_bitmat(const std::string& text);
std::string save_bitmat(const BinaryMatrix& m);

WeightedTripartite load_tripartite(const std::string& text);
std::string save_tripartite(const WeightedTripartite& g);

Hypergraph load_hypergraph(const std::string& text);
std::string save_hypergraph(const Hypergraph& h);

// --- detectors --------------------------------------------------------------

struct ApWitness {
  long long start, step;
  bool operator==(const ApWitness&) const = default;
};

// Non-trivial (step > 0) k-term progression inside A; lexicographically
// least (start, step).
std::optional<ApWitness> detect_kap(const IntSet& a, int k);

// One element per set; step may be zero or negative.
std::optional<ApWitness> detect_multichromatic_kap(const std::vector<IntSet>& as);

struct CornerWitness {
  long long i, j, k;
  bool operator==(const CornerWitness&) const = default;
};

// M(i,j)=M(i+k,j)=M(i+k,j+k)=M(i,j+k)=1 with k > 0.
std::optional<CornerWitness> detect_square(const BinaryMatrix& m);
std::optional<CornerWitness> detect_square_serial(const BinaryMatrix& m);

// M1(i,j)=M2(i+k,j)=M3(i+k,j+k)=M4(i,j+k)=1, any k.
std::optional<CornerWitness> detect_multichromatic_square(const std::array<BinaryMatrix, 4>& ms);

// M1(i,j+k)=M2(i,j-k)=M3(i+k,j)=M4(i,j)=1, any k.
std::optional<CornerWitness> detect_multichromatic_T(const std::array<BinaryMatrix, 4>& ms);

// Symmetric 0/1 adjacency; witness u < v < w.
std::optional<std::array<int, 3>> detect_triangle(const BinaryMatrix& adj);

std::optional<std::array<int, 3>> detect_zero_triangle(const WeightedTripartite& g);

std::optional<std::vector<int>> detect_hyperclique(const Hypergraph& h);

std::optional<std::array<long long, 4>> detect_foursum(
    const std::array<std::vector<long long>, 4>& bs);

// --- witness checkers (each detector's output re-validates) -----------------

bool check_kap(const IntSet& a, int k, const ApWitness& w);
bool check_multichromatic_kap(const std::vector<IntSet>& as, const ApWitness& w);
bool check_square(const BinaryMatrix& m, const CornerWitness& w);
bool check_multichromatic_square(const std::array<BinaryMatrix, 4>& ms, const CornerWitness& w);
bool check_multichromatic_T(const std::array<BinaryMatrix, 4>& ms, const CornerWitness& w);
bool check_hyperclique(const Hypergraph& h, const std::vector<int>& vs);

}  // namespace magma::detect

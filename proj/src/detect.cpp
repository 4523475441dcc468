#include "magma/detect.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace magma::detect {

void IntSet::validate() const {
  long long prev = -1;
  for (long long v : members) {
    if (v < 0 || v > universe_bound)
      throw MagmaError(Err::EntryOutOfRange, "intset member outside [0,N]");
    if (v <= prev) throw MagmaError(Err::ParseError, "intset members must be strictly increasing");
    prev = v;
  }
}

bool IntSet::contains(long long v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

IntSet make_intset(long long n, std::vector<long long> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  IntSet s{n, std::move(members)};
  s.validate();
  return s;
}

long long BinaryMatrix::count_ones() const {
  long long c = 0;
  for (uint64_t w : bits) c += __builtin_popcountll(w);
  return c;
}

size_t Hypergraph::edge_count() const {
  size_t c = 0;
  for (const auto& e : edges) c += e.size();
  return c;
}

// --- file IO -----------------------------------------------------------------

namespace {

struct LineReader {
  std::vector<std::string> lines;
  size_t i = 0;

  explicit LineReader(const std::string& text) {
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    if (!cur.empty()) lines.push_back(cur);
  }
  const std::string& next(const char* what) {
    if (i >= lines.size())
      throw MagmaError(Err::ParseError,
                       "line " + std::to_string(lines.size() + 1) + ": expected " + what);
    return lines[i++];
  }
  bool done() {
    while (i < lines.size() && lines[i].empty()) ++i;
    return i >= lines.size();
  }
  int lineno() const { return (int)i; }
};

long long parse_ll(const std::string& s, int line, const char* what) {
  try {
    size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw MagmaError(Err::ParseError, "line " + std::to_string(line) + ": bad " + std::string(what));
  }
}

long long field_ll(const std::string& line, const std::string& key, int lineno) {
  if (line.rfind(key + "=", 0) != 0)
    throw MagmaError(Err::ParseError,
                     "line " + std::to_string(lineno) + ": expected '" + key + "=<int>'");
  return parse_ll(line.substr(key.size() + 1), lineno, key.c_str());
}

std::vector<long long> parse_ll_list(const std::string& line) {
  std::istringstream is(line);
  std::vector<long long> out;
  long long v;
  while (is >> v) out.push_back(v);
  return out;
}

}  // namespace

IntSet load_intset(const std::string& text) {
  LineReader r(text);
  if (r.next("magic") != "intset v1") throw MagmaError(Err::ParseError, "expected 'intset v1'");
  IntSet s;
  s.universe_bound = field_ll(r.next("N"), "N", r.lineno());
  while (!r.done()) {
    for (long long v : parse_ll_list(r.next("members"))) s.members.push_back(v);
  }
  std::sort(s.members.begin(), s.members.end());
  s.validate();
  return s;
}

std::string save_intset(const IntSet& s) {
  std::ostringstream os;
  os << "intset v1\nN=" << s.universe_bound << "\n";
  for (size_t i = 0; i < s.members.size(); ++i) os << s.members[i] << (i + 1 < s.members.size() ? ' ' : '\n');
  if (s.members.empty()) os << "\n";
  return os.str();
}

std::vector<long long> load_intlist(const std::string& text) {
  LineReader r(text);
  if (r.next("magic") != "intlist v1") throw MagmaError(Err::ParseError, "expected 'intlist v1'");
  std::vector<long long> out;
  while (!r.done())
    for (long long v : parse_ll_list(r.next("entries"))) out.push_back(v);
  return out;
}

std::string save_intlist(const std::vector<long long>& v) {
  std::ostringstream os;
  os << "intlist v1\n";
  for (size_t i = 0; i < v.size(); ++i) os << v[i] << (i + 1 < v.size() ? ' ' : '\n');
  if (v.empty()) os << "\n";
  return os.str();
}

BinaryMatrix load_bitmat(const std::string& text) {
  LineReader r(text);
  if (r.next("magic") != "bitmat v1") throw MagmaError(Err::ParseError, "expected 'bitmat v1'");
  const std::string& dims = r.next("rows/cols");
  std::istringstream ds(dims);
  std::string a, b;
  ds >> a >> b;
  long long rows = field_ll(a, "rows", r.lineno());
  long long cols = field_ll(b, "cols", r.lineno());
  const std::string& off = r.next("offset");
  if (off.rfind("offset=", 0) != 0)
    throw MagmaError(Err::ParseError, "line " + std::to_string(r.lineno()) + ": expected offset=");
  auto parts = parse_ll_list(off.substr(7));
  if (parts.size() != 2) throw MagmaError(Err::ParseError, "offset needs two integers");
  if (rows <= 0 || cols <= 0 || rows > 100000 || cols > 100000)
    throw MagmaError(Err::InvalidSize, "bad bitmat dimensions");
  BinaryMatrix m((int)rows, (int)cols, parts[0], parts[1]);
  for (long long i = 0; i < rows; ++i) {
    const std::string& row = r.next("bit row");
    if ((long long)row.size() != cols)
      throw MagmaError(Err::ParseError,
                       "line " + std::to_string(r.lineno()) + ": row has wrong length");
    for (long long j = 0; j < cols; ++j) {
      if (row[j] == '1')
        m.set(m.row0 + i, m.col0 + j);
      else if (row[j] != '0')
        throw MagmaError(Err::ParseError,
                         "line " + std::to_string(r.lineno()) + ": rows are 0/1 strings");
    }
  }
  return m;
}

std::string save_bitmat(const BinaryMatrix& m) {
  std::ostringstream os;
  os << "bitmat v1\nrows=" << m.rows << " cols=" << m.cols << "\noffset=" << m.row0 << " "
     << m.col0 << "\n";
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) os << (m.get(m.row0 + i, m.col0 + j) ? '1' : '0');
    os << '\n';
  }
  return os.str();
}

WeightedTripartite load_tripartite(const std::string& text) {
  LineReader r(text);
  if (r.next("magic") != "tripartite v1")
    throw MagmaError(Err::ParseError, "expected 'tripartite v1'");
  long long n = field_ll(r.next("n"), "n", r.lineno());
  long long M = field_ll(r.next("M"), "M", r.lineno());
  if (n <= 0 || n > 20000) throw MagmaError(Err::InvalidSize, "bad tripartite size");
  WeightedTripartite g((int)n, M);
  for (auto* blk : {&g.xy, &g.yz, &g.zx}) {
    for (long long i = 0; i < n; ++i) {
      const std::string& row = r.next("weight row");
      std::istringstream is(row);
      for (long long j = 0; j < n; ++j) {
        std::string tok;
        if (!(is >> tok))
          throw MagmaError(Err::ParseError, "line " + std::to_string(r.lineno()) + ": short row");
        if (tok == ".") continue;
        long long w = parse_ll(tok, r.lineno(), "weight");
        if (w < -M || w > M)
          throw MagmaError(Err::WeightOutOfRange, "edge weight exceeds the bound");
        (*blk)[(size_t)i * n + j] = w;
      }
    }
  }
  return g;
}

std::string save_tripartite(const WeightedTripartite& g) {
  std::ostringstream os;
  os << "tripartite v1\nn=" << g.n << "\nM=" << g.weight_bound << "\n";
  for (const auto* blk : {&g.xy, &g.yz, &g.zx}) {
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        if (j) os << ' ';
        long long w = (*blk)[(size_t)i * g.n + j];
        if (w == kAbsentWeight)
          os << '.';
        else
          os << w;
      }
      os << '\n';
    }
  }
  return os.str();
}

Hypergraph load_hypergraph(const std::string& text) {
  LineReader r(text);
  if (r.next("magic") != "hypergraph v1")
    throw MagmaError(Err::ParseError, "expected 'hypergraph v1'");
  long long k = field_ll(r.next("k"), "k", r.lineno());
  if (k < 3 || k > 16) throw MagmaError(Err::InvalidSize, "bad hypergraph arity");
  Hypergraph h;
  h.k = (int)k;
  h.parts.resize(k);
  h.edges.resize(k);
  for (int i = 0; i < k; ++i) h.parts[i] = parse_ll_list(r.next("part"));
  while (!r.done()) {
    auto vals = parse_ll_list(r.next("edge"));
    if (vals.size() != (size_t)k)
      throw MagmaError(Err::ParseError,
                       "line " + std::to_string(r.lineno()) + ": edge needs omit + k-1 indices");
    int omit = (int)vals[0];
    if (omit < 0 || omit >= k) throw MagmaError(Err::ParseError, "bad omitted part");
    std::vector<int> e;
    int pi = 0;
    for (size_t t = 1; t < vals.size(); ++t, ++pi) {
      if (pi == omit) ++pi;
      long long v = vals[t];
      if (v < 0 || v >= (long long)h.parts[pi].size())
        throw MagmaError(Err::ParseError, "edge vertex out of range");
      e.push_back((int)v);
    }
    h.edges[omit].push_back(std::move(e));
  }
  return h;
}

std::string save_hypergraph(const Hypergraph& h) {
  std::ostringstream os;
  os << "hypergraph v1\nk=" << h.k << "\n";
  for (const auto& part : h.parts) {
    for (size_t i = 0; i < part.size(); ++i) os << part[i] << (i + 1 < part.size() ? ' ' : '\n');
    if (part.empty()) os << "\n";
  }
  for (int omit = 0; omit < h.k; ++omit) {
    for (const auto& e : h.edges[omit]) {
      os << omit;
      for (int v : e) os << ' ' << v;
      os << '\n';
    }
  }
  return os.str();
}

// --- detectors ---------------------------------------------------------------

std::optional<ApWitness> detect_kap(const IntSet& a, int k) {
  if (k < 3) throw MagmaError(Err::InvalidSize, "k must be >= 3");
  const auto& m = a.members;
  for (size_t i = 0; i < m.size(); ++i) {
    for (size_t j = i + 1; j < m.size(); ++j) {
      long long start = m[i], step = m[j] - m[i];
      bool ok = true;
      for (int t = 2; t < k; ++t) {
        if (!a.contains(start + (long long)t * step)) {
          ok = false;
          break;
        }
      }
      if (ok) return ApWitness{start, step};
    }
  }
  return std::nullopt;
}

std::optional<ApWitness> detect_multichromatic_kap(const std::vector<IntSet>& as) {
  if (as.size() < 3) throw MagmaError(Err::ArityMismatch, "need k >= 3 sets");
  int k = (int)as.size();
  std::optional<ApWitness> best;
  for (long long a1 : as[0].members) {
    for (long long a2 : as[1].members) {
      long long step = a2 - a1;
      if (best && (a1 > best->start || (a1 == best->start && step >= best->step))) continue;
      bool ok = true;
      for (int t = 2; t < k; ++t) {
        if (!as[t].contains(a1 + (long long)t * step)) {
          ok = false;
          break;
        }
      }
      if (ok) best = ApWitness{a1, step};
    }
    if (best && a1 >= best->start) break;
  }
  return best;
}

namespace {

// Bitwise helpers over row slices: dst = row shifted left by `shift` columns
// in absolute terms, i.e. dst bit j corresponds to row bit j+shift.
void shifted_row(const uint64_t* row, int words, long long shift, uint64_t* dst) {
  if (shift >= 0) {
    int ws = (int)(shift >> 6), bs = (int)(shift & 63);
    for (int w = 0; w < words; ++w) {
      uint64_t lo = (w + ws < words) ? row[w + ws] : 0;
      uint64_t hi = (w + ws + 1 < words) ? row[w + ws + 1] : 0;
      dst[w] = bs ? (lo >> bs) | (hi << (64 - bs)) : lo;
    }
  } else {
    long long sh = -shift;
    int ws = (int)(sh >> 6), bs = (int)(sh & 63);
    for (int w = words - 1; w >= 0; --w) {
      uint64_t hi = (w - ws >= 0) ? row[w - ws] : 0;
      uint64_t lo = (w - ws - 1 >= 0) ? row[w - ws - 1] : 0;
      dst[w] = bs ? (hi << bs) | (lo >> (64 - bs)) : hi;
    }
  }
}

int first_bit(const uint64_t* row, int words, int cols) {
  for (int w = 0; w < words; ++w) {
    if (row[w]) {
      int j = (w << 6) + __builtin_ctzll(row[w]);
      return j < cols ? j : -1;
    }
  }
  return -1;
}

void mask_tail(uint64_t* row, int words, int cols) {
  int excess = words * 64 - cols;
  if (excess > 0 && words > 0) row[words - 1] &= ~0ull >> excess;
}

template <bool kParallel>
std::optional<CornerWitness> detect_square_impl(const BinaryMatrix& m) {
  int n = m.rows, words = m.words_per_row();
  if (m.cols != m.rows) throw MagmaError(Err::ShapeMismatch, "square detection needs a square matrix");
  std::atomic<long long> guard((long long)n + 1);
  // per-i best (j,k), combined by smallest i afterwards
  std::vector<std::optional<CornerWitness>> per_i(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (kParallel)
#endif
  for (int i = 0; i < n; ++i) {
    if (i > guard.load(std::memory_order_relaxed)) continue;
    std::vector<uint64_t> buf(words), both(words);
    long long bestj = -1, bestk = -1;
    for (int k = 1; i + k < n; ++k) {
      const uint64_t* r1 = m.row_ptr(m.row0 + i);
      const uint64_t* r2 = m.row_ptr(m.row0 + i + k);
      for (int w = 0; w < words; ++w) both[w] = r1[w] & r2[w];
      shifted_row(both.data(), words, k, buf.data());
      for (int w = 0; w < words; ++w) buf[w] &= both[w];
      mask_tail(buf.data(), words, m.cols - k >= 0 ? m.cols : 0);
      int j = first_bit(buf.data(), words, m.cols);
      if (j >= 0 && (bestj < 0 || j < bestj)) {
        bestj = j;
        bestk = k;
      }
    }
    if (bestj >= 0) {
      per_i[i] = CornerWitness{m.row0 + i, m.col0 + bestj, bestk};
      long long prev = guard.load(std::memory_order_relaxed);
      while (i < prev && !guard.compare_exchange_weak(prev, i)) {
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (per_i[i]) return per_i[i];
  return std::nullopt;
}

}  // namespace

std::optional<CornerWitness> detect_square(const BinaryMatrix& m) {
  return detect_square_impl<true>(m);
}

std::optional<CornerWitness> detect_square_serial(const BinaryMatrix& m) {
  return detect_square_impl<false>(m);
}

std::optional<CornerWitness> detect_multichromatic_square(const std::array<BinaryMatrix, 4>& ms) {
  for (int t = 1; t < 4; ++t)
    if (ms[t].rows != ms[0].rows || ms[t].cols != ms[0].cols || ms[t].row0 != ms[0].row0 ||
        ms[t].col0 != ms[0].col0)
      throw MagmaError(Err::ShapeMismatch, "matrices must share shape and offset");
  int n = ms[0].rows, words = ms[0].words_per_row();
  std::atomic<long long> guard((long long)n + 1);
  std::vector<std::optional<CornerWitness>> per_i(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < n; ++i) {
    if (i > guard.load(std::memory_order_relaxed)) continue;
    std::vector<uint64_t> a(words), b(words), buf(words);
    long long bestj = -1, bestk = 0;
    for (long long k = -(n - 1); k < n; ++k) {
      long long i2 = i + k;
      if (i2 < 0 || i2 >= n) continue;
      const uint64_t* r1 = ms[0].row_ptr(ms[0].row0 + i);
      const uint64_t* r2 = ms[1].row_ptr(ms[1].row0 + i2);
      const uint64_t* r3 = ms[2].row_ptr(ms[2].row0 + i2);
      const uint64_t* r4 = ms[3].row_ptr(ms[3].row0 + i);
      for (int w = 0; w < words; ++w) a[w] = r1[w] & r2[w];
      bool any = false;
      for (int w = 0; w < words; ++w) any |= a[w] != 0;
      if (!any) continue;
      for (int w = 0; w < words; ++w) b[w] = r3[w] & r4[w];
      shifted_row(b.data(), words, k, buf.data());
      for (int w = 0; w < words; ++w) buf[w] &= a[w];
      mask_tail(buf.data(), words, ms[0].cols);
      int j = first_bit(buf.data(), words, ms[0].cols);
      if (j >= 0 && (bestj < 0 || j < bestj)) {
        bestj = j;
        bestk = k;
      }
    }
    if (bestj >= 0) {
      per_i[i] = CornerWitness{ms[0].row0 + i, ms[0].col0 + bestj, bestk};
      long long prev = guard.load(std::memory_order_relaxed);
      while (i < prev && !guard.compare_exchange_weak(prev, i)) {
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (per_i[i]) return per_i[i];
  return std::nullopt;
}

std::optional<CornerWitness> detect_multichromatic_T(const std::array<BinaryMatrix, 4>& ms) {
  for (int t = 1; t < 4; ++t)
    if (ms[t].rows != ms[0].rows || ms[t].cols != ms[0].cols || ms[t].row0 != ms[0].row0 ||
        ms[t].col0 != ms[0].col0)
      throw MagmaError(Err::ShapeMismatch, "matrices must share shape and offset");
  int n = ms[0].rows, words = ms[0].words_per_row();
  std::atomic<long long> guard((long long)n + 1);
  std::vector<std::optional<CornerWitness>> per_i(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < n; ++i) {
    if (i > guard.load(std::memory_order_relaxed)) continue;
    std::vector<uint64_t> acc(words), s1(words), s2(words);
    long long bestj = -1, bestk = 0;
    for (long long k = -(n - 1); k < n; ++k) {
      long long i2 = i + k;
      if (i2 < 0 || i2 >= n) continue;
      const uint64_t* r1 = ms[0].row_ptr(ms[0].row0 + i);
      const uint64_t* r2 = ms[1].row_ptr(ms[1].row0 + i);
      const uint64_t* r3 = ms[2].row_ptr(ms[2].row0 + i2);
      const uint64_t* r4 = ms[3].row_ptr(ms[3].row0 + i);
      shifted_row(r1, words, k, s1.data());
      shifted_row(r2, words, -k, s2.data());
      for (int w = 0; w < words; ++w) acc[w] = s1[w] & s2[w] & r3[w] & r4[w];
      mask_tail(acc.data(), words, ms[0].cols);
      int j = first_bit(acc.data(), words, ms[0].cols);
      if (j >= 0 && (bestj < 0 || j < bestj)) {
        bestj = j;
        bestk = k;
      }
    }
    if (bestj >= 0) {
      per_i[i] = CornerWitness{ms[0].row0 + i, ms[0].col0 + bestj, bestk};
      long long prev = guard.load(std::memory_order_relaxed);
      while (i < prev && !guard.compare_exchange_weak(prev, i)) {
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (per_i[i]) return per_i[i];
  return std::nullopt;
}

std::optional<std::array<int, 3>> detect_triangle(const BinaryMatrix& adj) {
  if (adj.rows != adj.cols) throw MagmaError(Err::ShapeMismatch, "adjacency must be square");
  int n = adj.rows, words = adj.words_per_row();
  for (int u = 0; u < n; ++u) {
    const uint64_t* ru = adj.row_ptr(adj.row0 + u);
    for (int v = u + 1; v < n; ++v) {
      if (!adj.get(adj.row0 + u, adj.col0 + v)) continue;
      const uint64_t* rv = adj.row_ptr(adj.row0 + v);
      for (int w = 0; w < words; ++w) {
        uint64_t both = ru[w] & rv[w];
        while (both) {
          int x = (w << 6) + __builtin_ctzll(both);
          if (x >= n) break;
          if (x > v) return std::array<int, 3>{u, v, x};
          both &= both - 1;
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::array<int, 3>> detect_zero_triangle(const WeightedTripartite& g) {
  int n = g.n;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      long long wxy = g.at(g.xy, x, y);
      if (wxy == kAbsentWeight) continue;
      for (int z = 0; z < n; ++z) {
        long long wyz = g.at(g.yz, y, z), wzx = g.at(g.zx, z, x);
        if (wyz == kAbsentWeight || wzx == kAbsentWeight) continue;
        if (wxy + wyz + wzx == 0) return std::array<int, 3>{x, y, z};
      }
    }
  return std::nullopt;
}

namespace {

unsigned __int128 pack_edge(const std::vector<int>& e) {
  unsigned __int128 key = 0;
  for (int v : e) key = (key << 25) | (unsigned)(v + 1);
  return key;
}

}  // namespace

std::optional<std::vector<int>> detect_hyperclique(const Hypergraph& h) {
  int k = h.k;
  for (const auto& part : h.parts)
    if (part.size() >= (1u << 25) - 1) throw MagmaError(Err::InvalidSize, "part too large");

  // sorted packed edge keys per omitted part, for exact membership tests
  std::vector<std::vector<unsigned __int128>> keys(k);
  for (int omit = 0; omit < k; ++omit) {
    keys[omit].reserve(h.edges[omit].size());
    for (const auto& e : h.edges[omit]) keys[omit].push_back(pack_edge(e));
    std::sort(keys[omit].begin(), keys[omit].end());
  }
  auto has_edge = [&](int omit, const std::vector<int>& e) {
    auto key = pack_edge(e);
    return std::binary_search(keys[omit].begin(), keys[omit].end(), key);
  };

  // index edges omitting part 0 by all but their last coordinate; candidates
  // for the last part come from them
  // enumerate edges that omit part k-1 in sorted order; extend by x_{k-1}
  std::vector<std::vector<int>> base = h.edges[k - 1];
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());

  // edges omitting part 0 keyed by coordinates on parts 1..k-2
  // (their last coordinate is the candidate x_{k-1})
  std::vector<std::pair<unsigned __int128, int>> idx;
  idx.reserve(h.edges[0].size());
  for (const auto& e : h.edges[0]) {
    unsigned __int128 key = 0;
    for (size_t t = 0; t + 1 < e.size(); ++t) key = (key << 25) | (unsigned)(e[t] + 1);
    idx.emplace_back(key, e.back());
  }
  std::sort(idx.begin(), idx.end());

  std::vector<int> full(k), sub;
  for (const auto& e : base) {  // e = (x_0 .. x_{k-2})
    unsigned __int128 key = 0;
    for (size_t t = 1; t < e.size(); ++t) key = (key << 25) | (unsigned)(e[t] + 1);
    auto lo = std::lower_bound(idx.begin(), idx.end(), std::make_pair(key, -1));
    for (auto it = lo; it != idx.end() && it->first == key; ++it) {
      int xk = it->second;
      for (int t = 0; t < k - 1; ++t) full[t] = e[t];
      full[k - 1] = xk;
      bool ok = true;
      for (int omit = 1; omit < k - 1 && ok; ++omit) {
        sub.clear();
        for (int t = 0; t < k; ++t)
          if (t != omit) sub.push_back(full[t]);
        ok = has_edge(omit, sub);
      }
      if (ok) return full;
    }
  }
  return std::nullopt;
}

std::optional<std::array<long long, 4>> detect_foursum(
    const std::array<std::vector<long long>, 4>& bs) {
  // sums of pairs from B3 x B4, each sum keeping its lex-least pair
  std::vector<std::array<long long, 3>> tail;  // (sum, b3, b4)
  tail.reserve(bs[2].size() * bs[3].size());
  for (long long b3 : bs[2])
    for (long long b4 : bs[3]) tail.push_back({b3 + b4, b3, b4});
  std::sort(tail.begin(), tail.end());

  std::vector<long long> b1s = bs[0], b2s = bs[1];
  std::sort(b1s.begin(), b1s.end());
  std::sort(b2s.begin(), b2s.end());
  for (long long b1 : b1s)
    for (long long b2 : b2s) {
      long long need = -(b1 + b2);
      auto it = std::lower_bound(tail.begin(), tail.end(),
                                 std::array<long long, 3>{need, INT64_MIN, INT64_MIN});
      if (it != tail.end() && (*it)[0] == need)
        return std::array<long long, 4>{b1, b2, (*it)[1], (*it)[2]};
    }
  return std::nullopt;
}

// --- checkers ----------------------------------------------------------------

bool check_kap(const IntSet& a, int k, const ApWitness& w) {
  if (w.step <= 0) return false;
  for (int t = 0; t < k; ++t)
    if (!a.contains(w.start + (long long)t * w.step)) return false;
  return true;
}

bool check_multichromatic_kap(const std::vector<IntSet>& as, const ApWitness& w) {
  for (size_t t = 0; t < as.size(); ++t)
    if (!as[t].contains(w.start + (long long)t * w.step)) return false;
  return true;
}

bool check_square(const BinaryMatrix& m, const CornerWitness& w) {
  return w.k > 0 && m.get(w.i, w.j) && m.get(w.i + w.k, w.j) && m.get(w.i + w.k, w.j + w.k) &&
         m.get(w.i, w.j + w.k);
}

bool check_multichromatic_square(const std::array<BinaryMatrix, 4>& ms, const CornerWitness& w) {
  return ms[0].get(w.i, w.j) && ms[1].get(w.i + w.k, w.j) && ms[2].get(w.i + w.k, w.j + w.k) &&
         ms[3].get(w.i, w.j + w.k);
}

bool check_multichromatic_T(const std::array<BinaryMatrix, 4>& ms, const CornerWitness& w) {
  return ms[0].get(w.i, w.j + w.k) && ms[1].get(w.i, w.j - w.k) && ms[2].get(w.i + w.k, w.j) &&
         ms[3].get(w.i, w.j);
}

bool check_hyperclique(const Hypergraph& h, const std::vector<int>& vs) {
  if ((int)vs.size() != h.k) return false;
  for (int omit = 0; omit < h.k; ++omit) {
    std::vector<int> e;
    for (int t = 0; t < h.k; ++t)
      if (t != omit) e.push_back(vs[t]);
    bool found = false;
    for (const auto& f : h.edges[omit])
      if (f == e) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

}  // namespace magma::detect

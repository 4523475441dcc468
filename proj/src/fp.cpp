#include "magma/fp.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace magma::fp {

uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

uint64_t invmod(uint64_t a, uint64_t p) { return powmod(a % p, p - 2, p); }

bool is_probable_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) d >>= 1, ++r;
  // deterministic Miller-Rabin witness set for 64-bit integers
  for (uint64_t w : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod(w % n, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Matrix mm_serial(const Matrix& A, const Matrix& B, uint64_t p) {
  if (A.cols != B.rows) throw std::invalid_argument("mm: dimension mismatch");
  Matrix C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int k = 0; k < A.cols; ++k) {
      uint64_t aik = A.at(i, k);
      if (!aik) continue;
      for (int j = 0; j < B.cols; ++j) {
        C.at(i, j) = addmod(C.at(i, j), mulmod(aik, B.at(k, j), p), p);
      }
    }
  }
  return C;
}

namespace {

// Accumulates raw 122-bit products and reduces once per k-chunk. Chunk of 32
// keeps the 128-bit accumulator clear of overflow (32 * 2^122 < 2^128).
constexpr int kChunk = 32;
constexpr int kTile = 64;

void mm_blocked(const Matrix& A, const Matrix& B, Matrix& C, uint64_t p) {
  int n = A.rows, m = B.cols, kk = A.cols;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i0 = 0; i0 < n; i0 += kTile) {
    int ihi = std::min(i0 + kTile, n);
    std::vector<unsigned __int128> acc(kTile);
    for (int j0 = 0; j0 < m; j0 += kTile) {
      int jhi = std::min(j0 + kTile, m);
      int w = jhi - j0;
      for (int i = i0; i < ihi; ++i) {
        std::fill(acc.begin(), acc.begin() + w, (unsigned __int128)0);
        for (int k0 = 0; k0 < kk; k0 += kChunk) {
          int khi = std::min(k0 + kChunk, kk);
          for (int k = k0; k < khi; ++k) {
            uint64_t aik = A.at(i, k);
            if (!aik) continue;
            const uint64_t* brow = &B.a[(size_t)k * m + j0];
            for (int j = 0; j < w; ++j) acc[j] += (unsigned __int128)aik * brow[j];
          }
          for (int j = 0; j < w; ++j) acc[j] = reduce128(acc[j], p);
        }
        for (int j = 0; j < w; ++j) C.at(i, j0 + j) = reduce128(acc[j], p);
      }
    }
  }
}

Matrix add_mat(const Matrix& A, const Matrix& B, uint64_t p) {
  Matrix C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = addmod(A.a[i], B.a[i], p);
  return C;
}

Matrix sub_mat(const Matrix& A, const Matrix& B, uint64_t p) {
  Matrix C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = submod(A.a[i], B.a[i], p);
  return C;
}

Matrix quadrant(const Matrix& A, int qi, int qj, int h) {
  Matrix Q(h, h);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) {
      int si = qi * h + i, sj = qj * h + j;
      Q.at(i, j) = (si < A.rows && sj < A.cols) ? A.at(si, sj) : 0;
    }
  return Q;
}

Matrix strassen(const Matrix& A, const Matrix& B, uint64_t p, int threshold) {
  int n = A.rows;
  if (n <= threshold || (n & 1)) {
    Matrix C(n, n);
    mm_blocked(A, B, C, p);
    return C;
  }
  int h = n / 2;
  Matrix a11 = quadrant(A, 0, 0, h), a12 = quadrant(A, 0, 1, h);
  Matrix a21 = quadrant(A, 1, 0, h), a22 = quadrant(A, 1, 1, h);
  Matrix b11 = quadrant(B, 0, 0, h), b12 = quadrant(B, 0, 1, h);
  Matrix b21 = quadrant(B, 1, 0, h), b22 = quadrant(B, 1, 1, h);

  Matrix m1 = strassen(add_mat(a11, a22, p), add_mat(b11, b22, p), p, threshold);
  Matrix m2 = strassen(add_mat(a21, a22, p), b11, p, threshold);
  Matrix m3 = strassen(a11, sub_mat(b12, b22, p), p, threshold);
  Matrix m4 = strassen(a22, sub_mat(b21, b11, p), p, threshold);
  Matrix m5 = strassen(add_mat(a11, a12, p), b22, p, threshold);
  Matrix m6 = strassen(sub_mat(a21, a11, p), add_mat(b11, b12, p), p, threshold);
  Matrix m7 = strassen(sub_mat(a12, a22, p), add_mat(b21, b22, p), p, threshold);

  Matrix C(n, n);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) {
      uint64_t c11 = addmod(submod(addmod(m1.at(i, j), m4.at(i, j), p), m5.at(i, j), p), m7.at(i, j), p);
      uint64_t c12 = addmod(m3.at(i, j), m5.at(i, j), p);
      uint64_t c21 = addmod(m2.at(i, j), m4.at(i, j), p);
      uint64_t c22 = addmod(addmod(submod(m1.at(i, j), m2.at(i, j), p), m3.at(i, j), p), m6.at(i, j), p);
      C.at(i, j) = c11;
      C.at(i, j + h) = c12;
      C.at(i + h, j) = c21;
      C.at(i + h, j + h) = c22;
    }
  return C;
}

}  // namespace

Matrix mm(const Matrix& A, const Matrix& B, uint64_t p, const MatMulConfig& cfg) {
  if (A.cols != B.rows) throw std::invalid_argument("mm: dimension mismatch");
  if (cfg.strassen_threshold > 0 && A.rows == A.cols && B.rows == B.cols &&
      A.rows >= cfg.strassen_threshold) {
    // pad to even size once at top level; recursion handles the rest
    int n = A.rows + (A.rows & 1);
    if (n != A.rows) {
      Matrix Ap(n, n), Bp(n, n);
      for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) Ap.at(i, j) = A.at(i, j), Bp.at(i, j) = B.at(i, j);
      Matrix Cp = strassen(Ap, Bp, p, cfg.strassen_threshold);
      Matrix C(A.rows, A.rows);
      for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.rows; ++j) C.at(i, j) = Cp.at(i, j);
      return C;
    }
    return strassen(A, B, p, cfg.strassen_threshold);
  }
  Matrix C(A.rows, B.cols);
  mm_blocked(A, B, C, p);
  return C;
}

std::vector<uint64_t> random_vector(Rng& rng, int n, uint64_t p) {
  std::vector<uint64_t> v(n);
  for (auto& x : v) x = rng.below(p);
  return v;
}

}  // namespace magma::fp

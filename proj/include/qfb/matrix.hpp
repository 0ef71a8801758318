#pragma once

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qfb/field.hpp"

namespace qfb {

/// Dense row-major matrix over an exact scalar K. 0xn and nx0 are legal and
/// act as zero maps; all elimination is deterministic (pivot = first nonzero
/// row in column order), so results are bit-reproducible.
template <class K>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<K> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(size_t(r) * c, scalar_zero<K>()) {}
  Mat(std::initializer_list<std::initializer_list<long>> init) {
    rows = int(init.size());
    cols = rows ? int(init.begin()->size()) : 0;
    a.reserve(size_t(rows) * cols);
    for (auto& row : init) {
      if (int(row.size()) != cols) throw std::invalid_argument("ragged initializer");
      for (long x : row) a.push_back(K(x));
    }
  }

  K& at(int i, int j) { return a[size_t(i) * cols + j]; }
  const K& at(int i, int j) const { return a[size_t(i) * cols + j]; }

  static Mat zero(int r, int c) { return Mat(r, c); }
  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; i++) m.at(i, i) = scalar_one<K>();
    return m;
  }

  bool is_zero() const {
    for (auto& x : a)
      if (!qfb::is_zero(x)) return false;
    return true;
  }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }

  Mat transpose() const {
    Mat t(cols, rows);
    for (int i = 0; i < rows; i++)
      for (int j = 0; j < cols; j++) t.at(j, i) = at(i, j);
    return t;
  }

  friend Mat operator*(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul shape mismatch");
    Mat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; i++)
      for (int k = 0; k < x.cols; k++) {
        const K& xik = x.at(i, k);
        if (qfb::is_zero(xik)) continue;
        for (int j = 0; j < y.cols; j++) z.at(i, j) += xik * y.at(k, j);
      }
    return z;
  }
  friend Mat operator+(const Mat& x, const Mat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matadd shape mismatch");
    Mat z = x;
    for (size_t i = 0; i < z.a.size(); i++) z.a[i] += y.a[i];
    return z;
  }
  friend Mat operator-(const Mat& x, const Mat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matsub shape mismatch");
    Mat z = x;
    for (size_t i = 0; i < z.a.size(); i++) z.a[i] -= y.a[i];
    return z;
  }
  Mat operator-() const {
    Mat z = *this;
    for (auto& x : z.a) x = -x;
    return z;
  }
  friend Mat operator*(const K& c, const Mat& y) {
    Mat z = y;
    for (auto& x : z.a) x = c * x;
    return z;
  }

  Mat col(int j) const { return cols_selected({j}); }
  Mat cols_selected(const std::vector<int>& idx) const {
    Mat z(rows, int(idx.size()));
    for (int i = 0; i < rows; i++)
      for (int j = 0; j < int(idx.size()); j++) z.at(i, j) = at(i, idx[j]);
    return z;
  }
  Mat rows_selected(const std::vector<int>& idx) const {
    Mat z(int(idx.size()), cols);
    for (int i = 0; i < int(idx.size()); i++)
      for (int j = 0; j < cols; j++) z.at(i, j) = at(idx[i], j);
    return z;
  }
};

template <class K>
Mat<K> hstack(const Mat<K>& x, const Mat<K>& y) {
  if (x.rows != y.rows) throw std::invalid_argument("hstack shape mismatch");
  Mat<K> z(x.rows, x.cols + y.cols);
  for (int i = 0; i < x.rows; i++) {
    for (int j = 0; j < x.cols; j++) z.at(i, j) = x.at(i, j);
    for (int j = 0; j < y.cols; j++) z.at(i, x.cols + j) = y.at(i, j);
  }
  return z;
}

template <class K>
Mat<K> vstack(const Mat<K>& x, const Mat<K>& y) {
  if (x.cols != y.cols) throw std::invalid_argument("vstack shape mismatch");
  Mat<K> z(x.rows + y.rows, x.cols);
  for (int i = 0; i < x.rows; i++)
    for (int j = 0; j < x.cols; j++) z.at(i, j) = x.at(i, j);
  for (int i = 0; i < y.rows; i++)
    for (int j = 0; j < x.cols; j++) z.at(x.rows + i, j) = y.at(i, j);
  return z;
}

template <class K>
Mat<K> block_diag(const std::vector<Mat<K>>& blocks) {
  int r = 0, c = 0;
  for (auto& b : blocks) r += b.rows, c += b.cols;
  Mat<K> z(r, c);
  int ro = 0, co = 0;
  for (auto& b : blocks) {
    for (int i = 0; i < b.rows; i++)
      for (int j = 0; j < b.cols; j++) z.at(ro + i, co + j) = b.at(i, j);
    ro += b.rows, co += b.cols;
  }
  return z;
}

/// Reduced row echelon form with pivot bookkeeping.
template <class K>
struct Echelon {
  Mat<K> r;
  std::vector<int> pivot_cols;
  int rank = 0;
};

template <class K>
Echelon<K> rref(Mat<K> m) {
  Echelon<K> e;
  int pr = 0;
  for (int c = 0; c < m.cols && pr < m.rows; c++) {
    int piv = -1;
    for (int i = pr; i < m.rows; i++)
      if (!is_zero(m.at(i, c))) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != pr)
      for (int j = 0; j < m.cols; j++) std::swap(m.at(piv, j), m.at(pr, j));
    K inv = scalar_one<K>() / m.at(pr, c);
    for (int j = c; j < m.cols; j++) m.at(pr, j) *= inv;
    for (int i = 0; i < m.rows; i++) {
      if (i == pr || is_zero(m.at(i, c))) continue;
      K f = m.at(i, c);
      for (int j = c; j < m.cols; j++) m.at(i, j) -= f * m.at(pr, j);
    }
    e.pivot_cols.push_back(c);
    pr++;
  }
  e.rank = pr;
  e.r = std::move(m);
  return e;
}

template <class K>
int rank(const Mat<K>& m) {
  return rref(m).rank;
}

/// Columns form a basis of ker(m); count = cols - rank(m).
template <class K>
Mat<K> kernel_basis(const Mat<K>& m) {
  Echelon<K> e = rref(m);
  std::vector<bool> is_piv(m.cols, false);
  for (int c : e.pivot_cols) is_piv[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < m.cols; c++)
    if (!is_piv[c]) free_cols.push_back(c);
  Mat<K> kb(m.cols, int(free_cols.size()));
  for (int j = 0; j < int(free_cols.size()); j++) {
    int f = free_cols[j];
    kb.at(f, j) = scalar_one<K>();
    for (int i = 0; i < e.rank; i++) kb.at(e.pivot_cols[i], j) = -e.r.at(i, f);
  }
  return kb;
}

template <class K>
struct SolveResult {
  std::optional<Mat<K>> particular;  // empty: inconsistent
  Mat<K> kernel;                     // basis of ker(a), shared by all columns of b
};

/// All solutions of a·X = b: particular solution plus kernel basis of a.
template <class K>
SolveResult<K> solve_all(const Mat<K>& a, const Mat<K>& b) {
  if (a.rows != b.rows) throw std::invalid_argument("solve_all shape mismatch");
  SolveResult<K> res;
  res.kernel = kernel_basis(a);
  Echelon<K> e = rref(hstack(a, b));
  for (int i = 0; i < e.rank; i++)
    if (e.pivot_cols[i] >= a.cols) return res;  // pivot escaped into the rhs: inconsistent
  Mat<K> x(a.cols, b.cols);
  for (int i = 0; i < e.rank; i++)
    for (int j = 0; j < b.cols; j++) x.at(e.pivot_cols[i], j) = e.r.at(i, a.cols + j);
  res.particular = std::move(x);
  return res;
}

template <class K>
std::optional<Mat<K>> solve(const Mat<K>& a, const Mat<K>& b) {
  return solve_all(a, b).particular;
}

template <class K>
std::optional<Mat<K>> inverse(const Mat<K>& m) {
  if (m.rows != m.cols) return std::nullopt;
  if (rank(m) != m.rows) return std::nullopt;
  return solve(m, Mat<K>::identity(m.rows));
}

/// Column span comparison: every column of x lies in the column span of y.
template <class K>
bool cols_contained_in_span(const Mat<K>& x, const Mat<K>& y) {
  if (x.rows != y.rows) throw std::invalid_argument("span shape mismatch");
  return solve(y, x).has_value();
}

}  // namespace qfb

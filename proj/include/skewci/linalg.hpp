// Dense linear algebra over Q(zeta_m).
#pragma once

#include <optional>
#include <vector>

#include "scalars.hpp"

namespace skewci {

using Vec = std::vector<Cyc>;

inline Vec zero_vec(int m, int n) { return Vec(n, Cyc(m)); }

inline bool is_zero_vec(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

struct Mat {
  int m = 1;
  int rows = 0, cols = 0;
  std::vector<Cyc> a;
  Mat() = default;
  Mat(int m_, int r, int c) : m(m_), rows(r), cols(c), a(size_t(r) * c, Cyc(m_)) {}
  Cyc& at(int i, int j) { return a[size_t(i) * cols + j]; }
  const Cyc& at(int i, int j) const { return a[size_t(i) * cols + j]; }
  Vec col(int j) const {
    Vec v;
    v.reserve(rows);
    for (int i = 0; i < rows; ++i) v.push_back(at(i, j));
    return v;
  }
  Vec apply(const Vec& x) const {
    Vec y = zero_vec(m, rows);
    for (int j = 0; j < cols; ++j) {
      if (x[j].is_zero()) continue;
      for (int i = 0; i < rows; ++i)
        if (!at(i, j).is_zero()) y[i] += at(i, j) * x[j];
    }
    return y;
  }
};

inline Mat mat_mul(const Mat& A, const Mat& B) {
  Mat C(A.m, A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      if (A.at(i, k).is_zero()) continue;
      for (int j = 0; j < B.cols; ++j)
        if (!B.at(k, j).is_zero()) C.at(i, j) += A.at(i, k) * B.at(k, j);
    }
  return C;
}

// Incrementally maintained span with a semi-reduced echelon basis.
class Span {
 public:
  Span(int m, int n) : m_(m), n_(n) {}
  int dim() const { return int(rows_.size()); }
  int ambient() const { return n_; }
  const std::vector<Vec>& basis() const { return rows_; }
  const std::vector<int>& pivots() const { return piv_; }

  Vec reduce(Vec v) const {
    for (size_t k = 0; k < rows_.size(); ++k) {
      const Cyc& c = v[piv_[k]];
      if (c.is_zero()) continue;
      Cyc f = c;
      const Vec& r = rows_[k];
      for (int j = 0; j < n_; ++j)
        if (!r[j].is_zero()) v[j] -= f * r[j];
    }
    return v;
  }
  bool contains(const Vec& v) const { return is_zero_vec(reduce(v)); }
  bool add(const Vec& v) {
    Vec r = reduce(v);
    int p = -1;
    for (int j = 0; j < n_; ++j)
      if (!r[j].is_zero()) {
        p = j;
        break;
      }
    if (p < 0) return false;
    Cyc inv = r[p].inverse();
    for (auto& x : r)
      if (!x.is_zero()) x *= inv;
    rows_.push_back(std::move(r));
    piv_.push_back(p);
    return true;
  }

 private:
  int m_, n_;
  std::vector<Vec> rows_;
  std::vector<int> piv_;
};

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<int> rref(Mat& A) {
  std::vector<int> piv;
  int row = 0;
  for (int col = 0; col < A.cols && row < A.rows; ++col) {
    int p = row;
    while (p < A.rows && A.at(p, col).is_zero()) ++p;
    if (p == A.rows) continue;
    if (p != row)
      for (int j = 0; j < A.cols; ++j) std::swap(A.at(p, j), A.at(row, j));
    Cyc inv = A.at(row, col).inverse();
    for (int j = col; j < A.cols; ++j)
      if (!A.at(row, j).is_zero()) A.at(row, j) *= inv;
    for (int r = 0; r < A.rows; ++r) {
      if (r == row || A.at(r, col).is_zero()) continue;
      Cyc f = A.at(r, col);
      for (int j = col; j < A.cols; ++j)
        if (!A.at(row, j).is_zero()) A.at(r, j) -= f * A.at(row, j);
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

inline int rank(Mat A) {
  if (A.rows == 0 || A.cols == 0) return 0;
  return int(rref(A).size());
}

// Basis of {x : A x = 0}.
inline std::vector<Vec> kernel(Mat A) {
  std::vector<Vec> out;
  if (A.cols == 0) return out;
  if (A.rows == 0) {
    for (int j = 0; j < A.cols; ++j) {
      Vec v = zero_vec(A.m, A.cols);
      v[j] = Cyc(A.m, Rat(1));
      out.push_back(v);
    }
    return out;
  }
  auto piv = rref(A);
  std::vector<int> is_piv(A.cols, -1);
  for (size_t r = 0; r < piv.size(); ++r) is_piv[piv[r]] = int(r);
  for (int f = 0; f < A.cols; ++f) {
    if (is_piv[f] >= 0) continue;
    Vec v = zero_vec(A.m, A.cols);
    v[f] = Cyc(A.m, Rat(1));
    for (size_t r = 0; r < piv.size(); ++r)
      if (!A.at(int(r), f).is_zero()) v[piv[r]] = -A.at(int(r), f);
    out.push_back(std::move(v));
  }
  return out;
}

// Some solution of A x = b, if one exists.
inline std::optional<Vec> solve(const Mat& A, const Vec& b) {
  Mat Ab(A.m, A.rows, A.cols + 1);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) Ab.at(i, j) = A.at(i, j);
    Ab.at(i, A.cols) = b[i];
  }
  auto piv = rref(Ab);
  if (!piv.empty() && piv.back() == A.cols) return std::nullopt;
  Vec x = zero_vec(A.m, A.cols);
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = Ab.at(int(r), A.cols);
  return x;
}

}  // namespace skewci

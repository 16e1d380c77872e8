#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "zerolab/errors.h"
#include "zerolab/ratpoly.h"

namespace zerolab {

// Dense row-major matrix over an exact ring (Rational, Poly or RatFn).
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), d_(size_t(rows) * cols, T(0)) {
    if (rows < 0 || cols < 0) throw DomainError("negative matrix dimension");
  }
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = static_cast<int>(init.size());
    cols_ = rows_ ? static_cast<int>(init.begin()->size()) : 0;
    for (const auto& row : init) {
      if (static_cast<int>(row.size()) != cols_) throw DomainError("ragged matrix literal");
      for (const auto& v : row) d_.push_back(v);
    }
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  T& operator()(int i, int j) { return d_[size_t(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return d_[size_t(i) * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block(int r0, int c0, int nr, int nc) const {
    if (r0 < 0 || c0 < 0 || r0 + nr > rows_ || c0 + nc > cols_)
      throw DomainError("block out of range");
    Matrix b(nr, nc);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }
  void set_block(int r0, int c0, const Matrix& b) {
    if (r0 < 0 || c0 < 0 || r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
      throw DomainError("block out of range");
    for (int i = 0; i < b.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
  Matrix select(const std::vector<int>& rs, const std::vector<int>& cs) const {
    Matrix b(static_cast<int>(rs.size()), static_cast<int>(cs.size()));
    for (size_t i = 0; i < rs.size(); ++i)
      for (size_t j = 0; j < cs.size(); ++j) {
        if (rs[i] < 0 || rs[i] >= rows_ || cs[j] < 0 || cs[j] >= cols_)
          throw DomainError("index out of range");
        b(int(i), int(j)) = (*this)(rs[i], cs[j]);
      }
    return b;
  }
  Matrix row(int i) const { return block(i, 0, 1, cols_); }
  Matrix col(int j) const { return block(0, j, rows_, 1); }

  bool is_zero() const {
    for (const auto& v : d_)
      if (!(v == T(0))) return false;
    return true;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (size_t k = 0; k < d_.size(); ++k) d_[k] += o.d_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (size_t k = 0; k < d_.size(); ++k) d_[k] -= o.d_[k];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  Matrix operator-() const {
    Matrix r = *this;
    for (auto& v : r.d_) v = -v;
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const T& x = a(i, k);
        if (x == T(0)) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
      }
    return c;
  }
  friend Matrix operator*(const T& k, Matrix a) {
    for (auto& v : a.d_) v = k * v;
    return a;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.d_ == b.d_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix dimension mismatch");
  }
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> d_;
};

using QMat = Matrix<Rational>;
using PMat = Matrix<Poly>;
using RMat = Matrix<RatFn>;

template <typename T>
Matrix<T> hcat(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() && !a.empty() && !b.empty())
    throw DomainError("hcat row mismatch");
  int r = a.empty() ? b.rows() : a.rows();
  if (a.cols() == 0) r = b.rows();
  Matrix<T> m(r, a.cols() + b.cols());
  if (a.cols()) m.set_block(0, 0, a);
  if (b.cols()) m.set_block(0, a.cols(), b);
  return m;
}

template <typename T>
Matrix<T> vcat(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.cols() && !a.empty() && !b.empty())
    throw DomainError("vcat column mismatch");
  int c = a.rows() == 0 ? b.cols() : a.cols();
  Matrix<T> m(a.rows() + b.rows(), c);
  if (a.rows()) m.set_block(0, 0, a);
  if (b.rows()) m.set_block(a.rows(), 0, b);
  return m;
}

// ---- exact linear algebra over Q

struct Rref {
  QMat R;
  std::vector<int> pivots;
};
Rref rref(const QMat& a);
int rank(const QMat& a);
Rational det(const QMat& a);
QMat inverse(const QMat& a);  // throws DomainError when singular
QMat solve(const QMat& a, const QMat& b);  // square nonsingular a
// Columns span the right null space.
QMat nullspace(const QMat& a);
QMat power(const QMat& a, int k);

// det(sI - A) by Faddeev-LeVerrier; adj(sI - A) = sum_k s^k adj_k.
struct Resolvent {
  Poly charpoly;
  std::vector<QMat> adj;  // adj[k] multiplies s^k, k = 0..n-1
};
Resolvent resolvent(const QMat& a);
Poly charpoly(const QMat& a);
// Companion matrix of a monic polynomial: ones on the superdiagonal and
// -a_0 .. -a_{n-1} on the last row.
QMat companion(const Poly& monic);

// ---- conversions

PMat to_poly(const QMat& a);
RMat to_ratfn(const PMat& a);
// sI - A
PMat s_minus(const QMat& a);
// Matrix coefficient of s^k of a polynomial matrix.
QMat coeff(const PMat& p, int k);
int degree(const PMat& p);
PMat eval_poly_matrix(const std::vector<QMat>& coeffs);  // sum coeffs[k] s^k
QMat eval(const PMat& p, const Rational& s);
Eigen::MatrixXcd eval(const PMat& p, std::complex<double> s);

Eigen::MatrixXd to_eigen(const QMat& a);
QMat from_eigen(const Eigen::MatrixXd& a);  // exact image of each double

std::string to_string(const QMat& a);

// Numeric rank with tolerance sigma_max * max(m, n) * rel.
int numeric_rank(const Eigen::MatrixXcd& a, double rel = 1e-10);
int numeric_rank(const Eigen::MatrixXd& a, double rel = 1e-10);

}  // namespace zerolab

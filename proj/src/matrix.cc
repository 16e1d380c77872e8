#include "zerolab/matrix.h"

#include <sstream>

namespace zerolab {

Rref rref(const QMat& a) {
  Rref out{a, {}};
  QMat& m = out.R;
  int row = 0;
  for (int c = 0; c < m.cols() && row < m.rows(); ++c) {
    int p = -1;
    for (int i = row; i < m.rows(); ++i) {
      if (m(i, c) != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    if (p != row) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    }
    Rational inv = 1 / m(row, c);
    for (int j = c; j < m.cols(); ++j) m(row, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (int j = c; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    out.pivots.push_back(c);
    ++row;
  }
  return out;
}

int rank(const QMat& a) { return static_cast<int>(rref(a).pivots.size()); }

Rational det(const QMat& a) {
  if (a.rows() != a.cols()) throw DomainError("det of non-square matrix");
  QMat m = a;
  const int n = m.rows();
  Rational d = 1;
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i) {
      if (m(i, c) != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) return 0;
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) / m(c, c);
      for (int j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

QMat solve(const QMat& a, const QMat& b) {
  if (a.rows() != a.cols() || b.rows() != a.rows()) throw DomainError("solve dimension mismatch");
  const int n = a.rows();
  Rref r = rref(hcat(a, b));
  if (static_cast<int>(r.pivots.size()) < n || (n > 0 && r.pivots[n - 1] != n - 1))
    throw DomainError("singular matrix");
  return r.R.block(0, n, n, b.cols());
}

QMat inverse(const QMat& a) { return solve(a, QMat::identity(a.rows())); }

QMat nullspace(const QMat& a) {
  Rref r = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (int p : r.pivots) is_pivot[p] = true;
  std::vector<int> free;
  for (int j = 0; j < a.cols(); ++j)
    if (!is_pivot[j]) free.push_back(j);
  QMat ns(a.cols(), static_cast<int>(free.size()));
  for (size_t k = 0; k < free.size(); ++k) {
    ns(free[k], int(k)) = 1;
    for (size_t i = 0; i < r.pivots.size(); ++i) ns(r.pivots[i], int(k)) = -r.R(int(i), free[k]);
  }
  return ns;
}

QMat power(const QMat& a, int k) {
  QMat r = QMat::identity(a.rows());
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

Resolvent resolvent(const QMat& a) {
  if (a.rows() != a.cols()) throw DomainError("resolvent of non-square matrix");
  const int n = a.rows();
  // Faddeev-LeVerrier: M_1 = I, c_{n-k} = -tr(A M_k)/k, M_{k+1} = A M_k + c_{n-k} I.
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  std::vector<QMat> adj(n);
  QMat mk = QMat::identity(n);
  for (int k = 1; k <= n; ++k) {
    adj[n - k] = mk;
    QMat am = a * mk;
    Rational tr = 0;
    for (int i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / k;
    mk = am;
    for (int i = 0; i < n; ++i) mk(i, i) += c[n - k];
  }
  return {Poly(c), adj};
}

Poly charpoly(const QMat& a) { return resolvent(a).charpoly; }

QMat companion(const Poly& p) {
  if (p.degree() < 1) return QMat();
  if (p.lead() != 1) throw DomainError("companion of non-monic polynomial");
  const int n = p.degree();
  QMat m(n, n);
  for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = 1;
  for (int j = 0; j < n; ++j) m(n - 1, j) = -p.coeff(j);
  return m;
}

PMat to_poly(const QMat& a) {
  PMat p(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) p(i, j) = Poly(a(i, j));
  return p;
}

RMat to_ratfn(const PMat& a) {
  RMat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = RatFn(a(i, j));
  return r;
}

PMat s_minus(const QMat& a) {
  PMat p = -to_poly(a);
  for (int i = 0; i < a.rows(); ++i) p(i, i) += Poly::s();
  return p;
}

QMat coeff(const PMat& p, int k) {
  QMat c(p.rows(), p.cols());
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) c(i, j) = p(i, j).coeff(k);
  return c;
}

int degree(const PMat& p) {
  int d = -1;
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) d = std::max(d, p(i, j).degree());
  return d;
}

PMat eval_poly_matrix(const std::vector<QMat>& coeffs) {
  if (coeffs.empty()) return PMat();
  PMat p(coeffs[0].rows(), coeffs[0].cols());
  for (size_t k = 0; k < coeffs.size(); ++k)
    for (int i = 0; i < p.rows(); ++i)
      for (int j = 0; j < p.cols(); ++j)
        p(i, j) += Poly::monomial(coeffs[k](i, j), static_cast<int>(k));
  return p;
}

QMat eval(const PMat& p, const Rational& s) {
  QMat v(p.rows(), p.cols());
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) v(i, j) = p(i, j).eval(s);
  return v;
}

Eigen::MatrixXcd eval(const PMat& p, std::complex<double> s) {
  Eigen::MatrixXcd v(p.rows(), p.cols());
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) v(i, j) = p(i, j).eval(s);
  return v;
}

Eigen::MatrixXd to_eigen(const QMat& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j).get_d();
  return m;
}

QMat from_eigen(const Eigen::MatrixXd& a) {
  QMat q(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  for (int i = 0; i < q.rows(); ++i)
    for (int j = 0; j < q.cols(); ++j) q(i, j) = rational_from_double(a(i, j));
  return q;
}

std::string to_string(const QMat& a) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < a.rows(); ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < a.cols(); ++j) os << (j ? ", " : "") << a(i, j).get_str();
  }
  os << "]";
  return os.str();
}

int numeric_rank(const Eigen::MatrixXcd& a, double rel) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const auto& sv = svd.singularValues();
  double tol = sv(0) * std::max(a.rows(), a.cols()) * rel;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++r;
  return r;
}

int numeric_rank(const Eigen::MatrixXd& a, double rel) {
  return numeric_rank(Eigen::MatrixXcd(a.cast<std::complex<double>>()), rel);
}

}  // namespace zerolab

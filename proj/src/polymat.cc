#include "zerolab/polymat.h"

#include <omp.h>

#include <algorithm>
#include <string>

namespace zerolab {

namespace {

// Fraction-free elimination in place. Returns the rank; on return the
// last pivot is the determinant of the leading pivot minor up to sign.
int bareiss(PMat& m, int* sign) {
  const int rows = m.rows();
  const int cols = m.cols();
  Poly prev(1);
  int r = 0;
  *sign = 1;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i) {
      if (!m(i, c).is_zero()) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    if (p != r) {
      for (int j = 0; j < cols; ++j) std::swap(m(p, j), m(r, j));
      *sign = -*sign;
    }
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j) {
        m(i, j) = exact_div(m(r, c) * m(i, j) - m(i, c) * m(r, j), prev);
      }
      m(i, c) = Poly();
    }
    prev = m(r, c);
    ++r;
  }
  return r;
}

void check_minor_size(const PMat& p) {
  if (std::min(p.rows(), p.cols()) > kMaxMinorDim)
    throw SizeError("minor enumeration limited to min dimension " +
                    std::to_string(kMaxMinorDim));
}

}  // namespace

int normal_rank(const PMat& p) {
  PMat m = p;
  int sign = 1;
  return bareiss(m, &sign);
}

Poly det(const PMat& p) {
  if (p.rows() != p.cols()) throw DomainError("det of non-square polynomial matrix");
  if (p.rows() == 0) return Poly(1);
  PMat m = p;
  int sign = 1;
  int r = bareiss(m, &sign);
  if (r < p.rows()) return Poly();
  Poly d = m(p.rows() - 1, p.cols() - 1);
  return sign > 0 ? d : -d;
}

Poly minor(const PMat& p, const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.size() != cols.size()) throw DomainError("minor needs equal index counts");
  return det(p.select(rows, cols));
}

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<Poly> nonzero_minors_serial(const PMat& p, int k) {
  check_minor_size(p);
  auto rs = combinations(p.rows(), k);
  auto cs = combinations(p.cols(), k);
  std::vector<Poly> out;
  for (const auto& r : rs)
    for (const auto& c : cs) {
      Poly m = minor(p, r, c);
      if (!m.is_zero()) out.push_back(std::move(m));
    }
  return out;
}

std::vector<Poly> nonzero_minors(const PMat& p, int k) {
  check_minor_size(p);
  auto rs = combinations(p.rows(), k);
  auto cs = combinations(p.cols(), k);
  const long total = static_cast<long>(rs.size() * cs.size());
  std::vector<Poly> all(total);
#pragma omp parallel for schedule(dynamic, 4) if (total > 16)
  for (long t = 0; t < total; ++t) {
    all[t] = minor(p, rs[t / cs.size()], cs[t % cs.size()]);
  }
  std::vector<Poly> out;
  for (auto& m : all)
    if (!m.is_zero()) out.push_back(std::move(m));
  return out;
}

namespace {
Poly fold_gcd(const std::vector<Poly>& ms) {
  if (ms.empty()) return Poly();
  Poly g = ms[0].monic();
  for (size_t i = 1; i < ms.size() && g.degree() > 0; ++i) g = poly_gcd(g, ms[i]);
  return g;
}
}  // namespace

Poly minor_gcd(const PMat& p, int k) {
  if (k == 0) return Poly(1);
  return fold_gcd(nonzero_minors(p, k));
}

Poly minor_gcd_serial(const PMat& p, int k) {
  if (k == 0) return Poly(1);
  return fold_gcd(nonzero_minors_serial(p, k));
}

std::vector<Poly> invariant_polys_by_minors(const PMat& p) {
  std::vector<Poly> out;
  Poly prev(1);
  for (int k = 1; k <= std::min(p.rows(), p.cols()); ++k) {
    Poly d = minor_gcd(p, k);
    if (d.is_zero()) break;
    out.push_back(exact_div(d, prev).monic());
    prev = d;
  }
  return out;
}

namespace {

struct SmithWork {
  PMat S, UL, UR;

  void swap_rows(int a, int b) {
    if (a == b) return;
    for (int j = 0; j < S.cols(); ++j) std::swap(S(a, j), S(b, j));
    for (int j = 0; j < UL.cols(); ++j) std::swap(UL(a, j), UL(b, j));
  }
  void swap_cols(int a, int b) {
    if (a == b) return;
    for (int i = 0; i < S.rows(); ++i) std::swap(S(i, a), S(i, b));
    for (int i = 0; i < UR.rows(); ++i) std::swap(UR(i, a), UR(i, b));
  }
  // row_dst -= q * row_src
  void row_axpy(int dst, int src, const Poly& q) {
    for (int j = 0; j < S.cols(); ++j)
      if (!S(src, j).is_zero()) S(dst, j) -= q * S(src, j);
    for (int j = 0; j < UL.cols(); ++j)
      if (!UL(src, j).is_zero()) UL(dst, j) -= q * UL(src, j);
  }
  void col_axpy(int dst, int src, const Poly& q) {
    for (int i = 0; i < S.rows(); ++i)
      if (!S(i, src).is_zero()) S(i, dst) -= q * S(i, src);
    for (int i = 0; i < UR.rows(); ++i)
      if (!UR(i, src).is_zero()) UR(i, dst) -= q * UR(i, src);
  }
  void scale_row(int i, const Rational& k) {
    for (int j = 0; j < S.cols(); ++j) S(i, j) *= k;
    for (int j = 0; j < UL.cols(); ++j) UL(i, j) *= k;
  }
};

}  // namespace

SmithDecomposition smith_form(const PMat& p) {
  const int rows = p.rows();
  const int cols = p.cols();
  SmithWork w{p, PMat::identity(rows), PMat::identity(cols)};
  const int steps = std::min(rows, cols);
  for (int t = 0; t < steps; ++t) {
    while (true) {
      // Pivot: least degree in the trailing block, ties to smallest (row, col).
      int pr = -1, pc = -1, best = -1;
      for (int i = t; i < rows; ++i)
        for (int j = t; j < cols; ++j) {
          int d = w.S(i, j).degree();
          if (d >= 0 && (best < 0 || d < best)) {
            best = d;
            pr = i;
            pc = j;
          }
        }
      if (pr < 0) break;
      w.swap_rows(t, pr);
      w.swap_cols(t, pc);
      bool clean = true;
      const Poly piv = w.S(t, t);
      for (int i = t + 1; i < rows; ++i) {
        if (w.S(i, t).is_zero()) continue;
        w.row_axpy(i, t, divmod(w.S(i, t), piv).quot);
        if (!w.S(i, t).is_zero()) clean = false;
      }
      for (int j = t + 1; j < cols; ++j) {
        if (w.S(t, j).is_zero()) continue;
        w.col_axpy(j, t, divmod(w.S(t, j), piv).quot);
        if (!w.S(t, j).is_zero()) clean = false;
      }
      if (!clean) continue;
      // Pivot must divide the whole trailing block.
      int bad = -1;
      for (int i = t + 1; i < rows && bad < 0; ++i)
        for (int j = t + 1; j < cols; ++j)
          if (!divides(piv, w.S(i, j))) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      w.row_axpy(t, bad, Poly(-1));
    }
    if (w.S(t, t).is_zero()) break;
    w.scale_row(t, 1 / w.S(t, t).lead());
  }
  SmithDecomposition out{w.UL, w.S, w.UR, {}};
  for (int t = 0; t < steps; ++t) {
    if (out.S(t, t).is_zero()) break;
    out.invariant_polys.push_back(out.S(t, t));
  }
  return out;
}

Poly common_denominator(const RMat& w) {
  Poly phi(1);
  for (int i = 0; i < w.rows(); ++i)
    for (int j = 0; j < w.cols(); ++j) phi = poly_lcm(phi, w(i, j).den());
  return phi;
}

PMat numerator_matrix(const RMat& w, const Poly& phi) {
  PMat t(w.rows(), w.cols());
  for (int i = 0; i < w.rows(); ++i)
    for (int j = 0; j < w.cols(); ++j)
      t(i, j) = w(i, j).num() * exact_div(phi, w(i, j).den());
  return t;
}

SmithMcMillanDecomposition smith_mcmillan(const RMat& w) {
  Poly phi = common_denominator(w);
  SmithDecomposition sd = smith_form(numerator_matrix(w, phi));
  SmithMcMillanDecomposition out{phi, {}, {}, sd.U_L, sd.U_R};
  for (const auto& st : sd.invariant_polys) {
    RatFn f(st, phi);
    out.eps.push_back(f.num().monic());
    out.psi.push_back(f.den());
  }
  return out;
}

}  // namespace zerolab

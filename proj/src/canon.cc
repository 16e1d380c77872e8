#include "zerolab/canon.h"

#include <algorithm>
#include <numeric>

#include "zerolab/errors.h"

namespace zerolab {

std::string to_string(CanonKind k) {
  switch (k) {
    case CanonKind::Companion:
      return "companion";
    case CanonKind::Asseo:
      return "asseo";
    case CanonKind::Yokoyama:
      return "yokoyama";
  }
  return "?";
}

int CanonicalDecomposition::offset(int i) const {
  return std::accumulate(l_list.begin(), l_list.begin() + i, 0);
}

std::vector<int> chain_lengths(const QMat& A, const QMat& B) {
  const int n = A.rows();
  const int r = B.cols();
  std::vector<int> k(r, 0);
  std::vector<bool> alive(r, true);
  QMat basis(n, 0);
  QMat blk = B;
  for (int p = 0; p < n; ++p) {
    bool any = false;
    for (int j = 0; j < r; ++j) {
      if (!alive[j]) continue;
      QMat cand = hcat(basis, blk.col(j));
      if (rank(cand) > basis.cols()) {
        basis = cand;
        ++k[j];
        any = true;
      } else {
        alive[j] = false;
      }
    }
    if (!any) break;
    blk = A * blk;
  }
  return k;
}

QMat pad_left(const QMat& X, int width) {
  QMat out(X.rows(), width);
  out.set_block(0, width - X.cols(), X);
  return out;
}

CanonicalDecomposition to_yokoyama(const StateSpace& sys,
                                   const std::vector<Rational>& free_values) {
  const QMat& A = sys.A;
  const int n = sys.n();
  const int r = sys.r();
  if (rank(sys.B) != r) throw StructuralError("B must have full column rank");
  ControllabilityInfo ci = controllability(sys);
  if (!ci.controllable)
    throw StructuralError("pair (A, B) is not controllable: rank deficiency " +
                          std::to_string(n - ci.rank_Y));
  std::vector<int> k = chain_lengths(A, sys.B);
  // Sort columns by chain length so the longest chains come last.
  std::vector<int> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return k[a] < k[b]; });

  CanonicalDecomposition cd;
  cd.nu = ci.nu;
  cd.l_list = ci.l_list;
  const int nu = cd.nu;
  const auto& l = cd.l_list;
  cd.M = QMat(r, r);
  for (int j = 0; j < r; ++j) cd.M(order[j], j) = 1;

  // V_i: last l_{nu-i+1} columns of A^{i-1} B M.
  QMat BM = sys.B * cd.M;
  QMat V(n, 0);
  std::vector<int> vwidth(nu);
  QMat Ai = QMat::identity(n);
  for (int i = 1; i <= nu; ++i) {
    int w = l[nu - i];
    vwidth[i - 1] = w;
    QMat blk = Ai * BM;
    V = hcat(V, blk.block(0, r - w, n, w));
    Ai = A * Ai;
  }
  // Target rows for [P_nu; P_{nu-1}; ...; P_1] V.
  QMat S(n, n);
  std::vector<int> vstart(nu + 1, 0);
  for (int i = 0; i < nu; ++i) vstart[i + 1] = vstart[i] + vwidth[i];
  std::vector<int> prow(nu + 1, 0);  // rows of P_k
  for (int kk = 1; kk <= nu; ++kk) {
    int hi = l[nu - kk];
    int lo = nu - kk - 1 >= 0 ? l[nu - kk - 1] : 0;
    prow[kk] = hi - lo;
  }
  size_t fv = 0;
  int row = 0;
  std::vector<int> pstart(nu + 1, 0);
  for (int kk = nu; kk >= 1; --kk) {
    pstart[kk] = row;
    for (int t = 0; t < prow[kk]; ++t, ++row) {
      S(row, vstart[kk - 1] + t) = 1;
      for (int c = vstart[kk]; c < n; ++c) {
        if (fv < free_values.size()) S(row, c) = free_values[fv++];
      }
    }
  }
  if (fv < free_values.size()) throw DomainError("too many free values for the staircase");
  QMat P = S * inverse(V);

  // N_nu = P_nu; N_{k} = [P_k; N_{k+1} A].
  std::vector<QMat> Nk(nu + 2);
  Nk[nu] = P.block(pstart[nu], 0, prow[nu], n);
  for (int kk = nu - 1; kk >= 1; --kk) {
    Nk[kk] = vcat(P.block(pstart[kk], 0, prow[kk], n), Nk[kk + 1] * A);
  }
  cd.N = QMat(0, n);
  for (int kk = nu; kk >= 1; --kk) cd.N = vcat(cd.N, Nk[kk]);
  cd.N_inv = inverse(cd.N);
  cd.F = cd.N * A * cd.N_inv;
  cd.G = cd.N * BM;
  cd.G_nu = cd.G.block(n - r, 0, r, r);
  for (int i = 0; i < nu; ++i) cd.bottom_blocks.push_back(cd.F.block(n - r, cd.offset(i), r, l[i]));
  if (sys.l() > 0) {
    QMat CN = sys.C * cd.N_inv;
    for (int i = 0; i < nu; ++i) cd.C_blocks.push_back(CN.block(0, cd.offset(i), sys.l(), l[i]));
  }
  cd.kind = CanonKind::Yokoyama;
  return cd;
}

CanonicalDecomposition to_asseo(const StateSpace& sys) {
  ControllabilityInfo ci = controllability(sys);
  const int r = sys.r();
  if (!ci.controllable) throw StructuralError("pair (A, B) is not controllable");
  if (r == 0 || ci.nu * r != sys.n())
    throw StructuralError("Asseo form needs n = r nu; use the Yokoyama form instead");
  CanonicalDecomposition cd = to_yokoyama(sys);
  cd.kind = CanonKind::Asseo;
  return cd;
}

CanonicalDecomposition to_companion(const StateSpace& sys) {
  if (sys.r() != 1) throw StructuralError("companion form needs a single input");
  CanonicalDecomposition cd = to_yokoyama(sys);
  cd.kind = CanonKind::Companion;
  return cd;
}

QMat block_companion(const std::vector<QMat>& T) {
  const int p = static_cast<int>(T.size());
  if (p == 0) return QMat();
  const int r = T[0].rows();
  QMat out(r * p, r * p);
  for (int i = 0; i + 1 < p; ++i) out.set_block(i * r, (i + 1) * r, QMat::identity(r));
  for (int j = 0; j < p; ++j) out.set_block((p - 1) * r, j * r, -T[p - 1 - j]);
  return out;
}

QMat generalized_block_companion(const std::vector<int>& l, const std::vector<QMat>& bottom) {
  const int nu = static_cast<int>(l.size());
  const int n = std::accumulate(l.begin(), l.end(), 0);
  QMat out(n, n);
  int row = 0;
  for (int i = 0; i + 1 < nu; ++i) {
    // E_{i,i+1} = [O, I_{l_i}] is l_i x l_{i+1}.
    int col = row + l[i] + (l[i + 1] - l[i]);
    out.set_block(row, col, QMat::identity(l[i]));
    row += l[i];
  }
  int col = 0;
  for (int i = 0; i < nu; ++i) {
    out.set_block(n - l[nu - 1], col, bottom[i]);
    col += l[i];
  }
  return out;
}

PMat companion_matrix_polynomial(const std::vector<int>& l, const std::vector<QMat>& bottom) {
  const int nu = static_cast<int>(l.size());
  const int r = l.back();
  std::vector<QMat> coeffs(nu + 1, QMat(r, r));
  coeffs[nu] = QMat::identity(r);
  for (int i = 0; i < nu; ++i) coeffs[i] = -pad_left(bottom[i], r);
  return eval_poly_matrix(coeffs);
}

}  // namespace zerolab

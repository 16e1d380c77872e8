#include "zerolab/statespace.h"

#include "zerolab/errors.h"

namespace zerolab {

StateSpace::StateSpace(QMat a, QMat b, QMat c, QMat d)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
  if (A.rows() != A.cols()) throw DomainError("A must be square");
  if (B.rows() != A.rows()) throw DomainError("B must have n rows");
  if (C.cols() != A.rows()) throw DomainError("C must have n columns");
  if (D.rows() == 0 && D.cols() == 0) D = QMat(C.rows(), B.cols());
  if (D.rows() != C.rows() || D.cols() != B.cols()) throw DomainError("D must be l x r");
}

void StateSpace::require_strictly_proper(const std::string& what) const {
  if (has_feedthrough())
    throw PreconditionError(what + " assumes D = 0 (strictly proper system)");
}

StateSpace similarity(const StateSpace& sys, const QMat& N) {
  QMat Ni = inverse(N);
  return StateSpace(N * sys.A * Ni, N * sys.B, sys.C * Ni, sys.D);
}

StateSpace dual(const StateSpace& sys) {
  return StateSpace(sys.A.transpose(), sys.C.transpose(), sys.B.transpose(), sys.D.transpose());
}

QMat krylov(const QMat& A, const QMat& B, int k) {
  QMat out(A.rows(), 0);
  QMat blk = B;
  for (int i = 0; i < k; ++i) {
    out = hcat(out, blk);
    blk = A * blk;
  }
  return out;
}

namespace {

ControllabilityInfo kalman(const QMat& A, const QMat& B) {
  ControllabilityInfo info;
  const int n = A.rows();
  QMat Y(n, 0);
  QMat blk = B;
  int prev = 0;
  for (int k = 1; k <= std::max(n, 1); ++k) {
    Y = hcat(Y, blk);
    int rk = rank(Y);
    if (rk == prev) break;
    info.rank_steps.push_back(rk);
    prev = rk;
    blk = A * blk;
  }
  info.nu = static_cast<int>(info.rank_steps.size());
  info.rank_Y = prev;
  info.controllable = prev == n;
  // l_i = rank Y_{nu-i+1} - rank Y_{nu-i}
  for (int i = 1; i <= info.nu; ++i) {
    int hi = info.rank_steps[info.nu - i];
    int lo = info.nu - i - 1 >= 0 ? info.rank_steps[info.nu - i - 1] : 0;
    info.l_list.push_back(hi - lo);
  }
  return info;
}

}  // namespace

ControllabilityInfo controllability(const StateSpace& sys) { return kalman(sys.A, sys.B); }

ControllabilityInfo observability(const StateSpace& sys) {
  return kalman(sys.A.transpose(), sys.C.transpose());
}

StateSpace controllable_subsystem(const StateSpace& sys) {
  const int n = sys.n();
  QMat Y = krylov(sys.A, sys.B, n);
  Rref rr = rref(Y);
  const int k = static_cast<int>(rr.pivots.size());
  QMat T(n, 0);
  for (int p : rr.pivots) T = hcat(T, Y.col(p));
  for (int j = 0; j < n && T.cols() < n; ++j) {
    QMat e(n, 1);
    e(j, 0) = 1;
    QMat cand = hcat(T, e);
    if (rank(cand) > T.cols()) T = cand;
  }
  QMat Ti = inverse(T);
  QMat At = Ti * sys.A * T, Bt = Ti * sys.B, Ct = sys.C * T;
  return StateSpace(At.block(0, 0, k, k), Bt.block(0, 0, k, sys.r()),
                    Ct.block(0, 0, sys.l(), k), sys.D);
}

StateSpace minimal_realization(const StateSpace& sys) {
  StateSpace c = controllable_subsystem(sys);
  return dual(controllable_subsystem(dual(c)));
}

namespace {

int pbh_rank(const QMat& A, const QMat& X, bool stack_below, const PbhRank& ev,
             const std::optional<Rational>& exact, double tol) {
  const int n = A.rows();
  if (exact) {
    QMat m = -A;
    for (int i = 0; i < n; ++i) m(i, i) += *exact;
    return rank(stack_below ? vcat(m, X) : hcat(m, X));
  }
  Eigen::MatrixXcd m = -to_eigen(A).cast<std::complex<double>>();
  for (int i = 0; i < n; ++i) m(i, i) += ev.lambda;
  Eigen::MatrixXcd x = to_eigen(X).cast<std::complex<double>>();
  Eigen::MatrixXcd full;
  if (stack_below) {
    full.resize(n + x.rows(), n);
    full << m, x;
  } else {
    full.resize(n, n + x.cols());
    full << m, x;
  }
  return numeric_rank(full, tol);
}

}  // namespace

EigenStructure eigen_structure(const StateSpace& sys, double rank_tol) {
  EigenStructure es;
  es.charpoly = charpoly(sys.A);
  if (sys.n() == 0) return es;
  es.eigenvalues = roots(es.charpoly);
  for (const auto& root : es.eigenvalues.roots) {
    PbhRank p;
    p.lambda = root.value;
    p.multiplicity = root.multiplicity;
    std::optional<Rational> q;
    if (root.value.imag() == 0) q = rational_root_near(es.charpoly, root.value.real());
    p.exact = q.has_value();
    p.rank_controllable = pbh_rank(sys.A, sys.B, false, p, q, rank_tol);
    p.rank_observable = pbh_rank(sys.A, sys.C, true, p, q, rank_tol);
    es.pbh.push_back(p);
  }
  return es;
}

bool stabilizable(const StateSpace& sys, double rank_tol) {
  EigenStructure es = eigen_structure(sys, rank_tol);
  for (const auto& p : es.pbh)
    if (p.lambda.real() >= 0 && p.rank_controllable < sys.n()) return false;
  return true;
}

bool detectable(const StateSpace& sys, double rank_tol) {
  EigenStructure es = eigen_structure(sys, rank_tol);
  for (const auto& p : es.pbh)
    if (p.lambda.real() >= 0 && p.rank_observable < sys.n()) return false;
  return true;
}

bool stabilizable(const QMat& A, const QMat& B, double rank_tol) {
  return stabilizable(StateSpace(A, B, QMat(0, A.rows())), rank_tol);
}

}  // namespace zerolab

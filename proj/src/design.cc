#include "zerolab/design.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "zerolab/canon.h"
#include "zerolab/errors.h"
#include "zerolab/polymat.h"

namespace zerolab {

// ---- staircase matrices

namespace {

std::vector<int> block_offsets(const std::vector<int>& sizes) {
  std::vector<int> off(sizes.size() + 1, 0);
  for (size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];
  return off;
}

void check_sizes(const std::vector<int>& sizes) {
  for (size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] <= 0) throw DomainError("staircase block sizes must be positive");
    if (i && sizes[i] < sizes[i - 1]) throw DomainError("staircase block sizes must not decrease");
  }
}

}  // namespace

QMat staircase_matrix(const std::vector<int>& sizes, const QMat& bottom) {
  check_sizes(sizes);
  auto off = block_offsets(sizes);
  const int m = off.back();
  if (m == 0) return QMat(0, 0);
  const int last = sizes.back();
  if (bottom.rows() != last || bottom.cols() != m) throw DomainError("bottom rows have the wrong shape");
  QMat Z(m, m);
  for (size_t i = 0; i + 1 < sizes.size(); ++i)
    Z.set_block(off[i], off[i + 1] + sizes[i + 1] - sizes[i], QMat::identity(sizes[i]));
  Z.set_block(m - last, 0, bottom);
  return Z;
}

QMat chain_companion_rows(const std::vector<int>& sizes, const Poly& target) {
  check_sizes(sizes);
  auto off = block_offsets(sizes);
  const int m = off.back();
  const int k = static_cast<int>(sizes.size());
  if (target.degree() != m || target.lead() != 1)
    throw DomainError("target must be monic of degree equal to the staircase size");
  if (m == 0) return QMat(0, 0);
  const int last = sizes.back();
  const int base = m - last;

  // next[v]: column of the shift unit in row v (rows outside the last block).
  std::vector<int> next(m, -1);
  std::vector<bool> has_incoming(m, false);
  for (int i = 0; i + 1 < k; ++i)
    for (int t = 0; t < sizes[i]; ++t) {
      int c = off[i + 1] + sizes[i + 1] - sizes[i] + t;
      next[off[i] + t] = c;
      has_incoming[c] = true;
    }
  struct Chain {
    int start, end;
  };
  std::vector<Chain> chains;
  for (int v = 0; v < m; ++v) {
    if (has_incoming[v]) continue;
    int e = v;
    while (next[e] >= 0) e = next[e];
    chains.push_back({v, e});
  }
  // The chain ending in the last row closes the path; the rest keep their
  // start order.
  auto fin = std::find_if(chains.begin(), chains.end(), [&](const Chain& c) { return c.end == m - 1; });
  Chain closing = *fin;
  chains.erase(fin);
  chains.push_back(closing);

  QMat bottom(last, m);
  for (size_t i = 0; i + 1 < chains.size(); ++i) bottom(chains[i].end - base, chains[i + 1].start) = 1;

  // det(sI - Z) is affine in the last row.
  Poly p0 = charpoly(staircase_matrix(sizes, bottom));
  QMat M(m, m), rhs(m, 1);
  for (int j = 0; j < m; ++j) {
    QMat b = bottom;
    b(last - 1, j) = 1;
    Poly pj = charpoly(staircase_matrix(sizes, b)) - p0;
    for (int i = 0; i < m; ++i) M(i, j) = pj.coeff(i);
  }
  Poly diff = target - p0;
  for (int i = 0; i < m; ++i) rhs(i, 0) = diff.coeff(i);
  QMat c = solve(M, rhs);
  for (int j = 0; j < m; ++j) bottom(last - 1, j) = c(j, 0);
  return bottom;
}

// ---- analytical assignment

namespace {

void check_targets(const QMat& A, const std::vector<Rational>& targets) {
  Poly cp = charpoly(A);
  for (size_t i = 0; i < targets.size(); ++i) {
    for (size_t j = 0; j < i; ++j)
      if (targets[i] == targets[j]) throw DomainError("targets must be distinct");
    if (cp.eval(targets[i]) == 0)
      throw DomainError("target " + to_string(targets[i]) + " is an eigenvalue of A");
  }
}

}  // namespace

QMat assign_analytical(const QMat& A, const QMat& B, const std::vector<Rational>& targets) {
  const int n = A.rows(), r = B.cols();
  StateSpace sys(A, B, QMat(0, n));
  if (rank(B) != r) throw StructuralError("zero assignment needs rank B = r");
  if (!controllability(sys).controllable) throw StructuralError("zero assignment needs (A, B) controllable");
  if (static_cast<int>(targets.size()) != n - r)
    throw DomainError("zero assignment needs exactly n - r targets");
  check_targets(A, targets);
  CanonicalDecomposition cd = to_yokoyama(sys);
  if (cd.nu == 1) return cd.N;
  std::vector<int> sizes(cd.l_list.begin(), cd.l_list.end() - 1);
  QMat rows = chain_companion_rows(sizes, Poly::from_roots(targets));
  // C N^-1 = [-T*, I_r], T* = [O; rows].
  QMat CN(r, n);
  CN.set_block(r - rows.rows(), 0, -rows);
  CN.set_block(0, n - r, QMat::identity(r));
  return CN * cd.N;
}

// ---- gradient assignment

namespace {

Eigen::MatrixXd adjugate(const Eigen::MatrixXd& X) {
  const int r = static_cast<int>(X.rows());
  Eigen::MatrixXd adj(r, r);
  if (r == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      Eigen::MatrixXd m(r - 1, r - 1);
      for (int a = 0, ra = 0; a < r; ++a) {
        if (a == i) continue;
        for (int b = 0, cb = 0; b < r; ++b) {
          if (b == j) continue;
          m(ra, cb++) = X(a, b);
        }
        ++ra;
      }
      adj(j, i) = ((i + j) % 2 ? -1.0 : 1.0) * m.determinant();
    }
  return adj;
}

// psi(s) = s^e det(C Q(s)), Q(s) = sum_t Q_t s^t from N^-1.
struct PsiModel {
  std::vector<Eigen::MatrixXd> Q;
  int e = 0;

  PsiModel(const QMat& A, const QMat& B) {
    const int n = A.rows(), r = B.cols();
    StateSpace sys(A, B, QMat(0, n));
    if (!controllability(sys).controllable) throw StructuralError("zero assignment needs (A, B) controllable");
    CanonicalDecomposition cd = to_yokoyama(sys);
    for (int t = 0; t < cd.nu; ++t)
      Q.push_back(to_eigen(pad_left(cd.N_inv.block(0, cd.offset(t), n, cd.l_list[t]), r)));
    e = n - r * cd.nu;
  }

  Eigen::MatrixXd Qat(double s) const {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(Q[0].rows(), Q[0].cols());
    double p = 1;
    for (const auto& Qt : Q) {
      q += p * Qt;
      p *= s;
    }
    return q;
  }

  double value(const Eigen::MatrixXd& C, double s) const {
    return std::pow(s, e) * (C * Qat(s)).determinant();
  }
  // d psi / dC
  Eigen::MatrixXd grad(const Eigen::MatrixXd& C, double s) const {
    Eigen::MatrixXd q = Qat(s);
    return std::pow(s, e) * (q * adjugate(C * q)).transpose();
  }
};

struct Terms {
  double j1 = 0, gram = 0, obs = 0;
  Eigen::MatrixXd g1, ggram, gobs;  // with respect to X
};

// J(X) = J1(X S) + q pen(X). S = I for assignment, the full output matrix
// for squaring down.
struct Criterion {
  PsiModel psi;
  Eigen::MatrixXd A, S, mask;
  std::vector<double> targets;
  double q = 0;
  RankPenalty penalty = RankPenalty::Gram;
  int gamma = 1;

  Criterion(const QMat& a, const QMat& b) : psi(a, b), A(to_eigen(a)) {}

  Terms terms(const Eigen::MatrixXd& X) const {
    Terms t;
    Eigen::MatrixXd C = X * S;
    Eigen::MatrixXd gC = Eigen::MatrixXd::Zero(C.rows(), C.cols());
    for (double s : targets) {
      double v = psi.value(C, s);
      t.j1 += 0.5 * v * v;
      gC += v * psi.grad(C, s);
    }
    t.g1 = gC * S.transpose();

    Eigen::MatrixXd G = X * X.transpose();
    double dg = G.determinant();
    t.gram = 1 / dg;
    t.ggram = -2 / dg * G.inverse() * X;

    if (penalty == RankPenalty::Observability) {
      const int n = static_cast<int>(A.rows());
      std::vector<Eigen::MatrixXd> pw{Eigen::MatrixXd::Identity(n, n)};
      for (int i = 1; i < gamma; ++i) pw.push_back(pw.back() * A);
      Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, n);
      for (const auto& P : pw) Z += P.transpose() * C.transpose() * C * P;
      double dz = Z.determinant();
      Eigen::MatrixXd Zi = Z.inverse();
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(C.rows(), C.cols());
      for (const auto& P : pw) g += C * P * Zi * P.transpose();
      t.obs = 1 / dz;
      t.gobs = (-2 / dz * g) * S.transpose();
    } else {
      t.gobs = Eigen::MatrixXd::Zero(X.rows(), X.cols());
    }
    return t;
  }

  double penalty_value(const Terms& t) const { return penalty == RankPenalty::Gram ? t.gram : t.obs; }
  const Eigen::MatrixXd& penalty_grad(const Terms& t) const {
    return penalty == RankPenalty::Gram ? t.ggram : t.gobs;
  }
  double J(const Terms& t) const { return t.j1 + q * penalty_value(t); }
  Eigen::MatrixXd grad(const Terms& t) const {
    return (t.g1 + q * penalty_grad(t)).cwiseProduct(mask);
  }
};

struct DescentSettings {
  double alpha, eps;
  int max_iter;
  const std::atomic<bool>* cancel;
};

GradientResult descend(const Criterion& crit, Eigen::MatrixXd X, const DescentSettings& ds) {
  Terms t = crit.terms(X);
  double J = crit.J(t);
  if (!std::isfinite(J)) throw DomainError("starting matrix makes the rank penalty singular");
  Eigen::MatrixXd g = crit.grad(t);
  double alpha = ds.alpha;
  int accepted = 0;
  for (int pass = 0; g.cwiseAbs().sum() > ds.eps; ++pass) {
    if (ds.cancel && ds.cancel->load()) throw NumericError("zero assignment cancelled");
    if (pass >= ds.max_iter || alpha < 1e-300) {
      std::ostringstream os;
      os << "gradient descent did not converge after " << pass << " passes; J = " << J
         << ", |dJ/dX| = " << g.cwiseAbs().sum();
      throw NumericError(os.str());
    }
    Eigen::MatrixXd Xn = X - alpha * g;
    Terms tn = crit.terms(Xn);
    double Jn = crit.J(tn);
    if (!(Jn <= J)) {
      alpha /= 2;
      continue;
    }
    X = std::move(Xn);
    t = std::move(tn);
    J = Jn;
    g = crit.grad(t);
    ++accepted;
  }
  GradientResult res;
  res.X = X;
  res.J = J;
  res.J1 = t.j1;
  res.J2 = crit.penalty_value(t);
  res.grad_norm = g.cwiseAbs().sum();
  res.iterations = accepted;
  res.alpha = alpha;
  return res;
}

ZeroList zeros_of(const QMat& A, const QMat& B, const QMat& C) {
  ZeroPoly z = system_zeros(StateSpace(A, B, C));
  ZeroList out = z.roots.flat();
  sort_roots(out);
  return out;
}

int default_gamma(int n, int r) { return (n + r - 1) / r; }

Criterion make_assignment_criterion(const AssignmentProblem& p) {
  const int n = p.A.rows(), r = p.B.cols();
  Criterion crit(p.A, p.B);
  crit.S = Eigen::MatrixXd::Identity(n, n);
  crit.targets = p.targets;
  crit.q = p.q;
  crit.penalty = p.penalty;
  crit.gamma = p.gamma > 0 ? p.gamma : default_gamma(n, r);
  crit.mask = Eigen::MatrixXd::Ones(r, n);
  if (p.measured > 0) crit.mask.rightCols(n - p.measured).setZero();
  return crit;
}

Criterion make_squaring_criterion(const SquareDownProblem& p) {
  Criterion crit(p.A, p.B);
  crit.S = to_eigen(p.C);
  crit.targets = p.targets;
  crit.q = p.q;
  crit.penalty = RankPenalty::Gram;
  crit.mask = Eigen::MatrixXd::Ones(p.B.cols(), p.C.rows());
  return crit;
}

void check_real_targets(const QMat& A, const std::vector<double>& targets) {
  std::vector<Rational> q;
  for (double t : targets) q.push_back(rational_from_double(t));
  check_targets(A, q);
}

}  // namespace

double placement_psi(const QMat& A, const QMat& B, const Eigen::MatrixXd& C, double s) {
  return PsiModel(A, B).value(C, s);
}

GradientResult assign_gradient(const AssignmentProblem& p) {
  const int n = p.A.rows(), r = p.B.cols();
  if (p.measured > 0) {
    if (p.measured <= r) throw StructuralError("structural assignment with m <= r has no solution");
    if (p.measured > n) throw DomainError("measured states exceed n");
  }
  if (p.targets.empty() || static_cast<int>(p.targets.size()) > n - r)
    throw DomainError("gradient assignment needs between 1 and n - r targets");
  check_real_targets(p.A, p.targets);
  Criterion crit = make_assignment_criterion(p);

  Eigen::MatrixXd X;
  if (!p.C0.empty()) {
    if (p.C0.rows() != r || p.C0.cols() != n) throw DomainError("starting C must be r x n");
    X = to_eigen(p.C0);
  } else {
    int m = p.measured > 0 ? p.measured : n;
    X = Eigen::MatrixXd::Zero(r, n);
    X.leftCols(m) = to_eigen(random_full_rank(r, m, p.seed));
  }
  X = X.cwiseProduct(crit.mask);
  GradientResult res = descend(crit, X, {p.alpha, p.eps, p.max_iter, p.cancel});
  res.zeros = zeros_of(p.A, p.B, from_eigen(res.X));
  return res;
}

GradientResult assign_squaring_down(const SquareDownProblem& p) {
  const int n = p.A.rows(), r = p.B.cols(), l = p.C.rows();
  if (l <= r) throw PreconditionError("squaring down needs more outputs than inputs");
  if (p.targets.empty()) throw DomainError("squaring down needs at least one target");
  ZeroPoly existing = system_zeros(StateSpace(p.A, p.B, p.C));
  if (existing.degenerate) throw DegenerateError("system zeros are degenerate");
  int mu = existing.poly.degree();
  if (mu + static_cast<int>(p.targets.size()) > n - r)
    throw DomainError("infeasible target count: existing zeros plus targets exceed n - r");
  check_real_targets(p.A, p.targets);
  Criterion crit = make_squaring_criterion(p);
  Eigen::MatrixXd X;
  if (!p.D0.empty()) {
    if (p.D0.rows() != r || p.D0.cols() != l) throw DomainError("starting D must be r x l");
    X = to_eigen(p.D0);
  } else {
    X = to_eigen(random_full_rank(r, l, p.seed));
  }
  GradientResult res = descend(crit, X, {p.alpha, p.eps, p.max_iter, p.cancel});
  res.zeros = zeros_of(p.A, p.B, from_eigen(res.X) * p.C);
  return res;
}

double GradientCheck::max() const { return std::max({j1, gram, obs, total}); }

namespace {

double rel_error(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& fd) {
  double scale = std::max(fd.norm(), analytic.norm());
  if (scale < 1e-14) return 0;
  return (analytic - fd).norm() / scale;
}

template <typename F>
Eigen::MatrixXd central_difference(const Eigen::MatrixXd& X, F f, double h = 1e-6) {
  Eigen::MatrixXd g(X.rows(), X.cols());
  for (int i = 0; i < X.rows(); ++i)
    for (int j = 0; j < X.cols(); ++j) {
      Eigen::MatrixXd a = X, b = X;
      a(i, j) += h;
      b(i, j) -= h;
      g(i, j) = (f(a) - f(b)) / (2 * h);
    }
  return g;
}

GradientCheck check_terms(const Criterion& crit, const Eigen::MatrixXd& X, bool with_obs) {
  Terms t = crit.terms(X);
  GradientCheck gc;
  gc.j1 = rel_error(t.g1, central_difference(X, [&](const Eigen::MatrixXd& Y) { return crit.terms(Y).j1; }));
  gc.gram = rel_error(t.ggram, central_difference(X, [&](const Eigen::MatrixXd& Y) { return crit.terms(Y).gram; }));
  if (with_obs)
    gc.obs = rel_error(t.gobs, central_difference(X, [&](const Eigen::MatrixXd& Y) { return crit.terms(Y).obs; }));
  Criterion full = crit;
  full.mask = Eigen::MatrixXd::Ones(X.rows(), X.cols());
  gc.total = rel_error(full.grad(t), central_difference(X, [&](const Eigen::MatrixXd& Y) { return full.J(full.terms(Y)); }));
  return gc;
}

}  // namespace

GradientCheck gradient_check(const AssignmentProblem& p, const Eigen::MatrixXd& C) {
  Criterion crit = make_assignment_criterion(p);
  crit.penalty = RankPenalty::Observability;  // evaluate every term
  GradientCheck gc = check_terms(crit, C, true);
  crit.penalty = p.penalty;
  Terms t = crit.terms(C);
  crit.mask = Eigen::MatrixXd::Ones(C.rows(), C.cols());
  gc.total = rel_error(crit.grad(t), central_difference(C, [&](const Eigen::MatrixXd& Y) { return crit.J(crit.terms(Y)); }));
  return gc;
}

GradientCheck gradient_check(const SquareDownProblem& p, const Eigen::MatrixXd& D) {
  return check_terms(make_squaring_criterion(p), D, false);
}

// ---- pole placement

Poly poly_from_poles(const std::vector<std::complex<double>>& poles) {
  std::vector<bool> used(poles.size(), false);
  for (size_t i = 0; i < poles.size(); ++i) {
    if (used[i] || std::abs(poles[i].imag()) <= 1e-12) continue;
    bool found = false;
    for (size_t j = i + 1; j < poles.size() && !found; ++j)
      if (!used[j] && std::abs(poles[j] - std::conj(poles[i])) <= 1e-9 * (1 + std::abs(poles[i]))) {
        used[i] = used[j] = true;
        found = true;
      }
    if (!found) throw DomainError("pole set is not closed under conjugation");
  }
  std::vector<std::complex<double>> c{1.0};  // lowest degree first
  for (const auto& p : poles) {
    std::vector<std::complex<double>> nc(c.size() + 1, 0.0);
    for (size_t k = 0; k < c.size(); ++k) {
      nc[k + 1] += c[k];
      nc[k] -= p * c[k];
    }
    c = std::move(nc);
  }
  std::vector<Rational> q;
  for (const auto& v : c) q.push_back(rational_from_double(v.real()));
  q.back() = 1;
  return Poly(q);
}

QMat place(const QMat& A, const QMat& B, const Poly& target) {
  const int n = A.rows(), r = B.cols();
  if (target.degree() != n) throw DomainError("placement target must have degree n");
  StateSpace sys(A, B, QMat(0, n));
  if (!controllability(sys).controllable) throw StructuralError("pole placement needs (A, B) controllable");
  if (rank(B) != r) throw StructuralError("pole placement needs rank B = r");
  CanonicalDecomposition cd = to_yokoyama(sys);
  QMat bottom = chain_companion_rows(cd.l_list, target.monic());
  QMat Fb = cd.F.block(n - r, 0, r, n);
  QMat Kz = inverse(cd.G_nu) * (bottom - Fb);
  return cd.M * Kz * cd.N;
}

QMat place_observer(const QMat& A, const QMat& C, const Poly& target) {
  return -place(A.transpose(), C.transpose(), target).transpose();
}

// ---- servo problems

namespace {

QMat stack2(const QMat& a, const QMat& b, const QMat& c, const QMat& d) {
  return vcat(hcat(a, b), hcat(c, d));
}

ZeroList spectrum(const QMat& A) {
  if (A.rows() == 0) return {};
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(A), false);
  ZeroList out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  sort_roots(out);
  return out;
}

void check_pole_count(const std::vector<std::complex<double>>& poles, int order) {
  if (static_cast<int>(poles.size()) != order) {
    std::ostringstream os;
    os << "expected " << order << " closed-loop poles, got " << poles.size();
    throw DomainError(os.str());
  }
  for (const auto& p : poles)
    if (p.real() >= 0) throw DomainError("desired poles must lie in the open left half-plane");
}

}  // namespace

PiConditions pi_solvable(const QMat& A, const QMat& B, const QMat& D) {
  const int n = A.rows(), r = B.cols(), d = D.rows();
  PiConditions c;
  c.stabilizable = stabilizable(A, B);
  c.d_le_r = d <= r;
  c.origin_rank = rank(stack2(-A, -B, D, QMat(d, r)));
  c.no_origin_zero = c.origin_rank == n + d;
  return c;
}

ObserverConditions observer_solvable(const QMat& A, const QMat& Ein, const QMat& H, const QMat& F) {
  const int n = A.rows(), l = H.rows();
  const QMat E = Ein.empty() ? QMat(n, 0) : Ein;
  const int p = E.cols();
  ObserverConditions c;
  c.detectable = stabilizable(A.transpose(), H.transpose());
  c.l_ge_p = l >= p;
  QMat Fw = F.empty() ? QMat(l, p) : F;
  c.origin_rank = rank(stack2(-A, -E, H, Fw));
  c.no_origin_zero = c.origin_rank == n + p;
  return c;
}

ServoConditions servo_solvable(const QMat& A, const QMat& B, const QMat& D, const Poly& phi) {
  ServoConditions c;
  c.stabilizable = stabilizable(A, B);
  c.d_le_r = D.rows() <= B.cols();
  c.reference_roots = roots(phi).flat();
  sort_roots(c.reference_roots);
  try {
    ZeroReport rep = zero_report(StateSpace(A, B, D));
    if (!rep.transmission.degenerate) {
      c.transmission = rep.transmission.roots.flat();
      sort_roots(c.transmission);
      c.zeros_disjoint = poly_gcd(rep.transmission.poly, phi).is_constant();
    }
  } catch (const StructuralError&) {
    c.zeros_disjoint = false;
  }
  return c;
}

RegulatorRealization synthesize_pi(const ServoPlant& plant,
                                   const std::vector<std::complex<double>>& poles,
                                   const std::vector<std::complex<double>>& observer_poles) {
  const QMat& A = plant.A;
  const int n = A.rows(), r = plant.B.cols(), d = plant.D.rows();
  const QMat E = plant.E.empty() ? QMat(n, 0) : plant.E;
  const int p = E.cols();
  PiConditions pc = pi_solvable(A, plant.B, plant.D);
  if (!pc.ok()) throw PreconditionError("PI tracking conditions fail for (A, B, D)");
  check_pole_count(poles, n + d);
  QMat At = stack2(A, QMat(n, d), plant.D, QMat(d, d));
  QMat Bt = vcat(plant.B, QMat(d, r));
  QMat K = place(At, Bt, poly_from_poles(poles));

  RegulatorRealization reg;
  reg.d = d;
  reg.K1 = K.block(0, 0, r, n);
  reg.K2 = K.block(0, n, r, d);
  if (observer_poles.empty()) {
    QMat Acl = At + Bt * K;
    QMat Bcl = stack2(QMat(n, d), E, -QMat::identity(d), QMat(d, p));
    QMat Ccl = hcat(plant.D, QMat(d, d));
    reg.closed_loop = StateSpace(Acl, Bcl, Ccl);
  } else {
    const int l = plant.H.rows();
    QMat F = plant.F.empty() ? QMat(l, p) : plant.F;
    ObserverConditions oc = observer_solvable(A, E, plant.H, F);
    if (!oc.ok()) throw PreconditionError("observer conditions fail for (A, E, H, F)");
    check_pole_count(observer_poles, n + p);
    QMat Ab = stack2(A, E, QMat(p, n), QMat(p, p));
    QMat Cb = hcat(plant.H, F);
    reg.L = place_observer(Ab, Cb, poly_from_poles(observer_poles));
    QMat L1 = reg.L.block(0, 0, n, l), L2 = reg.L.block(n, 0, p, l);
    const QMat& B = plant.B;
    const QMat& H = plant.H;
    // States [x; q; x hat; w hat], exogenous [z_ref; w].
    const int N = n + d + n + p;
    QMat Acl(N, N), Bcl(N, d + p);
    Acl.set_block(0, 0, A);
    Acl.set_block(0, n, B * reg.K2);
    Acl.set_block(0, n + d, B * reg.K1);
    Acl.set_block(n, n + d, plant.D);
    Acl.set_block(n + d, 0, L1 * H);
    Acl.set_block(n + d, n, B * reg.K2);
    Acl.set_block(n + d, n + d, A + B * reg.K1 - L1 * H);
    Acl.set_block(n + d, 2 * n + d, E - L1 * F);
    Acl.set_block(2 * n + d, 0, L2 * H);
    Acl.set_block(2 * n + d, n + d, -(L2 * H));
    Acl.set_block(2 * n + d, 2 * n + d, -(L2 * F));
    Bcl.set_block(0, d, E);
    Bcl.set_block(n, 0, -QMat::identity(d));
    Bcl.set_block(n + d, d, L1 * F);
    Bcl.set_block(2 * n + d, d, L2 * F);
    QMat Ccl(d, N);
    Ccl.set_block(0, 0, plant.D);
    reg.closed_loop = StateSpace(Acl, Bcl, Ccl);
  }
  reg.closed_loop_poles = spectrum(reg.closed_loop.A);
  return reg;
}

RegulatorRealization synthesize_polynomial_tracking(const QMat& A, const QMat& B, const QMat& D,
                                                    int eta,
                                                    const std::vector<std::complex<double>>& poles) {
  const int n = A.rows(), r = B.cols(), d = D.rows();
  if (eta < 1) throw DomainError("eta must be at least 1");
  PiConditions pc = pi_solvable(A, B, D);
  if (!pc.ok()) throw PreconditionError("tracking conditions fail for (A, B, D)");
  const int N = n + eta * d;
  check_pole_count(poles, N);
  QMat Ah(N, N);
  Ah.set_block(0, 0, A);
  Ah.set_block(n, 0, D);
  for (int i = 1; i < eta; ++i) Ah.set_block(n + i * d, n + (i - 1) * d, QMat::identity(d));
  QMat Bh(N, r);
  Bh.set_block(0, 0, B);
  QMat K = place(Ah, Bh, poly_from_poles(poles));

  RegulatorRealization reg;
  reg.d = d;
  reg.K1 = K.block(0, 0, r, n);
  reg.K2 = K.block(0, n, r, eta * d);
  QMat Bcl(N, d);
  Bcl.set_block(n, 0, -QMat::identity(d));
  QMat Ccl(d, N);
  Ccl.set_block(0, 0, D);
  reg.closed_loop = StateSpace(Ah + Bh * K, Bcl, Ccl);
  reg.closed_loop_poles = spectrum(reg.closed_loop.A);
  return reg;
}

RegulatorRealization synthesize_servo(const QMat& A, const QMat& B, const QMat& D, const QMat& E,
                                      const Poly& phi,
                                      const std::vector<std::complex<double>>& poles) {
  const int n = A.rows(), r = B.cols(), d = D.rows();
  const int p = E.cols();
  ServoConditions sc = servo_solvable(A, B, D, phi);
  if (!sc.ok()) throw PreconditionError("servo conditions are not established");
  const int beta = phi.degree();
  if (beta < 1) throw DomainError("reference polynomial must have degree >= 1");
  QMat Fi = companion(phi.monic());
  QMat F(d * beta, d * beta), Gamma(d * beta, d);
  for (int i = 0; i < d; ++i) {
    F.set_block(i * beta, i * beta, Fi);
    Gamma(i * beta + beta - 1, i) = 1;
  }
  const int N = n + d * beta;
  check_pole_count(poles, N);
  QMat Ah = stack2(A, QMat(n, d * beta), Gamma * D, F);
  QMat Bh = vcat(B, QMat(d * beta, r));
  QMat K = place(Ah, Bh, poly_from_poles(poles));

  RegulatorRealization reg;
  reg.d = d;
  reg.K1 = K.block(0, 0, r, n);
  reg.K2 = K.block(0, n, r, d * beta);
  reg.F = F;
  reg.Gamma = Gamma;
  QMat Bcl = stack2(QMat(n, d), E.empty() ? QMat(n, 0) : E, -Gamma, QMat(d * beta, p));
  QMat Ccl = hcat(D, QMat(d, d * beta));
  reg.closed_loop = StateSpace(Ah + Bh * K, Bcl, Ccl);
  reg.closed_loop_poles = spectrum(reg.closed_loop.A);
  return reg;
}

// ---- maximal accuracy

std::string to_string(AccuracyClass c) {
  return c == AccuracyClass::Unlimited ? "unlimited" : "limited";
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
  const int n = static_cast<int>(A.rows());
  // vec(A^T P + P A) = (I kron A^T + A^T kron I) vec(P), column-major.
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        K(j * n + i, j * n + k) += A(k, i);  // (A^T P)_{ij} = sum_k A_ki P_kj
        K(j * n + i, k * n + i) += A(k, j);  // (P A)_{ij} = sum_k P_ik A_kj
      }
  Eigen::VectorXd q = Eigen::Map<const Eigen::VectorXd>(Q.data(), n * n);
  Eigen::VectorXd x = K.fullPivLu().solve(-q);
  Eigen::MatrixXd P = Eigen::Map<Eigen::MatrixXd>(x.data(), n, n);
  return (P + P.transpose()) / 2;
}

Eigen::MatrixXd riccati_kleinman(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                 const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                                 const Eigen::MatrixXd& K0, double tol, int cap, int* iterations) {
  Eigen::MatrixXd Ri = R.inverse();
  Eigen::MatrixXd K = K0;
  Eigen::MatrixXd Acl = A - B * K;
  if (Acl.eigenvalues().real().maxCoeff() >= 0) throw NumericError("Kleinman start gain is not stabilizing");
  const double scale = std::max(1.0, Q.norm());
  double res = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= cap; ++it) {
    Acl = A - B * K;
    Eigen::MatrixXd P = solve_lyapunov(Acl, Q + K.transpose() * R * K);
    K = Ri * B.transpose() * P;
    Eigen::MatrixXd resid = A.transpose() * P + P * A - P * B * Ri * B.transpose() * P + Q;
    res = resid.norm();
    if (!std::isfinite(res)) break;
    if (res <= tol * scale) {
      if (iterations) *iterations = it;
      return P;
    }
  }
  std::ostringstream os;
  os << "Kleinman iteration stopped with residual " << res;
  throw NumericError(os.str());
}

AccuracyReport max_accuracy_class(const StateSpace& sys, const std::vector<double>& rhos) {
  const int n = sys.n(), r = sys.r(), l = sys.l();
  if (!controllability(sys).controllable || !observability(sys).controllable)
    throw PreconditionError("maximal accuracy analysis needs a controllable and observable system");
  AccuracyReport rep;
  ZeroReport zr = zero_report(sys);
  rep.transmission = zr.transmission.roots.flat();
  sort_roots(rep.transmission);
  if (l > r) {
    rep.kind = AccuracyClass::Limited;
    rep.reason = "more regulated outputs than inputs";
  } else {
    auto rhp = std::find_if(rep.transmission.begin(), rep.transmission.end(),
                            [](std::complex<double> z) { return z.real() >= 0; });
    if (rhp != rep.transmission.end()) {
      std::ostringstream os;
      os << "transmission zero " << rhp->real();
      if (rhp->imag() != 0) os << (rhp->imag() > 0 ? "+" : "") << rhp->imag() << "j";
      os << " in the closed right half-plane";
      rep.kind = AccuracyClass::Limited;
      rep.reason = os.str();
    } else {
      rep.kind = AccuracyClass::Unlimited;
      rep.reason = "no transmission zeros in the closed right half-plane";
    }
  }

  Eigen::MatrixXd A = to_eigen(sys.A), B = to_eigen(sys.B), Cd = to_eigen(sys.C);
  Eigen::MatrixXd Q = Cd.transpose() * Cd;
  std::vector<std::complex<double>> start;
  for (int i = 1; i <= n; ++i) start.push_back(-double(i));
  Eigen::MatrixXd K0 = -to_eigen(place(sys.A, sys.B, poly_from_poles(start)));
  for (double rho : rhos) {
    RiccatiPoint pt;
    pt.rho = rho;
    try {
      pt.P = riccati_kleinman(A, B, Q, rho * Eigen::MatrixXd::Identity(r, r), K0, 1e-10, 200, &pt.iterations);
    } catch (const NumericError& e) {
      rep.warnings.push_back("rho = " + std::to_string(rho) + ": " + e.what());
      continue;
    }
    pt.norm = pt.P.norm();
    rep.trend.push_back(pt);
  }
  return rep;
}

}  // namespace zerolab

#include "zerolab/zeros.h"

#include <algorithm>
#include <exception>
#include <limits>
#include <numeric>
#include <random>

#include "zerolab/errors.h"
#include "zerolab/polymat.h"
#include "zerolab/tfm.h"

namespace zerolab {

ZeroPoly make_zero_poly(const Poly& p, bool degenerate) {
  ZeroPoly z;
  z.degenerate = degenerate;
  z.poly = p.is_zero() ? Poly(0) : p.monic();
  if (!z.poly.is_zero()) z.roots = roots(z.poly);
  return z;
}

PMat system_matrix(const StateSpace& sys) {
  sys.require_strictly_proper("system matrix");
  const int n = sys.n(), r = sys.r(), l = sys.l();
  PMat P(n + l, n + r);
  P.set_block(0, 0, s_minus(sys.A));
  P.set_block(0, n, to_poly(-sys.B));
  P.set_block(n, 0, to_poly(sys.C));
  return P;
}

namespace {

Poly invariant_product(const PMat& p) {
  Poly z(1);
  for (const Poly& e : smith_form(p).invariant_polys) z = z * e;
  return z.monic();
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> v(hi - lo);
  std::iota(v.begin(), v.end(), lo);
  return v;
}

}  // namespace

ZeroPoly invariant_zeros(const StateSpace& sys) {
  PMat P = system_matrix(sys);
  bool degenerate = normal_rank(P) < sys.n() + std::min(sys.r(), sys.l());
  return make_zero_poly(invariant_product(P), degenerate);
}

namespace {

struct SpecialMinors {
  int delta = 0;
  Poly gcd{1};
};

// Minors keeping the n state rows and columns plus k output rows and k
// input columns, at the largest k with a nonzero one.
SpecialMinors special_minors(const StateSpace& sys) {
  PMat P = system_matrix(sys);
  const int n = sys.n(), r = sys.r(), l = sys.l();
  const std::vector<int> state = range(0, n);
  for (int k = std::min(r, l); k >= 0; --k) {
    Poly g;
    for (const auto& rows : combinations(l, k)) {
      std::vector<int> rs = state;
      for (int i : rows) rs.push_back(n + i);
      for (const auto& cols : combinations(r, k)) {
        std::vector<int> cs = state;
        for (int j : cols) cs.push_back(n + j);
        Poly m = minor(P, rs, cs);
        if (m.is_zero()) continue;
        g = g.is_zero() ? m.monic() : poly_gcd(g, m);
      }
    }
    if (!g.is_zero()) return {k, g};
  }
  // k = 0 is det(sI - A), never zero.
  return {0, charpoly(sys.A)};
}

}  // namespace

int system_zero_delta(const StateSpace& sys) { return special_minors(sys).delta; }

ZeroPoly system_zeros(const StateSpace& sys) {
  SpecialMinors sm = special_minors(sys);
  return make_zero_poly(sm.gcd, sm.delta < std::min(sys.r(), sys.l()));
}

DecouplingZeros decoupling_zeros(const StateSpace& sys) {
  sys.require_strictly_proper("decoupling zeros");
  const int n = sys.n();
  DecouplingZeros dz;
  PMat in(n, n + sys.r());
  in.set_block(0, 0, s_minus(sys.A));
  in.set_block(0, n, to_poly(sys.B));
  PMat out(n + sys.l(), n);
  out.set_block(0, 0, s_minus(sys.A));
  out.set_block(n, 0, to_poly(sys.C));
  dz.input = make_zero_poly(invariant_product(in));
  dz.output = make_zero_poly(invariant_product(out));

  Poly psi_n = system_zeros(sys).poly;
  Poly psi_p = tz_smith_mcmillan(transfer_matrix(sys));
  Poly num = dz.input.poly * dz.output.poly * psi_p;
  if (divides(psi_n, num)) {
    dz.io = make_zero_poly(exact_div(num, psi_n));
  } else {
    dz.identity_exact = false;
    dz.io = make_zero_poly(poly_gcd(dz.input.poly, dz.output.poly));
  }
  return dz;
}

ZeroReport zero_report(const StateSpace& sys) {
  ZeroReport rep;
  rep.system = system_zeros(sys);
  rep.invariant = invariant_zeros(sys);
  rep.transmission = make_zero_poly(tz_smith_mcmillan(transfer_matrix(sys)));
  rep.decoupling = decoupling_zeros(sys);
  rep.inclusions_hold = divides(rep.transmission.poly, rep.invariant.poly) &&
                        divides(rep.invariant.poly, rep.system.poly);
  // Input-output decoupling zeros must be both input and output decoupling.
  rep.identity_holds =
      rep.decoupling.identity_exact &&
      divides(rep.decoupling.io.poly, poly_gcd(rep.decoupling.input.poly, rep.decoupling.output.poly));
  return rep;
}

// ---- block companion route

PMat output_polynomial(const StateSpace& sys, const CanonicalDecomposition& cd) {
  return output_matrix_polynomial(cd, sys.r());
}

PMat output_polynomial_markov(const StateSpace& sys, const CanonicalDecomposition& cd) {
  const int r = sys.r();
  // W_nu = B M G_nu^-1, W_{i-1} = A W_i - B M G_nu^-1 [O, F_{nu,i}].
  QMat BG = sys.B * cd.M * inverse(cd.G_nu);
  std::vector<QMat> W(cd.nu + 1);
  W[cd.nu] = BG;
  for (int i = cd.nu; i >= 2; --i) W[i - 1] = sys.A * W[i] - BG * pad_left(cd.bottom_blocks[i - 1], r);
  std::vector<QMat> coeffs;
  for (int i = 1; i <= cd.nu; ++i) coeffs.push_back(sys.C * W[i]);
  return eval_poly_matrix(coeffs);
}

namespace {

// l >= r; the pair (A, B) must be controllable.
ZeroPoly matrix_polynomial_tall(const StateSpace& sys) {
  CanonicalDecomposition cd = to_yokoyama(sys);
  PMat Ct = output_polynomial(sys, cd);
  const int r = sys.r(), l = sys.l();
  const int excess = r * cd.nu - sys.n();
  if (normal_rank(Ct) < r) return make_zero_poly(Poly(0), true);
  Poly g;
  for (const auto& rows : combinations(l, r)) {
    Poly m = minor(Ct, rows, range(0, r));
    if (m.is_zero()) continue;
    m = m.shift_down(excess);
    g = g.is_zero() ? m.monic() : poly_gcd(g, m);
  }
  return make_zero_poly(g);
}

}  // namespace

ZeroPoly zero_poly_matrix_polynomial(const StateSpace& sys) {
  sys.require_strictly_proper("matrix-polynomial zeros");
  if (sys.r() > sys.l()) {
    if (!observability(sys).controllable)
      throw StructuralError("r > l needs (A, C) observable for the dual construction");
    return matrix_polynomial_tall(dual(sys));
  }
  if (!controllability(sys).controllable)
    throw StructuralError("matrix-polynomial zeros need (A, B) controllable");
  return matrix_polynomial_tall(sys);
}

std::string to_string(CountKind k) {
  switch (k) {
    case CountKind::Exact:
      return "exact";
    case CountKind::UpperBound:
      return "upper_bound";
    case CountKind::Degenerate:
      return "degenerate";
  }
  return "?";
}

ZeroCountBound zero_count_bound(const StateSpace& sys) {
  sys.require_strictly_proper("zero count");
  if (sys.r() > sys.l()) {
    if (!observability(sys).controllable)
      throw StructuralError("r > l needs (A, C) observable for the dual construction");
    return zero_count_bound(dual(sys));
  }
  if (!controllability(sys).controllable)
    throw StructuralError("zero count bound needs (A, B) controllable");
  CanonicalDecomposition cd = to_yokoyama(sys);
  PMat Ct = output_polynomial(sys, cd);
  const int r = sys.r();
  ZeroCountBound b;
  if (normal_rank(Ct) < r) {
    b.kind = CountKind::Degenerate;
    return b;
  }
  for (int k = cd.nu - 1; k >= 0; --k) {
    QMat K = coeff(Ct, k);
    if (K.is_zero()) continue;
    b.leading_power = k;
    b.leading_rank = rank(K);
    break;
  }
  b.value = sys.n() - r * cd.nu + r * b.leading_power - (r - b.leading_rank);
  b.kind = (sys.l() == r && b.leading_rank == r) ? CountKind::Exact : CountKind::UpperBound;
  return b;
}

// ---- pencils

Poly pencil_det(const Pencil& p) {
  if (p.D.rows() != p.D.cols()) throw PreconditionError("pencil determinant needs a square pencil");
  PMat m(p.D.rows(), p.D.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = Poly(std::vector<Rational>{p.L(i, j), p.D(i, j)});
  return det(m);
}

Pencil build_pencil(const StateSpace& sys, PencilKind kind, const QMat& K) {
  sys.require_strictly_proper("pencil");
  const int n = sys.n(), r = sys.r(), l = sys.l();
  auto need_K = [&]() {
    if (K.rows() != r || K.cols() != l) throw DomainError("K must be r x l");
  };
  Pencil p;
  switch (kind) {
    case PencilKind::SystemMatrix:
    case PencilKind::SquaredOutputs:
    case PencilKind::SquaredInputs: {
      QMat B = sys.B, C = sys.C;
      if (kind == PencilKind::SquaredOutputs) need_K(), C = K * C;
      if (kind == PencilKind::SquaredInputs) need_K(), B = B * K;
      const int rows = n + C.rows(), cols = n + B.cols();
      p.D = QMat(rows, cols);
      p.D.set_block(0, 0, QMat::identity(n));
      p.L = QMat(rows, cols);
      p.L.set_block(0, 0, -sys.A);
      p.L.set_block(0, n, -B);
      p.L.set_block(n, 0, C);
      p.description = kind == PencilKind::SystemMatrix    ? "system matrix"
                      : kind == PencilKind::SquaredOutputs ? "squared outputs"
                                                           : "squared inputs";
      return p;
    }
    case PencilKind::OutputFeedback:
    case PencilKind::OutputSelection:
    case PencilKind::InputSelection: {
      need_K();
      const int m = n + l + r;
      p.D = QMat(m, m);
      p.D.set_block(0, 0, QMat::identity(n));
      p.L = QMat(m, m);
      p.L.set_block(0, 0, -sys.A);
      p.L.set_block(0, n + l, sys.B);
      p.L.set_block(n, 0, -sys.C);
      if (kind != PencilKind::InputSelection) p.L.set_block(n, n, QMat::identity(l));
      p.L.set_block(n + l, n, K);
      if (kind != PencilKind::OutputSelection) p.L.set_block(n + l, n + l, QMat::identity(r));
      p.description = kind == PencilKind::OutputFeedback    ? "output feedback"
                      : kind == PencilKind::OutputSelection ? "output selection"
                                                            : "input selection";
      return p;
    }
  }
  return p;
}

ReducedPencil reduced_pencil(const StateSpace& sys) {
  sys.require_strictly_proper("reduced pencil");
  const int r = sys.r();
  if (r != sys.l()) throw PreconditionError("reduced pencil needs a square system (r = l)");
  if (!controllability(sys).controllable)
    throw StructuralError("reduced pencil needs (A, B) controllable");
  CanonicalDecomposition cd = to_yokoyama(sys);
  const int n = sys.n(), nu = cd.nu;
  const auto& l = cd.l_list;
  const QMat& Cnu = cd.C_blocks[nu - 1];
  ReducedPencil rp;
  rp.cb_nonsingular = rank(Cnu) == r;

  if (rp.cb_nonsingular) {
    // States of blocks 1..nu-1; the last l_{nu-1} rows come from
    // -C_nu^-1 [C_1 .. C_{nu-1}].
    const int m = n - r;
    QMat Z(m, m);
    for (int i = 0; i + 2 < nu; ++i)
      Z.set_block(cd.offset(i), cd.offset(i + 1) + l[i + 1] - l[i], QMat::identity(l[i]));
    if (nu >= 2) {
      QMat Cs(r, 0);
      for (int i = 0; i + 1 < nu; ++i) Cs = hcat(Cs, cd.C_blocks[i]);
      QMat T = -(inverse(Cnu) * Cs);
      Z.set_block(m - l[nu - 2], 0, T.block(r - l[nu - 2], 0, l[nu - 2], m));
    }
    rp.pencil.D = QMat::identity(m);
    rp.pencil.L = -Z;
    rp.pencil.description = "zero dynamics matrix";
    rp.zeros = make_zero_poly(m == 0 ? Poly(1) : charpoly(Z));
    return rp;
  }

  if (nu == 1) throw DegenerateError("det C B = 0 with nu = 1: every s is a zero");
  // s diag(I_beta, C_nu) + [-E; C_1 .. C_{nu-2}, [O, C_{nu-1}]].
  const int beta = cd.offset(nu - 2);
  const int m = beta + r;
  std::vector<int> w(l.begin(), l.begin() + (nu - 2));
  w.push_back(r);
  QMat D(m, m), L(m, m);
  D.set_block(0, 0, QMat::identity(beta));
  D.set_block(beta, beta, Cnu);
  int row = 0, col = 0;
  for (int i = 0; i + 2 < nu; ++i) {
    col += w[i];
    L.set_block(row, col + w[i + 1] - l[i], -QMat::identity(l[i]));
    row += l[i];
  }
  for (int i = 0; i + 2 < nu; ++i) L.set_block(beta, cd.offset(i), cd.C_blocks[i]);
  L.set_block(beta, beta, pad_left(cd.C_blocks[nu - 2], r));
  rp.pencil = {D, L, "collapsed pencil"};
  Poly d = pencil_det(rp.pencil);
  if (d.is_zero()) throw DegenerateError("reduced pencil is singular: every s is a zero");
  rp.origin_removed = r - l[nu - 2];
  rp.zeros = make_zero_poly(d.shift_down(rp.origin_removed));
  return rp;
}

// ---- randomized and numeric routes

namespace {

QMat draw_full_rank(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-5, 5);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    QMat K(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) K(i, j) = dist(rng);
    if (rank(K) == std::min(rows, cols)) return K;
  }
  throw NumericError("could not draw a full-rank matrix");
}

bool drops_rank(const StateSpace& sys, std::complex<double> z) {
  Eigen::MatrixXcd P = eval(system_matrix(sys), z);
  return numeric_rank(P, 1e-8) < sys.n() + std::min(sys.r(), sys.l());
}

// Invariant or decoupling zero at z.
bool is_system_zero(const StateSpace& sys, std::complex<double> z) {
  if (drops_rank(sys, z)) return true;
  const int n = sys.n();
  Eigen::MatrixXcd P = eval(system_matrix(sys), z);
  return numeric_rank(Eigen::MatrixXcd(P.topRows(n)), 1e-8) < n ||
         numeric_rank(Eigen::MatrixXcd(P.leftCols(n)), 1e-8) < n;
}

}  // namespace

QMat random_full_rank(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return draw_full_rank(rows, cols, rng);
}

ZeroPoly zeros_pencil(const StateSpace& sys, std::uint64_t seed) {
  const int r = sys.r(), l = sys.l();
  if (r == l) {
    Poly d = pencil_det(build_pencil(sys, PencilKind::SystemMatrix));
    if (d.is_zero()) throw DegenerateError("det(sD + L) vanishes identically: every s is a zero");
    return make_zero_poly(d);
  }
  const PencilKind kind = l > r ? PencilKind::SquaredOutputs : PencilKind::SquaredInputs;
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 2; ++attempt) {
    QMat K1 = draw_full_rank(r, l, rng), K2 = draw_full_rank(r, l, rng);
    Poly d1 = pencil_det(build_pencil(sys, kind, K1));
    Poly d2 = pencil_det(build_pencil(sys, kind, K2));
    if (d1.is_zero() || d2.is_zero()) continue;
    ZeroPoly z = make_zero_poly(poly_gcd(d1, d2));
    auto common = multiset_intersection(roots(d1).flat(), roots(d2).flat());
    if (!multiset_equal(common, z.roots.flat())) continue;
    bool genuine = std::all_of(common.begin(), common.end(),
                               [&](std::complex<double> x) { return is_system_zero(sys, x); });
    if (genuine) return z;
  }
  throw DegenerateError("squared-down pencils failed twice; system may be degenerate");
}

namespace {

ZeroList closed_loop_spectrum(const StateSpace& sys, double k, const QMat& K, double cap) {
  sys.require_strictly_proper("high-gain zeros");
  Eigen::MatrixXd M = to_eigen(sys.A) + k * to_eigen(sys.B) * to_eigen(K) * to_eigen(sys.C);
  ZeroList out;
  if (M.rows() == 0) return out;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  for (int i = 0; i < M.rows(); ++i) {
    std::complex<double> v = es.eigenvalues()(i);
    if (std::abs(v) <= cap) out.push_back(v);
  }
  sort_roots(out);
  return out;
}

}  // namespace

ZeroList highgain_finite_eigenvalues(const StateSpace& sys, double k, const QMat& K) {
  return closed_loop_spectrum(sys, k, K, std::sqrt(k));
}

HighGainResult zeros_highgain(const StateSpace& sys, double k, const QMat& K1, const QMat& K2) {
  HighGainResult res;
  res.all = multiset_intersection(highgain_finite_eigenvalues(sys, k, K1),
                                  highgain_finite_eigenvalues(sys, k, K2));
  // Modes that no output feedback moves: the spectra of A + B K_i C share them.
  const double all = std::numeric_limits<double>::infinity();
  res.decoupling = multiset_intersection(closed_loop_spectrum(sys, 1.0, K1, all),
                                         closed_loop_spectrum(sys, 1.0, K2, all));
  res.decoupling = multiset_intersection(res.decoupling, res.all);
  res.transmission = multiset_difference(res.all, res.decoupling);
  sort_roots(res.all);
  sort_roots(res.decoupling);
  sort_roots(res.transmission);
  return res;
}

HighGainResult zeros_highgain(const StateSpace& sys, std::uint64_t seed, double k) {
  std::mt19937_64 rng(seed);
  QMat K1 = draw_full_rank(sys.r(), sys.l(), rng);
  QMat K2 = draw_full_rank(sys.r(), sys.l(), rng);
  return zeros_highgain(sys, k, K1, K2);
}

InterpolationResult zeros_interpolation(const StateSpace& sys) {
  sys.require_strictly_proper("interpolation zeros");
  const int n = sys.n(), r = sys.r();
  if (r != sys.l()) throw PreconditionError("interpolation needs a square system (r = l)");
  InterpolationResult res;
  res.bound = n - r;
  if (controllability(sys).controllable && rank(sys.B) == r) {
    ZeroCountBound b = zero_count_bound(sys);
    if (b.kind == CountKind::Degenerate)
      throw DegenerateError("Ct(s) is rank deficient: every s is a zero");
    res.bound = b.value;
  }
  const Poly a_poly = charpoly(sys.A);
  const int count = res.bound + 1;
  for (int i = 0; i < count; ++i) {
    Rational s = Rational(2 * i + 1, 2);
    int shifts = 0;
    auto taken = [&](const Rational& x) {
      return std::find(res.samples.begin(), res.samples.end(), x) != res.samples.end();
    };
    while (a_poly.eval(s) == 0 || taken(s)) {
      if (++shifts > 64) throw NumericError("could not place interpolation samples");
      s += Rational(1, 3);
    }
    res.samples.push_back(s);
  }
  // b_i = det(s_i I - A) det(C (s_i I - A)^-1 B)
  QMat V(count, count), b(count, 1);
  for (int i = 0; i < count; ++i) {
    const Rational& s = res.samples[i];
    QMat X = -sys.A;
    for (int j = 0; j < n; ++j) X(j, j) += s;
    b(i, 0) = det(X) * det(sys.C * solve(X, sys.B));
    Rational p = 1;
    for (int j = 0; j < count; ++j, p *= s) V(i, j) = p;
  }
  QMat a = solve(V, b);
  std::vector<Rational> c(count);
  for (int j = 0; j < count; ++j) c[j] = a(j, 0);
  Poly psi(c);
  if (psi.is_zero()) throw DegenerateError("all interpolation samples vanish: every s is a zero");
  res.zeros = make_zero_poly(psi);
  for (const auto& root : res.zeros.roots.roots)
    if (drops_rank(sys, root.value)) res.confirmed += root.multiplicity;
  return res;
}

std::vector<ZeroPoly> batch_system_zeros_serial(const std::vector<StateSpace>& systems) {
  std::vector<ZeroPoly> out;
  out.reserve(systems.size());
  for (const auto& s : systems) out.push_back(system_zeros(s));
  return out;
}

std::vector<ZeroPoly> batch_system_zeros(const std::vector<StateSpace>& systems) {
  const long count = static_cast<long>(systems.size());
  std::vector<ZeroPoly> out(systems.size());
  std::vector<std::exception_ptr> errors(systems.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      out[i] = system_zeros(systems[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace zerolab

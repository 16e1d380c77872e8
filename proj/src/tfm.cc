#include "zerolab/tfm.h"

#include <algorithm>

#include "zerolab/errors.h"
#include "zerolab/polymat.h"

namespace zerolab {

RMat transfer_matrix(const StateSpace& sys) {
  Resolvent res = resolvent(sys.A);
  const int l = sys.l(), r = sys.r();
  std::vector<QMat> num;
  for (const QMat& adj : res.adj) num.push_back(sys.C * adj * sys.B);
  RMat G(l, r);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < r; ++j) {
      std::vector<Rational> c;
      for (const QMat& m : num) c.push_back(m(i, j));
      G(i, j) = RatFn(Poly(c), res.charpoly) + RatFn(sys.D(i, j));
    }
  return G;
}

namespace {

// Reduced denominators of the order-k minors of G = T / phi.
std::vector<RatFn> reduced_minors(const PMat& T, const Poly& phi, int k) {
  std::vector<RatFn> out;
  Poly phik = pow(phi, k);
  for (const Poly& m : nonzero_minors(T, k)) out.emplace_back(m, phik);
  return out;
}

}  // namespace

Poly pole_polynomial(const RMat& G) {
  Poly phi = common_denominator(G);
  PMat T = numerator_matrix(G, phi);
  Poly p(1);
  int rho = normal_rank(T);
  for (int k = 1; k <= rho; ++k)
    for (const RatFn& m : reduced_minors(T, phi, k)) p = poly_lcm(p, m.den());
  return p;
}

RootSet poles(const RMat& G) { return roots(pole_polynomial(G)); }

Poly tz_smith_mcmillan(const RMat& G) {
  Poly z(1);
  for (const Poly& e : smith_mcmillan(G).eps) z = z * e;
  return z.monic();
}

Poly tz_minors(const RMat& G) {
  Poly phi = common_denominator(G);
  PMat T = numerator_matrix(G, phi);
  const int rho = std::min(G.rows(), G.cols());
  if (rho == 0) return Poly(1);
  if (normal_rank(T) < rho)
    throw StructuralError("transfer matrix has normal rank below min(l, r)");
  Poly p = pole_polynomial(G);
  Poly z;
  for (const RatFn& m : reduced_minors(T, phi, rho)) {
    Poly numer = m.num() * exact_div(p, m.den());
    z = z.is_zero() ? numer.monic() : poly_gcd(z, numer);
  }
  return z;
}

PMat output_matrix_polynomial(const CanonicalDecomposition& cd, int r) {
  const int l = cd.C_blocks.empty() ? 0 : cd.C_blocks[0].rows();
  std::vector<QMat> coeffs;
  for (int i = 0; i < cd.nu; ++i) {
    QMat padded(l, r);
    padded.set_block(0, r - cd.l_list[i], cd.C_blocks[i]);
    coeffs.push_back(padded);
  }
  return eval_poly_matrix(coeffs);
}

Factorization factorize(const StateSpace& sys) {
  sys.require_strictly_proper("factorize");
  ControllabilityInfo ci = controllability(sys);
  if (!ci.controllable || sys.r() == 0 || ci.nu * sys.r() != sys.n())
    throw StructuralError(
        "factorization needs a controllable pair with nu = n / r; use the block-companion zero "
        "polynomial instead");
  CanonicalDecomposition cd = to_asseo(sys);
  Factorization f;
  f.Cpoly = output_matrix_polynomial(cd, sys.r());
  f.A2 = companion_matrix_polynomial(cd.l_list, cd.bottom_blocks);
  f.coprime = observability(sys).controllable;
  return f;
}

Poly tz_numerator(const StateSpace& sys) {
  Factorization f = factorize(sys);
  if (!f.coprime)
    throw PreconditionError("C(s) and A2(s) are not right coprime: (A, C) is not observable");
  Poly z(1);
  for (const Poly& e : smith_form(f.Cpoly).invariant_polys) z = z * e;
  return z.monic();
}

}  // namespace zerolab

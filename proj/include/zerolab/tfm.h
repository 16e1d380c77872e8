#pragma once

#include <vector>

#include "zerolab/canon.h"
#include "zerolab/matrix.h"
#include "zerolab/statespace.h"

namespace zerolab {

// C adj(sI - A) B / det(sI - A) + D, every entry in lowest terms.
RMat transfer_matrix(const StateSpace& sys);

// Least common denominator of every nonzero minor of every order (monic).
Poly pole_polynomial(const RMat& G);
RootSet poles(const RMat& G);

// Monic product of the Smith-McMillan numerators eps_i.
Poly tz_smith_mcmillan(const RMat& G);
// Monic gcd of the order-rho minor numerators over the pole polynomial.
// StructuralError when the normal rank is below min(rows, cols).
Poly tz_minors(const RMat& G);

// G(s) = C(s) A2(s)^-1 from the Asseo form.
struct Factorization {
  PMat Cpoly;  // l x r, degree nu - 1
  PMat A2;     // r x r, monic of degree nu
  bool coprime = false;  // (A, C) observable
};
// Needs nu = n / r; StructuralError otherwise.
Factorization factorize(const StateSpace& sys);

// Right factors from any block companion form: G(s) M = Ct(s) Phi(s)^-1 G_nu,
// Ct(s) = sum [O, C_i] s^{i-1}. For the Asseo form G_nu = I and M = I.
PMat output_matrix_polynomial(const CanonicalDecomposition& cd, int r);

// Roots of the invariant polynomials of C(s) (monic product). Requires a
// controllable and observable system with nu r = n.
Poly tz_numerator(const StateSpace& sys);

}  // namespace zerolab

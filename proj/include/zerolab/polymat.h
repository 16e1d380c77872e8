#pragma once

#include <vector>

#include "zerolab/matrix.h"
#include "zerolab/ratpoly.h"

namespace zerolab {

// Largest min(rows, cols) accepted by minor enumeration.
constexpr int kMaxMinorDim = 8;

// Rank over the field of rational functions (fraction-free elimination).
int normal_rank(const PMat& p);
// Fraction-free (Bareiss) determinant.
Poly det(const PMat& p);
Poly minor(const PMat& p, const std::vector<int>& rows, const std::vector<int>& cols);

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int k);

// Every nonzero k-th order minor. Parallel over index pairs; the returned
// order is lexicographic in (rows, cols) regardless of thread count.
std::vector<Poly> nonzero_minors(const PMat& p, int k);
std::vector<Poly> nonzero_minors_serial(const PMat& p, int k);
// Monic gcd of the k-th order minors; zero polynomial if they all vanish.
Poly minor_gcd(const PMat& p, int k);
Poly minor_gcd_serial(const PMat& p, int k);

struct SmithDecomposition {
  PMat U_L;
  PMat S;
  PMat U_R;
  std::vector<Poly> invariant_polys;  // nonzero diagonal of S, monic
};

// S = U_L P U_R with unimodular U_L, U_R. Pivot: entry of least degree,
// ties to the smallest (row, col).
SmithDecomposition smith_form(const PMat& p);

// Invariant polynomials d_i / d_{i-1} from gcds of minors. Reference for
// smith_form; subject to kMaxMinorDim.
std::vector<Poly> invariant_polys_by_minors(const PMat& p);

struct SmithMcMillanDecomposition {
  Poly phi;  // monic least common denominator of W
  std::vector<Poly> eps;
  std::vector<Poly> psi;
  PMat U_L;
  PMat U_R;
};

SmithMcMillanDecomposition smith_mcmillan(const RMat& w);

// Monic lcm of every entry denominator.
Poly common_denominator(const RMat& w);
// phi * W as a polynomial matrix.
PMat numerator_matrix(const RMat& w, const Poly& phi);

}  // namespace zerolab

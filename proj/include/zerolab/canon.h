#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zerolab/matrix.h"
#include "zerolab/statespace.h"

namespace zerolab {

enum class CanonKind { Companion, Asseo, Yokoyama };
std::string to_string(CanonKind k);

struct CanonicalDecomposition {
  CanonKind kind = CanonKind::Yokoyama;
  int nu = 0;
  std::vector<int> l_list;  // l_1 <= ... <= l_nu
  QMat N;                   // new state z = N x
  QMat N_inv;
  QMat M;                   // input permutation, u = M v
  QMat F;                   // N A N^-1
  QMat G;                   // N B M = [O; G_nu]
  QMat G_nu;                // last r rows of G
  std::vector<QMat> bottom_blocks;  // F_{nu,i}, r x l_i
  std::vector<QMat> C_blocks;       // C N^-1 split by l_i (empty if l = 0)

  // First row of block i (0-based) in the stacked state.
  int offset(int i) const;
};

// Greedy Kalman scan over [B, AB, A^2B, ...]: chain length of each column
// of B. Columns are visited left to right within each power.
std::vector<int> chain_lengths(const QMat& A, const QMat& B);

// Generalized block companion form. Free entries of the staircase system
// default to zero; `free_values` overrides them row by row in stack order.
CanonicalDecomposition to_yokoyama(const StateSpace& sys,
                                   const std::vector<Rational>& free_values = {});
// n = r nu; StructuralError otherwise.
CanonicalDecomposition to_asseo(const StateSpace& sys);
// Single input; F is the companion matrix of det(sI - A).
CanonicalDecomposition to_companion(const StateSpace& sys);

// Block companion of Phi(s) = I s^p + T_1 s^{p-1} + ... + T_p.
QMat block_companion(const std::vector<QMat>& T);
// Generalized block companion with super-diagonal blocks [O, I_{l_i}] and
// bottom blocks F_{nu,i}.
QMat generalized_block_companion(const std::vector<int>& l_list,
                                 const std::vector<QMat>& bottom);
// Phi(s) = I s^nu - [O, F_{nu,nu}] s^{nu-1} - ... - [O, F_{nu,1}].
PMat companion_matrix_polynomial(const std::vector<int>& l_list,
                                 const std::vector<QMat>& bottom);
// [O, X]: left-pad X with zero columns to `width`.
QMat pad_left(const QMat& X, int width);

}  // namespace zerolab

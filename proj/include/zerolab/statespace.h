#pragma once

#include <complex>
#include <string>
#include <vector>

#include "zerolab/matrix.h"
#include "zerolab/ratpoly.h"

namespace zerolab {

// x' = Ax + Bu, y = Cx + Du over exact rationals.
struct StateSpace {
  QMat A, B, C, D;

  StateSpace() = default;
  // D defaults to the zero l x r matrix. Throws DomainError on inconsistent
  // dimensions.
  StateSpace(QMat a, QMat b, QMat c, QMat d = QMat());

  int n() const { return A.rows(); }
  int r() const { return B.cols(); }
  int l() const { return C.rows(); }
  bool has_feedthrough() const { return !D.is_zero(); }
  // Throws PreconditionError naming `what` when D != 0.
  void require_strictly_proper(const std::string& what) const;
};

// x -> N x: (N A N^-1, N B, C N^-1, D).
StateSpace similarity(const StateSpace& sys, const QMat& N);
// Dual system (A^T, C^T, B^T, D^T).
StateSpace dual(const StateSpace& sys);

struct ControllabilityInfo {
  int rank_Y = 0;             // rank of [B, AB, ..., A^{n-1}B]
  int nu = 0;                 // index where the rank stops growing
  std::vector<int> l_list;    // l_1 <= ... <= l_nu, sum = rank_Y
  std::vector<int> rank_steps;  // rank [B .. A^{k-1}B], k = 1..nu
  bool controllable = false;
};

// [B, AB, ..., A^{k-1}B]
QMat krylov(const QMat& A, const QMat& B, int k);

ControllabilityInfo controllability(const StateSpace& sys);
// Dual analysis on (A^T, C^T); nu is the observability index.
ControllabilityInfo observability(const StateSpace& sys);

// Restriction to the controllable subspace (basis from the pivot columns of
// the Krylov matrix, completed by unit vectors).
StateSpace controllable_subsystem(const StateSpace& sys);
// Controllable and observable part; same transfer matrix.
StateSpace minimal_realization(const StateSpace& sys);

struct PbhRank {
  std::complex<double> lambda;
  int multiplicity = 1;
  bool exact = false;  // rational eigenvalue, rank computed exactly
  int rank_controllable = 0;  // rank [lambda I - A, B]
  int rank_observable = 0;    // rank [lambda I - A; C]
};

struct EigenStructure {
  Poly charpoly;
  RootSet eigenvalues;
  std::vector<PbhRank> pbh;
};

constexpr double kRankTolerance = 1e-10;

EigenStructure eigen_structure(const StateSpace& sys, double rank_tol = kRankTolerance);

// PBH test at every eigenvalue with Re >= 0.
bool stabilizable(const StateSpace& sys, double rank_tol = kRankTolerance);
bool detectable(const StateSpace& sys, double rank_tol = kRankTolerance);
bool stabilizable(const QMat& A, const QMat& B, double rank_tol = kRankTolerance);

}  // namespace zerolab

#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "zerolab/matrix.h"
#include "zerolab/statespace.h"
#include "zerolab/zeros.h"

namespace zerolab {

// ---- staircase matrices with a prescribed characteristic polynomial

// Square matrix with diagonal blocks of the given sizes, [O, I] shifts from
// block i to block i + 1 and `bottom` as the rows of the last block.
QMat staircase_matrix(const std::vector<int>& sizes, const QMat& bottom);
// Bottom rows making det(sI - staircase) = target. All rows but the last
// hold a single unit that chains the shift paths into one cycle-free path;
// the last row is solved exactly. target must be monic of degree sum(sizes).
QMat chain_companion_rows(const std::vector<int>& sizes, const Poly& target);

// ---- zero assignment

// Output matrix C = [-T*, I_r] N whose zero polynomial is prod (s - t_i).
// Needs (A, B) controllable, rank B = r and n - r distinct targets that are
// not eigenvalues of A.
QMat assign_analytical(const QMat& A, const QMat& B, const std::vector<Rational>& targets);

enum class RankPenalty {
  Gram,          // det(C C^T)^-1
  Observability  // det(sum_{t<gamma} (A^T)^t C^T C A^t)^-1
};

struct AssignmentProblem {
  QMat A, B;
  QMat C0;  // starting C; empty draws a seeded random full-rank one
  std::vector<double> targets;
  double q = 0.25;
  double alpha = 0.05;
  double eps = 0.02;  // stop when sum |dJ/dc_kl| <= eps
  int max_iter = 50000;
  int measured = 0;  // m > 0 restricts C to [C_m, O]
  RankPenalty penalty = RankPenalty::Observability;
  int gamma = 0;  // 0 picks ceil(n / r)
  std::uint64_t seed = 1;
  const std::atomic<bool>* cancel = nullptr;
};

struct GradientResult {
  Eigen::MatrixXd X;  // C for assignment, D for squaring down
  double J = 0, J1 = 0, J2 = 0;
  double grad_norm = 0;  // sum of |dJ/dx_kl| over free entries
  int iterations = 0;    // accepted steps
  double alpha = 0;      // step length at exit
  ZeroList zeros;        // zeros of the resulting square system
};

// Steepest descent on J = 0.5 sum psi(t_i)^2 + q J2 with step halving on
// any increase of J. NumericError when the iteration cap is hit.
GradientResult assign_gradient(const AssignmentProblem& p);

struct SquareDownProblem {
  QMat A, B, C;  // l > r
  QMat D0;       // starting r x l matrix; empty draws a seeded random one
  std::vector<double> targets;  // at most n - r - (existing zeros)
  double q = 0.25;
  double alpha = 0.05;
  double eps = 0.02;
  int max_iter = 50000;
  std::uint64_t seed = 1;
  const std::atomic<bool>* cancel = nullptr;
};

// Same descent over the r x l squaring matrix D, with J2 = det(D D^T)^-1.
GradientResult assign_squaring_down(const SquareDownProblem& p);

struct GradientCheck {
  double j1 = 0;    // relative error of the zero-placement term
  double gram = 0;  // det(X X^T)^-1
  double obs = 0;   // observability penalty (assignment only)
  double total = 0;
  double max() const;
};
// Analytic gradient against central differences (h = 1e-6) at C, term by
// term, as ||analytic - fd|| / ||fd||.
GradientCheck gradient_check(const AssignmentProblem& p, const Eigen::MatrixXd& C);
GradientCheck gradient_check(const SquareDownProblem& p, const Eigen::MatrixXd& D);

// psi(s) = s^{n - r nu} det(C Q(s)) where C Q(s) is Ct(s) of the block
// companion form of (A, B). Evaluated at real s.
double placement_psi(const QMat& A, const QMat& B, const Eigen::MatrixXd& C, double s);

// ---- pole placement

// Monic real polynomial with the given roots; DomainError unless the set
// is closed under conjugation. Coefficients are rounded to double first.
Poly poly_from_poles(const std::vector<std::complex<double>>& poles);
// K with det(sI - A - B K) = target, through the block companion form.
// StructuralError when (A, B) is not controllable.
QMat place(const QMat& A, const QMat& B, const Poly& target);
// L with det(sI - A + L C) = target (dual of place).
QMat place_observer(const QMat& A, const QMat& C, const Poly& target);

// ---- servo problems

// x' = Ax + Bu + Ew, z = Dx, y = Hx + Fw.
struct ServoPlant {
  QMat A, B, E, D, H, F;
};

struct PiConditions {
  bool stabilizable = false;
  bool d_le_r = false;
  int origin_rank = 0;  // rank [[-A, -B], [D, O]]
  bool no_origin_zero = false;
  bool ok() const { return stabilizable && d_le_r && no_origin_zero; }
};
PiConditions pi_solvable(const QMat& A, const QMat& B, const QMat& D);

struct ObserverConditions {
  bool detectable = false;  // (A^T, H^T) stabilizable
  bool l_ge_p = false;
  int origin_rank = 0;  // rank [[-A, -E], [H, F]]
  bool no_origin_zero = false;
  bool ok() const { return detectable && l_ge_p && no_origin_zero; }
};
ObserverConditions observer_solvable(const QMat& A, const QMat& E, const QMat& H, const QMat& F);

struct ServoConditions {
  bool stabilizable = false;
  bool d_le_r = false;
  bool zeros_disjoint = false;  // transmission zeros avoid the roots of phi
  bool model_controllable = true;  // companion blocks with a unit input
  ZeroList transmission;
  ZeroList reference_roots;
  // Sufficient conditions only: false means "not established".
  bool ok() const { return stabilizable && d_le_r && zeros_disjoint && model_controllable; }
};
ServoConditions servo_solvable(const QMat& A, const QMat& B, const QMat& D, const Poly& phi);

struct RegulatorRealization {
  QMat K1, K2;       // u = K1 x (or x hat) + K2 q
  QMat L;            // observer gain on [x; w], empty without observer
  QMat F, Gamma;     // internal model, q' = F q + Gamma e
  // Exogenous input [z_ref; w], output z. States start with x and q.
  StateSpace closed_loop;
  int d = 0;  // reference dimension
  ZeroList closed_loop_poles;
};

// PI loop around the full state (observer_poles empty) or around the
// observer estimate of [x; w].
RegulatorRealization synthesize_pi(const ServoPlant& plant,
                                   const std::vector<std::complex<double>>& poles,
                                   const std::vector<std::complex<double>>& observer_poles = {});
// eta chained integrators for polynomial references of degree eta - 1.
RegulatorRealization synthesize_polynomial_tracking(const QMat& A, const QMat& B, const QMat& D,
                                                    int eta,
                                                    const std::vector<std::complex<double>>& poles);
// Internal model F = diag(companion(phi)), Gamma = diag(e_beta).
RegulatorRealization synthesize_servo(const QMat& A, const QMat& B, const QMat& D, const QMat& E,
                                      const Poly& phi,
                                      const std::vector<std::complex<double>>& poles);

// ---- maximal accuracy

enum class AccuracyClass { Unlimited, Limited };
std::string to_string(AccuracyClass c);

struct RiccatiPoint {
  double rho = 0;
  Eigen::MatrixXd P;
  double norm = 0;  // Frobenius
  int iterations = 0;
};

struct AccuracyReport {
  AccuracyClass kind = AccuracyClass::Limited;
  std::string reason;
  ZeroList transmission;
  std::vector<RiccatiPoint> trend;
  std::vector<std::string> warnings;
};

// Kleinman iteration for A^T P + P A - P B R^-1 B^T P + Q = 0 from a gain
// K0 with A - B K0 stable. NumericError when the residual stays above tol.
Eigen::MatrixXd riccati_kleinman(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                 const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                                 const Eigen::MatrixXd& K0, double tol = 1e-10, int cap = 200,
                                 int* iterations = nullptr);
// Solves A^T P + P A = -Q.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

// sys.C is the regulated output. Needs a controllable and observable system.
AccuracyReport max_accuracy_class(const StateSpace& sys,
                                  const std::vector<double>& rhos = {1, 1e-2, 1e-4, 1e-6});

}  // namespace zerolab

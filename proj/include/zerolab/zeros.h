#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zerolab/canon.h"
#include "zerolab/matrix.h"
#include "zerolab/statespace.h"

namespace zerolab {

using ZeroList = std::vector<std::complex<double>>;

// Monic zero polynomial with its roots. `degenerate` marks a system whose
// relevant minors all vanish (zeros everywhere); `poly` is then whatever
// lower-order gcd was found.
struct ZeroPoly {
  Poly poly{1};
  RootSet roots;
  bool degenerate = false;
};
ZeroPoly make_zero_poly(const Poly& p, bool degenerate = false);

// [[sI - A, -B], [C, O]]. Requires D = 0.
PMat system_matrix(const StateSpace& sys);

// Product of the invariant polynomials of P(s).
ZeroPoly invariant_zeros(const StateSpace& sys);
// Gcd of the nonzero minors of P(s) that keep all n state rows and columns,
// at the largest order n + delta where one exists. degenerate when
// delta < min(r, l).
ZeroPoly system_zeros(const StateSpace& sys);
int system_zero_delta(const StateSpace& sys);

struct DecouplingZeros {
  ZeroPoly input;   // invariant polynomials of [sI - A, B]
  ZeroPoly output;  // invariant polynomials of [sI - A; C]
  ZeroPoly io;      // psi_id psi_od psi_p / psi_n
  bool identity_exact = true;  // the division above was exact
};
DecouplingZeros decoupling_zeros(const StateSpace& sys);

struct ZeroReport {
  ZeroPoly system, invariant, transmission;
  DecouplingZeros decoupling;
  bool inclusions_hold = false;  // {p} in {i} in {n}
  bool identity_holds = false;   // {n} = {p} + {o.d.} + {i.d.} - {i.o.d.}
};
ZeroReport zero_report(const StateSpace& sys);

// Ct(s) = sum [O, C_i] s^{i-1} from C N^-1 of the block companion form.
PMat output_polynomial(const StateSpace& sys, const CanonicalDecomposition& cd);
// Same polynomial from the Markov parameters C A^k B, the bottom blocks
// F_{nu,i} and G_nu M^T, without N^-1.
PMat output_polynomial_markov(const StateSpace& sys, const CanonicalDecomposition& cd);

// r = l: s^{n - r nu} det Ct(s). l > r: gcd of s^{n - r nu} times the
// order-r minors of Ct(s). r > l: the same on the dual system, which needs
// (A, C) observable. Throws StructuralError when the needed pair is not
// controllable.
ZeroPoly zero_poly_matrix_polynomial(const StateSpace& sys);

enum class CountKind { Exact, UpperBound, Degenerate };
std::string to_string(CountKind k);
struct ZeroCountBound {
  CountKind kind = CountKind::UpperBound;
  int value = 0;
  int leading_power = -1;  // highest k with a nonzero coefficient of s^k in Ct(s)
  int leading_rank = 0;    // rank of that coefficient
};
// Degree bound n - r nu + r k - (r - rho) read off the leading nonzero
// coefficient (power k, rank rho) of Ct(s). Exact when r = l and rho = r.
ZeroCountBound zero_count_bound(const StateSpace& sys);

// sD + L
struct Pencil {
  QMat D, L;
  std::string description;
};
Poly pencil_det(const Pencil& p);

enum class PencilKind {
  SystemMatrix,    // [[-A, -B], [C, O]]
  SquaredOutputs,  // [[-A, -B], [K C, O]], K is r x l
  SquaredInputs,   // [[-A, -B K], [C, O]], K is r x l
  OutputFeedback,  // [[-A, O, B], [-C, I, O], [O, K, I]], det = det(sI - A - BKC)
  OutputSelection, // [[-A, O, B], [-C, I, O], [O, K, O]]
  InputSelection,  // [[-A, O, B], [-C, O, O], [O, K, I]]
};
Pencil build_pencil(const StateSpace& sys, PencilKind kind, const QMat& K = QMat());

struct ReducedPencil {
  Pencil pencil;
  bool cb_nonsingular = false;
  int origin_removed = 0;  // r - l_{nu-1} eigenvalues at 0 dropped (singular CB)
  ZeroPoly zeros;
};
// Square controllable systems. det CB != 0: (n - r) matrix [E; T]. Otherwise
// the regular pencil of order n - l_{nu-1}. DegenerateError when the pencil
// is singular.
ReducedPencil reduced_pencil(const StateSpace& sys);

// Full-rank rows x cols matrix with entries in [-5, 5].
QMat random_full_rank(int rows, int cols, std::uint64_t seed);

// r = l: exact det of the system-matrix pencil. r != l: two random squaring
// matrices and the intersection of the two root multisets; `poly` is the
// exact gcd of the two squared-down polynomials.
ZeroPoly zeros_pencil(const StateSpace& sys, std::uint64_t seed = 1);

struct HighGainResult {
  ZeroList all, decoupling, transmission;
};
constexpr double kHighGain = 1e8;
// Finite eigenvalues (|lambda| <= sqrt(k)) of A + k B K_i C, intersected over
// K_1 and K_2. Decoupling zeros are the eigenvalues shared by A + B K_i C,
// and the transmission zeros are what remains.
HighGainResult zeros_highgain(const StateSpace& sys, double k, const QMat& K1, const QMat& K2);
HighGainResult zeros_highgain(const StateSpace& sys, std::uint64_t seed = 1, double k = kHighGain);
// Finite eigenvalues of A + k B K C.
ZeroList highgain_finite_eigenvalues(const StateSpace& sys, double k, const QMat& K);

struct InterpolationResult {
  ZeroPoly zeros;
  int bound = 0;                         // number of samples minus one
  std::vector<Rational> samples;
  int confirmed = 0;                     // roots where P(s) drops rank
};
// r = l. Samples psi(s_i) = det(s_i I - A) det G(s_i) at s_i = i + 1/2 and
// solves the Vandermonde system exactly.
InterpolationResult zeros_interpolation(const StateSpace& sys);

// Zero polynomials of many systems by the minors route. The parallel
// version distributes systems over threads; results keep the input order.
std::vector<ZeroPoly> batch_system_zeros(const std::vector<StateSpace>& systems);
std::vector<ZeroPoly> batch_system_zeros_serial(const std::vector<StateSpace>& systems);

}  // namespace zerolab

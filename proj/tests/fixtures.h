#pragma once

// Small systems shared by the unit tests and the acceptance binary.

#include <ostream>
#include <random>

#include "zerolab/statespace.h"

namespace zerolab {
// Readable gtest failure output.
inline void PrintTo(const Poly& p, std::ostream* os) { *os << p.to_string(); }
}  // namespace zerolab

namespace zerolab::fixtures {

inline Rational q(const char* s) { return parse_rational(s); }

// Single input, companion target s^3 - 3s^2 + 2s - 1.
inline StateSpace single_input_3() {
  return StateSpace(QMat{{2, 1, 0}, {0, 1, 1}, {1, 0, 0}}, QMat{{1}, {0}, {0}}, QMat(0, 3));
}

// n = 4, r = 2, nu = 2: Asseo form exists.
inline QMat asseo_A() { return QMat{{2, 1, 0, 1}, {1, 0, 1, 1}, {1, 1, 0, 0}, {0, 0, 1, 0}}; }
inline QMat asseo_B() { return QMat{{1, 0}, {0, 0}, {0, 0}, {0, 1}}; }
inline StateSpace asseo_pair() { return StateSpace(asseo_A(), asseo_B(), QMat(0, 4)); }

// n = 4, r = 2, nu = 3, l = (1, 1, 2): needs the Yokoyama form.
inline QMat yoko_A() { return QMat{{2, 1, 0, 0}, {0, 1, 0, 1}, {0, 2, 0, 0}, {1, 1, 0, 0}}; }
inline QMat yoko_B() { return QMat{{1, 0}, {0, 0}, {0, 0}, {0, 1}}; }
inline StateSpace yoko_pair() { return StateSpace(yoko_A(), yoko_B(), QMat(0, 4)); }

// Zero at s = 1.
inline StateSpace two_by_two_zero_at_one() {
  return StateSpace(QMat{{0, 1, 0}, {0, 0, 1}, {-6, -11, -6}}, QMat{{-1, 0}, {0, 0}, {0, -1}},
                    QMat{{0, -1, 1}, {-1, -1, 0}});
}

// SISO, zero at 0 with x0 = (1, -1), u0 = -2.
inline StateSpace siso_zero_at_origin() {
  return StateSpace(QMat{{2, 0}, {1, 1}}, QMat{{1}, {0}}, QMat{{1, 1}});
}

// SISO with a double invariant zero at -3; G(s) = (s+3)/((s-1)(s+1)).
inline StateSpace siso_double_zero() {
  return StateSpace(QMat{{1, 4, 0}, {0, -1, 0}, {0, 2, -3}}, QMat{{0}, {-1}, {-1}},
                    QMat{{-1, -1, 0}});
}

// Square 2x2 with transmission zero -1 and G(-1) of rank 1.
inline StateSpace square_asseo_plant() {
  return StateSpace(asseo_A(), asseo_B(), QMat{{1, 0, 0, 0}, {0, 1, 1, 0}});
}

// Non-square: input decoupling zero 1, output decoupling zero -3.
inline StateSpace nonsquare_decoupling() {
  return StateSpace(QMat{{1, 0, 0}, {0, -1, 0}, {0, 0, -3}}, QMat{{0}, {-1}, {-1}},
                    QMat{{1, -1, 0}, {0, 2, 0}});
}

// {n} = {1,-1,3}, {i} = {1,-1}, {p} = {3}, {i.d.} = {1}, {o.d.} = {-1}.
inline StateSpace mixed_decoupling() {
  return StateSpace(QMat{{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, -5, 0}, {0, 0, 0, 7}},
                    QMat{{0}, {-1}, {-1}, {-1}}, QMat{{1, 0, 2, 1}, {0, 0, 2, 1}});
}

// No zeros at all.
inline StateSpace no_zeros() {
  return StateSpace(QMat{{1, 0, 0}, {0, -1, -1}, {1, 0, -1}}, QMat{{-1}, {0}, {0}},
                    QMat{{1, 0, 0}, {0, 2, 0}});
}

// Series connection of two plants; zeros {3/2, -1}.
inline StateSpace cascade() {
  return StateSpace(QMat{{1, 0, 0, 0}, {0, 2, 0, 0}, {1, 1, 2, 0}, {0, 0, 1, 1}},
                    QMat{{1}, {1}, {0}, {0}}, QMat{{0, 0, 1, 2}});
}

// Plant with dynamic output feedback in the loop; zeros {2, 1}.
inline StateSpace dynamic_feedback_loop() {
  return StateSpace(QMat{{-2, -1, -1}, {1, 2, 0}, {1, 1, 2}}, QMat{{1}, {0}, {0}},
                    QMat{{1, 1, 0}});
}

// Square systems on the nu = 3 pair.
inline StateSpace yoko_square_a() {  // zero polynomial s^2 + s - 2
  return StateSpace(yoko_A(), yoko_B(), QMat{{1, -1, 1, 0}, {1, 1, 0, 1}});
}
inline StateSpace yoko_square_b() {  // CB = I, zero polynomial s^2 - s + 2
  return StateSpace(yoko_A(), yoko_B(), QMat{{1, 0, 0, 0}, {0, 0, 1, 1}});
}
inline StateSpace yoko_square_c() {  // CB singular, zero polynomial s - 2
  return StateSpace(yoko_A(), yoko_B(), QMat{{1, -1, 1, 0}, {1, 0, 0, 0}});
}

// Square 2x2 with nu = 2 and zero polynomial s^2 - 1.
inline StateSpace asseo_square_b() {
  return StateSpace(asseo_A(), QMat{{0, 0}, {1, 0}, {0, 1}, {0, 0}},
                    QMat{{1, 1, 0, 0}, {0, 0, 1, 1}});
}

// Antenna drive: plant, disturbance input E and regulated output D.
inline StateSpace antenna() {
  return StateSpace(QMat{{0, 1}, {0, q("-4.6")}}, QMat{{0}, {q("0.787")}}, QMat{{1, 0}});
}
inline QMat antenna_E() { return QMat{{0}, {q("0.1")}}; }
inline QMat antenna_D() { return QMat{{1, 1}}; }

// 3x3 polynomial matrix with Smith form diag(1, 1, s^3 - s).
inline PMat smith_fixture() {
  const Poly s = Poly::s();
  return PMat{{s, 0, 0}, {0, s, s + Poly(1)}, {s, s - Poly(1), 0}};
}

// 4x3 rational matrix with Smith-McMillan diagonal 1/(s(s+1)^2),
// (s+2)/(s+1)^2, (s+2)/(s+1).
inline RMat mcmillan_fixture() {
  const Poly s = Poly::s();
  auto f = [](Poly n, Poly d) { return RatFn(std::move(n), std::move(d)); };
  Poly phi = s * (s + 1) * (s + 1);
  RMat w(4, 3);
  w(0, 0) = f(1, phi);
  w(0, 1) = f(s * s + 2 * s - 1, phi);
  w(0, 2) = f(s + 2, s + 1);
  w(1, 1) = f(s + 2, pow(s + 1, 2));
  w(2, 2) = f(3 * (s + 2), s + 1);
  w(3, 0) = f(s + 3, phi);
  w(3, 1) = f(2 * s * s + 3 * s - 3, phi);
  w(3, 2) = f(s + 2, s + 1);
  return w;
}

// Entries uniform in [-3, 3].
inline StateSpace random_system(std::mt19937_64& rng, int n, int r, int l) {
  std::uniform_int_distribution<int> d(-3, 3);
  QMat A(n, n), B(n, r), C(l, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = d(rng);
    for (int j = 0; j < r; ++j) B(i, j) = d(rng);
    for (int j = 0; j < l; ++j) C(j, i) = d(rng);
  }
  return StateSpace(A, B, C);
}

// Redraws until (A, B) is controllable and (A, C) observable.
inline StateSpace random_minimal_system(std::mt19937_64& rng, int n, int r, int l) {
  for (;;) {
    StateSpace sys = random_system(rng, n, r, l);
    if (controllability(sys).controllable && observability(sys).controllable) return sys;
  }
}

}  // namespace zerolab::fixtures

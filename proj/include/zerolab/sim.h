#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

#include "zerolab/design.h"
#include "zerolab/statespace.h"

namespace zerolab {

struct Trajectory {
  std::vector<double> t;  // uniform grid
  std::vector<Eigen::VectorXd> x, y;
};

using Signal = std::function<Eigen::VectorXd(double)>;

// Fixed-step RK4 on x' = Ax + Bu, y = Cx + Du. The input is sampled at the
// stage times. The last step is shortened to land on the horizon.
Trajectory simulate_linear(const StateSpace& sys, const Signal& u, const Eigen::VectorXd& x0,
                           double horizon, double step = 1e-3);

// Columns t, x1..xn, y1..yl.
void write_csv(std::ostream& os, const Trajectory& traj);

// err(h) / err(h / 2) for x' = -x on [0, 1]; about 16 for a 4th-order rule.
double rk4_order_ratio(double h = 0.1);

// ---- output zeroing

struct BlockingScenario {
  std::complex<double> zero;
  Eigen::VectorXcd x0, u0;  // P(zero) [x0; u0] = 0, |u0| = 1 when u0 != 0
  double residual = 0;      // |P(zero) [x0; u0]|
  bool exact = false;       // null vector found in rational arithmetic
  double horizon = 5;       // shortened so |u| stays below 1e6
};

// Needs an invariant zero of sys (PreconditionError otherwise). A rational
// zero uses the exact null space of P(zero); other zeros the smallest right
// singular vector.
BlockingScenario blocking_scenario(const StateSpace& sys, std::complex<double> zero,
                                   double horizon = 5);

struct BlockingRun {
  Trajectory traj;
  double max_output = 0;  // max |y(t)| on the grid
  double bound = 0;       // 1e-6 (1 + |u0|)
  bool blocked() const { return max_output <= bound; }
};
// Simulates Re(x0 e^{zero t}) driven by Re(u0 e^{zero t}). The step is cut
// to 2e-3 / Re(zero) for fast growing zeros.
BlockingRun simulate_blocking(const StateSpace& sys, const BlockingScenario& sc, double step = 1e-3);

// ---- reference tracking

struct TrackingScenario {
  Signal reference;    // z_ref(t), d entries
  Signal disturbance;  // w(t); empty when the loop has no disturbance input
  Eigen::VectorXd x0;  // closed-loop initial state; empty means zero
  double horizon = 80;
  double step = 1e-3;
  std::vector<double> checkpoints;  // times where the error is sampled; empty means the horizon
};

struct TrackingResult {
  Trajectory traj;
  std::vector<double> errors;  // |z - z_ref| at each checkpoint
  double max_error = 0;        // over the checkpoints
};

// PreconditionError with the eigenvalues when the closed loop is not stable.
TrackingResult simulate_tracking(const RegulatorRealization& reg, const TrackingScenario& sc);

}  // namespace zerolab

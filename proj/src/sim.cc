#include "zerolab/sim.h"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "zerolab/errors.h"
#include "zerolab/zeros.h"

namespace zerolab {

namespace {

struct NumericSystem {
  Eigen::MatrixXd A, B, C, D;

  explicit NumericSystem(const StateSpace& sys)
      : A(to_eigen(sys.A)), B(to_eigen(sys.B)), C(to_eigen(sys.C)), D(to_eigen(sys.D)) {
    if (D.size() == 0) D = Eigen::MatrixXd::Zero(C.rows(), B.cols());
  }

  Eigen::VectorXd f(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    return u.size() ? Eigen::VectorXd(A * x + B * u) : Eigen::VectorXd(A * x);
  }
  Eigen::VectorXd out(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    return u.size() ? Eigen::VectorXd(C * x + D * u) : Eigen::VectorXd(C * x);
  }
};

}  // namespace

Trajectory simulate_linear(const StateSpace& sys, const Signal& u, const Eigen::VectorXd& x0,
                           double horizon, double step) {
  if (!(step > 0)) throw DomainError("step must be positive");
  if (horizon < step) throw DomainError("horizon must be at least one step");
  if (x0.size() != sys.n()) throw SizeError("initial state has the wrong length");
  NumericSystem m(sys);
  auto input = [&](double t) {
    if (!u) return Eigen::VectorXd(Eigen::VectorXd::Zero(sys.r()));
    Eigen::VectorXd v = u(t);
    if (v.size() != sys.r()) throw SizeError("input signal has the wrong length");
    return v;
  };
  const long steps = std::lround(std::ceil(horizon / step - 1e-9));
  Trajectory tr;
  tr.t.reserve(steps + 1);
  tr.x.reserve(steps + 1);
  tr.y.reserve(steps + 1);
  Eigen::VectorXd x = x0;
  double t = 0;
  tr.t.push_back(t);
  tr.x.push_back(x);
  tr.y.push_back(m.out(x, input(t)));
  for (long k = 1; k <= steps; ++k) {
    double t1 = std::min(horizon, k * step);
    double h = t1 - t;
    Eigen::VectorXd um = input(t + h / 2);
    Eigen::VectorXd k1 = m.f(x, input(t));
    Eigen::VectorXd k2 = m.f(x + h / 2 * k1, um);
    Eigen::VectorXd k3 = m.f(x + h / 2 * k2, um);
    Eigen::VectorXd k4 = m.f(x + h * k3, input(t1));
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t = t1;
    tr.t.push_back(t);
    tr.x.push_back(x);
    tr.y.push_back(m.out(x, input(t)));
  }
  return tr;
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  const long nx = traj.x.empty() ? 0 : traj.x[0].size();
  const long ny = traj.y.empty() ? 0 : traj.y[0].size();
  os << "t";
  for (long i = 1; i <= nx; ++i) os << ",x" << i;
  for (long i = 1; i <= ny; ++i) os << ",y" << i;
  os << "\n";
  std::ostringstream line;
  line << std::setprecision(12);
  for (size_t k = 0; k < traj.t.size(); ++k) {
    line.str("");
    line << traj.t[k];
    for (long i = 0; i < nx; ++i) line << "," << traj.x[k](i);
    for (long i = 0; i < ny; ++i) line << "," << traj.y[k](i);
    os << line.str() << "\n";
  }
}

double rk4_order_ratio(double h) {
  StateSpace sys(QMat{{-1}}, QMat(1, 0), QMat{{1}});
  Eigen::VectorXd x0(1);
  x0 << 1;
  auto err = [&](double step) {
    Trajectory tr = simulate_linear(sys, nullptr, x0, 1.0, step);
    return std::abs(tr.x.back()(0) - std::exp(-1.0));
  };
  return err(h) / err(h / 2);
}

// ---- output zeroing

BlockingScenario blocking_scenario(const StateSpace& sys, std::complex<double> zero, double horizon) {
  sys.require_strictly_proper("blocking scenario");
  const int n = sys.n(), r = sys.r();
  ZeroPoly inv = invariant_zeros(sys);
  if (inv.degenerate) throw DegenerateError("every s is an invariant zero of a degenerate system");
  ZeroList zs = inv.roots.flat();
  if (zs.empty()) throw PreconditionError("system has no invariant zeros to block with");
  bool member = std::any_of(zs.begin(), zs.end(), [&](std::complex<double> z) {
    return std::abs(z - zero) <= 1e-6 * (1 + std::abs(zero));
  });
  if (!member) throw PreconditionError("requested value is not an invariant zero");

  PMat P = system_matrix(sys);
  BlockingScenario sc;
  sc.zero = zero;
  Eigen::VectorXcd v;
  std::optional<Rational> exact;
  if (std::abs(zero.imag()) <= 1e-12) exact = rational_root_near(inv.poly, zero.real());
  if (exact) {
    QMat N = nullspace(eval(P, *exact));
    int pick = 0;
    for (int j = 0; j < N.cols(); ++j) {
      bool has_u = false;
      for (int i = n; i < n + r; ++i) has_u = has_u || N(i, j) != 0;
      if (has_u) {
        pick = j;
        break;
      }
    }
    v = to_eigen(N.col(pick)).cast<std::complex<double>>();
    sc.zero = std::complex<double>(exact->get_d(), 0);
    sc.exact = true;
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eval(P, zero), Eigen::ComputeFullV);
    v = svd.matrixV().col(svd.matrixV().cols() - 1);
    // Rotate so the largest entry is real; the real part then carries the
    // whole solution when the zero is real.
    Eigen::Index k;
    v.cwiseAbs().maxCoeff(&k);
    v *= std::conj(v(k)) / std::abs(v(k));
  }
  sc.x0 = v.head(n);
  sc.u0 = v.tail(r);
  double scale = sc.u0.norm() > 1e-12 ? sc.u0.norm() : v.norm();
  sc.x0 /= scale;
  sc.u0 /= scale;
  Eigen::VectorXcd full(n + r);
  full << sc.x0, sc.u0;
  sc.residual = (eval(P, sc.zero) * full).norm();
  sc.horizon = horizon;
  double grow = sc.zero.real();
  double un = sc.u0.norm();
  if (grow > 0 && un > 0) sc.horizon = std::min(horizon, std::log(1e6 / un) / grow);
  return sc;
}

BlockingRun simulate_blocking(const StateSpace& sys, const BlockingScenario& sc, double step) {
  const std::complex<double> a = sc.zero;
  const Eigen::VectorXcd u0 = sc.u0;
  Signal u = [a, u0](double t) { return Eigen::VectorXd((u0 * std::exp(a * t)).real()); };
  // Fixed-step error grows with (h Re a)^4 times the e^{a t} amplitude;
  // fast unstable zeros get a finer grid.
  if (a.real() * step > 2e-3) step = 2e-3 / a.real();
  BlockingRun run;
  run.traj = simulate_linear(sys, u, sc.x0.real(), sc.horizon, step);
  for (const auto& y : run.traj.y) run.max_output = std::max(run.max_output, y.norm());
  run.bound = 1e-6 * (1 + sc.u0.norm());
  return run;
}

// ---- reference tracking

TrackingResult simulate_tracking(const RegulatorRealization& reg, const TrackingScenario& sc) {
  const StateSpace& cl = reg.closed_loop;
  ZeroList poles = reg.closed_loop_poles;
  if (poles.empty() && cl.n() > 0) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(cl.A), false);
    poles.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  }
  for (const auto& p : poles)
    if (p.real() >= 0) {
      std::ostringstream os;
      os << "closed loop is not stable; eigenvalues:";
      for (const auto& q : poles) os << " " << q.real() << (q.imag() < 0 ? "" : "+") << q.imag() << "j";
      throw PreconditionError(os.str());
    }
  if (!sc.reference) throw DomainError("tracking needs a reference signal");
  const int d = reg.d;
  const int p = cl.r() - d;
  Signal exo = [&](double t) {
    Eigen::VectorXd v(cl.r());
    Eigen::VectorXd z = sc.reference(t);
    if (z.size() != d) throw SizeError("reference has the wrong length");
    v.head(d) = z;
    if (p > 0) {
      Eigen::VectorXd w = sc.disturbance ? sc.disturbance(t) : Eigen::VectorXd::Zero(p);
      if (w.size() != p) throw SizeError("disturbance has the wrong length");
      v.tail(p) = w;
    }
    return v;
  };
  Eigen::VectorXd x0 = sc.x0.size() ? sc.x0 : Eigen::VectorXd::Zero(cl.n());
  TrackingResult res;
  res.traj = simulate_linear(cl, exo, x0, sc.horizon, sc.step);
  std::vector<double> checks = sc.checkpoints.empty() ? std::vector<double>{sc.horizon} : sc.checkpoints;
  for (double tc : checks) {
    auto it = std::lower_bound(res.traj.t.begin(), res.traj.t.end(), tc - sc.step / 2);
    if (it == res.traj.t.end()) throw DomainError("checkpoint beyond the horizon");
    size_t k = it - res.traj.t.begin();
    double e = (res.traj.y[k] - sc.reference(res.traj.t[k])).norm();
    res.errors.push_back(e);
    res.max_error = std::max(res.max_error, e);
  }
  return res;
}

}  // namespace zerolab

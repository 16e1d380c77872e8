#include "zerolab/ratpoly.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "zerolab/errors.h"

namespace zerolab {

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw InputError("empty number");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + s + "'");
    Rational q = num / den;
    q.canonicalize();
    return q;
  }
  size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long exp10 = 0;
  bool seen_digit = false;
  bool seen_dot = false;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      seen_digit = true;
      if (seen_dot) --exp10;
    } else if (ch == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw InputError("not a number: '" + s + "'");
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw InputError("not a number: '" + s + "'");
    ++i;
    if (i >= s.size()) throw InputError("not a number: '" + s + "'");
    size_t used = 0;
    long e = 0;
    try {
      e = std::stol(s.substr(i), &used);
    } catch (const std::exception&) {
      throw InputError("bad exponent in '" + s + "'");
    }
    if (i + used != s.size()) throw InputError("not a number: '" + s + "'");
    exp10 += e;
  }
  mpz_class mant(digits, 10);
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  Rational q = exp10 >= 0 ? Rational(mant * pow10) : Rational(mant, pow10);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite value");
  Rational q(x);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------- Poly

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
  for (auto& q : c_) q.canonicalize();
  trim();
}

Poly::Poly(const Rational& c) {
  if (c != 0) c_.push_back(c);
}

Poly::Poly(int c) {
  if (c != 0) c_.emplace_back(c);
}

Poly Poly::monomial(const Rational& c, int degree) {
  if (c == 0) return Poly();
  std::vector<Rational> v(degree + 1);
  v[degree] = c;
  return Poly(std::move(v));
}

Poly Poly::from_roots(const std::vector<Rational>& roots) {
  Poly p(1);
  for (const auto& r : roots) p *= Poly(std::vector<Rational>{-r, 1});
  return p;
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return 0;
  return c_[k];
}

const Rational& Poly::lead() const {
  if (c_.empty()) throw DomainError("leading coefficient of zero polynomial");
  return c_.back();
}

int Poly::low_order() const {
  for (size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] != 0) return static_cast<int>(k);
  }
  return -1;
}

Poly Poly::monic() const {
  if (c_.empty()) return *this;
  Poly r = *this;
  Rational inv = 1 / c_.back();
  r *= inv;
  return r;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  std::vector<Rational> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
  return Poly(std::move(d));
}

Poly Poly::shift_down(int k) const {
  if (k <= 0) return *this;
  if (is_zero()) return *this;
  if (low_order() < k) throw DomainError("polynomial not divisible by s^k");
  return Poly(std::vector<Rational>(c_.begin() + k, c_.end()));
}

Rational Poly::eval(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::complex<double> Poly::eval(std::complex<double> z) const {
  std::complex<double> acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + it->get_d();
  return acc;
}

std::vector<double> Poly::to_double() const {
  std::vector<double> out;
  out.reserve(c_.size());
  for (const auto& q : c_) out.push_back(q.get_d());
  return out;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& q : r.c_) q = -q;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Rational> out(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  Poly r;
  r.c_ = std::move(out);
  r.trim();
  return r;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Rational& k) {
  if (k == 0) {
    c_.clear();
    return *this;
  }
  for (auto& q : c_) q *= k;
  return *this;
}

std::string Poly::to_string(char var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = c_[k];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool unit = mag == 1;
    if (k == 0 || !unit) {
      if (mag.get_den() != 1 && k > 0) {
        os << "(" << mag.get_str() << ")";
      } else {
        os << mag.get_str();
      }
    }
    if (k >= 1) os << var;
    if (k >= 2) os << "^" << k;
  }
  return os.str();
}

std::vector<std::string> Poly::coeff_strings() const {
  std::vector<std::string> out;
  out.reserve(c_.size());
  for (const auto& q : c_) out.push_back(q.get_str());
  return out;
}

DivMod divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DomainError("division by zero polynomial");
  std::vector<Rational> rem = a.coeffs();
  int db = b.degree();
  int da = a.degree();
  if (da < db) return {Poly(), a};
  std::vector<Rational> q(da - db + 1);
  Rational inv = 1 / b.lead();
  const auto& bc = b.coeffs();
  for (int k = da - db; k >= 0; --k) {
    Rational t = rem[k + db] * inv;
    q[k] = t;
    if (t == 0) continue;
    for (int j = 0; j <= db; ++j) rem[k + j] -= t * bc[j];
  }
  rem.resize(db);
  return {Poly(std::move(q)), Poly(std::move(rem))};
}

Poly exact_div(const Poly& a, const Poly& b) {
  DivMod dm = divmod(a, b);
  if (!dm.rem.is_zero()) throw DomainError("inexact polynomial division");
  return dm.quot;
}

bool divides(const Poly& d, const Poly& a) {
  if (d.is_zero()) return a.is_zero();
  return divmod(a, d).rem.is_zero();
}

Poly poly_gcd(const Poly& p, const Poly& q) {
  if (p.is_zero() && q.is_zero()) throw DomainError("gcd of two zero polynomials");
  Poly a = p.monic();
  Poly b = q.monic();
  while (!b.is_zero()) {
    Poly r = divmod(a, b).rem;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

Poly poly_lcm(const Poly& p, const Poly& q) {
  if (p.is_zero() || q.is_zero()) return Poly();
  return exact_div(p * q, poly_gcd(p, q)).monic();
}

Poly pow(const Poly& p, int k) {
  Poly r(1);
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

std::vector<std::pair<Poly, int>> squarefree_decompose(const Poly& p) {
  if (p.is_zero()) throw DomainError("squarefree decomposition of zero polynomial");
  std::vector<std::pair<Poly, int>> out;
  if (p.degree() == 0) return out;
  // Yun's algorithm over Q.
  Poly f = p.monic();
  Poly df = f.derivative();
  Poly a = poly_gcd(f, df);
  Poly b = exact_div(f, a);
  Poly c = exact_div(df, a) - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    Poly d = c.is_zero() ? b : poly_gcd(b, c);
    if (d.degree() > 0) out.emplace_back(d.monic(), i);
    b = exact_div(b, d);
    c = exact_div(c, d) - b.derivative();
    ++i;
  }
  return out;
}

// ---------------------------------------------------------------- roots

int RootSet::count() const {
  int n = 0;
  for (const auto& r : roots) n += r.multiplicity;
  return n;
}

std::vector<std::complex<double>> RootSet::flat() const {
  std::vector<std::complex<double>> out;
  for (const auto& r : roots) {
    for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.value);
  }
  return out;
}

namespace {

// Parlett-Reinsch balancing with power-of-two scalings.
void balance(Eigen::MatrixXd& m) {
  const double radix = 2.0;
  const int n = static_cast<int>(m.rows());
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double c = 0, r = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(m(j, i));
        r += std::abs(m(i, j));
      }
      if (c == 0 || r == 0) continue;
      double g = r / radix;
      double f = 1.0;
      double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
}

using cld = std::complex<long double>;

struct Eval {
  cld value;
  cld deriv;
  long double magnitude;  // sum |c_k| |z|^k, the backward-error scale
};

Eval horner(const std::vector<long double>& c, cld z) {
  cld p = 0, dp = 0;
  long double mag = 0;
  long double az = std::abs(z);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
    mag = mag * az + std::fabs(*it);
  }
  return {p, dp, mag};
}

std::complex<double> polish(const std::vector<long double>& c, std::complex<double> z0,
                            double tol) {
  cld z(z0.real(), z0.imag());
  cld best = z;
  long double best_res = std::numeric_limits<long double>::infinity();
  for (int it = 0; it < 60; ++it) {
    Eval e = horner(c, z);
    long double res = std::abs(e.value) / std::max(e.magnitude, 1e-300L);
    if (res < best_res) {
      best_res = res;
      best = z;
    }
    if (res == 0) break;
    if (std::abs(e.deriv) == 0) break;
    cld step = e.value / e.deriv;
    z -= step;
    if (std::abs(step) <= 1e-18L * std::max<long double>(1, std::abs(z))) {
      Eval f = horner(c, z);
      long double r2 = std::abs(f.value) / std::max(f.magnitude, 1e-300L);
      if (r2 < best_res) {
        best_res = r2;
        best = z;
      }
      break;
    }
  }
  std::complex<double> out(static_cast<double>(best.real()),
                           static_cast<double>(best.imag()));
  if (best_res > tol) throw NumericError("root refinement did not converge", out);
  return out;
}

std::vector<std::complex<double>> squarefree_roots(const Poly& f, double tol) {
  const int n = f.degree();
  std::vector<std::complex<double>> out;
  if (n <= 0) return out;
  Poly m = f.monic();
  if (n == 1) {
    out.emplace_back(-m.coeff(0).get_d(), 0.0);
    return out;
  }
  std::vector<long double> c;
  for (const auto& q : m.coeffs()) {
    // mpq -> long double through the numerator/denominator doubles keeps
    // enough precision for the polish step.
    c.push_back(static_cast<long double>(q.get_d()));
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -static_cast<double>(c[i]);
  balance(comp);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericError("companion eigenvalues failed");
  for (int i = 0; i < n; ++i) {
    std::complex<double> z = es.eigenvalues()[i];
    out.push_back(polish(c, z, tol));
  }
  // Real coefficients: snap near-real roots and enforce conjugate symmetry.
  for (auto& z : out) {
    if (std::abs(z.imag()) <= tol * (1 + std::abs(z))) z = {z.real(), 0.0};
  }
  std::vector<bool> used(out.size(), false);
  for (size_t i = 0; i < out.size(); ++i) {
    if (used[i] || out[i].imag() <= 0) continue;
    size_t best = out.size();
    double bd = 0;
    for (size_t j = 0; j < out.size(); ++j) {
      if (j == i || used[j] || out[j].imag() >= 0) continue;
      double d = std::abs(out[j] - std::conj(out[i]));
      if (best == out.size() || d < bd) {
        best = j;
        bd = d;
      }
    }
    if (best < out.size()) {
      std::complex<double> avg = 0.5 * (out[i] + std::conj(out[best]));
      out[i] = avg;
      out[best] = std::conj(avg);
      used[i] = used[best] = true;
    }
  }
  return out;
}

bool root_less(std::complex<double> a, std::complex<double> b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

RootSet roots(const Poly& p, double tol) {
  if (p.is_zero()) throw DomainError("roots of the zero polynomial");
  if (!(tol > 0)) throw DomainError("root tolerance must be positive");
  RootSet rs;
  for (const auto& [factor, mult] : squarefree_decompose(p)) {
    for (const auto& z : squarefree_roots(factor, tol)) rs.roots.push_back({z, mult});
  }
  std::sort(rs.roots.begin(), rs.roots.end(),
            [](const Root& a, const Root& b) { return root_less(a.value, b.value); });
  return rs;
}

std::optional<Rational> rational_root_near(const Poly& p, double x) {
  if (p.is_zero() || !std::isfinite(x)) return std::nullopt;
  // Convergents h/k of the continued fraction of x.
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rem = x;
  for (int it = 0; it < 40; ++it) {
    double a = std::floor(rem);
    mpz_class ai(a);
    mpz_class h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > 1000000) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    Rational q(h1, k1);
    q.canonicalize();
    if (std::abs(q.get_d() - x) <= 1e-6 * (1 + std::abs(x)) && p.eval(q) == 0) return q;
    double frac = rem - a;
    if (frac < 1e-15) break;
    rem = 1 / frac;
  }
  return std::nullopt;
}

bool roots_match(std::complex<double> a, std::complex<double> b, double rel) {
  return std::abs(a - b) <= rel * (1 + std::abs(a));
}

void sort_roots(std::vector<std::complex<double>>& v) {
  std::sort(v.begin(), v.end(), root_less);
}

std::vector<std::complex<double>> multiset_intersection(
    const std::vector<std::complex<double>>& a,
    const std::vector<std::complex<double>>& b, double rel) {
  std::vector<bool> used(b.size(), false);
  std::vector<std::complex<double>> out;
  for (const auto& z : a) {
    for (size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && roots_match(z, b[j], rel)) {
        used[j] = true;
        out.push_back(z);
        break;
      }
    }
  }
  sort_roots(out);
  return out;
}

std::vector<std::complex<double>> multiset_difference(
    const std::vector<std::complex<double>>& a,
    const std::vector<std::complex<double>>& b, double rel) {
  std::vector<bool> used(b.size(), false);
  std::vector<std::complex<double>> out;
  for (const auto& z : a) {
    bool hit = false;
    for (size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && roots_match(z, b[j], rel)) {
        used[j] = true;
        hit = true;
        break;
      }
    }
    if (!hit) out.push_back(z);
  }
  sort_roots(out);
  return out;
}

bool multiset_equal(const std::vector<std::complex<double>>& a,
                    const std::vector<std::complex<double>>& b, double rel) {
  if (a.size() != b.size()) return false;
  return multiset_intersection(a, b, rel).size() == a.size();
}

// ---------------------------------------------------------------- RatFn

RatFn::RatFn(Poly num) : num_(std::move(num)), den_(1) {}

RatFn::RatFn(Poly num, Poly den) {
  if (den.is_zero()) throw DomainError("rational function with zero denominator");
  if (num.is_zero()) {
    num_ = Poly();
    den_ = Poly(1);
    return;
  }
  Poly g = poly_gcd(num, den);
  num = exact_div(num, g);
  den = exact_div(den, g);
  Rational k = den.lead();
  num_ = num * Rational(1 / k);
  den_ = den * Rational(1 / k);
}

bool RatFn::is_proper() const { return num_.degree() <= den_.degree(); }
bool RatFn::is_strictly_proper() const { return num_.degree() < den_.degree(); }

RatFn RatFn::operator-() const {
  RatFn r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFn operator+(const RatFn& a, const RatFn& b) {
  if (a.den_ == b.den_) return RatFn(a.num_ + b.num_, a.den_);
  return RatFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFn operator-(const RatFn& a, const RatFn& b) { return a + (-b); }

RatFn operator*(const RatFn& a, const RatFn& b) {
  if (a.is_zero() || b.is_zero()) return RatFn();
  return RatFn(a.num_ * b.num_, a.den_ * b.den_);
}

RatFn operator/(const RatFn& a, const RatFn& b) {
  if (b.is_zero()) throw DomainError("division by zero rational function");
  return RatFn(a.num_ * b.den_, a.den_ * b.num_);
}

std::string RatFn::to_string() const {
  if (den_ == Poly(1)) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

}  // namespace zerolab

#pragma once

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zerolab {

// Reduced arbitrary-precision rational. gmpxx keeps it canonical as long as
// every value produced by parsing goes through canonicalize().
using Rational = mpq_class;

// Parses "3", "-4.6", "1e-3", "2.5E2" or "p/q" exactly.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
// Exact conversion of a finite double.
Rational rational_from_double(double x);

// Univariate polynomial in s, coefficients lowest degree first. The zero
// polynomial has no coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);
  Poly(const Rational& c);  // NOLINT(runtime/explicit): constants promote
  Poly(int c);              // NOLINT(runtime/explicit)

  static Poly monomial(const Rational& c, int degree);
  static Poly s() { return monomial(Rational(1), 1); }
  // (s - r_1)(s - r_2)...
  static Poly from_roots(const std::vector<Rational>& roots);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  // Coefficient of s^k, zero beyond the degree.
  Rational coeff(int k) const;
  const Rational& lead() const;
  // Lowest k with a nonzero coefficient of s^k; -1 for the zero polynomial.
  int low_order() const;

  Poly monic() const;
  Poly derivative() const;
  Poly shift_down(int k) const;  // exact division by s^k; throws if inexact
  Rational eval(const Rational& x) const;
  std::complex<double> eval(std::complex<double> z) const;
  std::vector<double> to_double() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& k);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& k) { return a *= k; }
  friend Poly operator*(const Rational& k, Poly a) { return a *= k; }
  friend Poly operator*(Poly a, int k) { return a *= Rational(k); }
  friend Poly operator*(int k, Poly a) { return a *= Rational(k); }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  // "s^2 + 3s + 2"
  std::string to_string(char var = 's') const;
  // Coefficients as exact strings, lowest degree first.
  std::vector<std::string> coeff_strings() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

struct DivMod {
  Poly quot;
  Poly rem;
};
DivMod divmod(const Poly& a, const Poly& b);
// Throws DomainError if b does not divide a.
Poly exact_div(const Poly& a, const Poly& b);
bool divides(const Poly& d, const Poly& a);
// Monic gcd. Both zero is a DomainError; gcd(p, 0) = monic(p).
Poly poly_gcd(const Poly& p, const Poly& q);
// Monic lcm; lcm with zero is zero.
Poly poly_lcm(const Poly& p, const Poly& q);
Poly pow(const Poly& p, int k);

// Pairwise coprime squarefree factors (monic) with multiplicities, ordered by
// multiplicity. Zero input is a DomainError; constants give an empty list.
std::vector<std::pair<Poly, int>> squarefree_decompose(const Poly& p);

struct Root {
  std::complex<double> value;
  int multiplicity = 1;
};

struct RootSet {
  std::vector<Root> roots;

  int count() const;
  // Each root repeated by its multiplicity.
  std::vector<std::complex<double>> flat() const;
};

constexpr double kRootTolerance = 1e-9;

// Numeric roots of an exact polynomial with exact multiplicities. Each
// squarefree factor is rooted through the eigenvalues of its balanced
// companion matrix and then Newton-polished against the exact coefficients.
RootSet roots(const Poly& p, double tol = kRootTolerance);

// Exact rational root of p within 1e-6 of x, found by continued-fraction
// approximation of x (denominators up to 1e6) and exact evaluation.
std::optional<Rational> rational_root_near(const Poly& p, double x);

// Multiset helpers on numeric roots. Two values match when
// |a - b| <= 1e-6 (1 + |a|).
bool roots_match(std::complex<double> a, std::complex<double> b,
                 double rel = 1e-6);
std::vector<std::complex<double>> multiset_intersection(
    const std::vector<std::complex<double>>& a,
    const std::vector<std::complex<double>>& b, double rel = 1e-6);
std::vector<std::complex<double>> multiset_difference(
    const std::vector<std::complex<double>>& a,
    const std::vector<std::complex<double>>& b, double rel = 1e-6);
bool multiset_equal(const std::vector<std::complex<double>>& a,
                    const std::vector<std::complex<double>>& b,
                    double rel = 1e-6);
void sort_roots(std::vector<std::complex<double>>& v);

// num/den with gcd(num, den) = 1 and den monic.
class RatFn {
 public:
  RatFn() : den_(1) {}
  RatFn(Poly num);  // NOLINT(runtime/explicit)
  RatFn(const Rational& c) : RatFn(Poly(c)) {}  // NOLINT
  RatFn(int c) : RatFn(Poly(c)) {}              // NOLINT
  RatFn(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_proper() const;
  bool is_strictly_proper() const;

  RatFn operator-() const;
  friend RatFn operator+(const RatFn& a, const RatFn& b);
  friend RatFn operator-(const RatFn& a, const RatFn& b);
  friend RatFn operator*(const RatFn& a, const RatFn& b);
  friend RatFn operator/(const RatFn& a, const RatFn& b);
  RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
  RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
  RatFn& operator*=(const RatFn& o) { return *this = *this * o; }
  friend bool operator==(const RatFn& a, const RatFn& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFn& a, const RatFn& b) { return !(a == b); }

  std::string to_string() const;

 private:
  Poly num_;
  Poly den_;
};

}  // namespace zerolab

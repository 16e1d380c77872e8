#include "zerolab/cli.h"

#include <CLI11.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "zerolab/canon.h"
#include "zerolab/design.h"
#include "zerolab/errors.h"
#include "zerolab/polymat.h"
#include "zerolab/sim.h"
#include "zerolab/statespace.h"

namespace zerolab::cli {

// ---- expression parsing

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : s_(text) {}

  RatFn parse() {
    RatFn v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return v;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  char peek() {
    skip();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) {
    throw InputError("bad expression '" + std::string(s_) + "': " + what);
  }

  RatFn expr() {
    RatFn v;
    bool first = true;
    for (;;) {
      char c = peek();
      bool neg = false;
      if (c == '+' || c == '-') {
        neg = c == '-';
        ++i_;
      } else if (!first) {
        return v;
      }
      RatFn t = term();
      v = first ? (neg ? -t : t) : (neg ? v - t : v + t);
      first = false;
    }
  }

  RatFn term() {
    RatFn v = power();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++i_;
        v = v * power();
      } else if (c == '/') {
        ++i_;
        RatFn d = power();
        if (d.is_zero()) fail("division by zero");
        v = v / d;
      } else if (c == '(' || c == 's' || std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        v = v * power();
      } else {
        return v;
      }
    }
  }

  RatFn power() {
    RatFn base = atom();
    if (peek() != '^') return base;
    ++i_;
    skip();
    size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("exponent must be a non-negative integer");
    int k = std::stoi(std::string(s_.substr(start, i_ - start)));
    RatFn v(1);
    for (int j = 0; j < k; ++j) v = v * base;
    return v;
  }

  RatFn atom() {
    char c = peek();
    if (c == '(') {
      ++i_;
      RatFn v = expr();
      if (peek() != ')') fail("missing ')'");
      ++i_;
      return v;
    }
    if (c == 's') {
      ++i_;
      return RatFn(Poly::s());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = i_;
      while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
      return RatFn(parse_rational(s_.substr(start, i_ - start)));
    }
    fail(c ? "unexpected '" + std::string(1, c) + "'" : "unexpected end");
  }

  std::string_view s_;
  size_t i_ = 0;
};

}  // namespace

RatFn parse_ratfn(std::string_view text) { return ExprParser(text).parse(); }

Poly parse_poly(std::string_view text) {
  RatFn f = parse_ratfn(text);
  if (f.den() != Poly(1)) throw InputError("'" + std::string(text) + "' is not a polynomial");
  return f.num();
}

std::complex<double> parse_complex(std::string_view text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) throw InputError("empty complex number");
  // parse_rational validates; decimal text goes through strtod, which
  // rounds to nearest where mpq get_d truncates.
  auto real = [](const std::string& x) {
    Rational q = parse_rational(x);
    return x.find('/') == std::string::npos ? std::strtod(x.c_str(), nullptr) : q.get_d();
  };
  auto as_double = [&](const std::string& x) {
    if (x.empty() || x == "+" || x == "-") return x == "-" ? -1.0 : 1.0;
    return real(x);
  };
  if (t.back() != 'j' && t.back() != 'i') return {real(t), 0};
  t.pop_back();
  // split at the last sign that is not the leading one or an exponent sign
  size_t split = std::string::npos;
  for (size_t k = t.size(); k-- > 1;)
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string::npos) return {0, as_double(t)};
  return {real(t.substr(0, split)), as_double(t.substr(split))};
}

// ---- model files

namespace {

Rational entry(const Json& v, const std::string& where) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw InputError(where + ": entries must be strings (\"-4.6\", \"1/3\") or integers");
}

QMat matrix_from(const Json& v, const std::string& key) {
  if (!v.is_array()) throw InputError(key + " must be an array of rows");
  if (v.empty()) return QMat();
  int rows = static_cast<int>(v.size());
  if (!v[0].is_array()) throw InputError(key + " must be an array of rows");
  int cols = static_cast<int>(v[0].size());
  QMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!v[i].is_array() || static_cast<int>(v[i].size()) != cols)
      throw InputError(key + ": row " + std::to_string(i + 1) + " has the wrong length");
    for (int j = 0; j < cols; ++j) m(i, j) = entry(v[i][j], key);
  }
  return m;
}

std::vector<std::string> string_list(const Json& v, const std::string& key) {
  std::vector<std::string> out;
  if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
    return out;
  }
  if (!v.is_array()) throw InputError(key + " must be a list");
  for (const auto& e : v) {
    if (e.is_string()) out.push_back(e.get<std::string>());
    else if (e.is_number_integer()) out.push_back(std::to_string(e.get<long>()));
    else throw InputError(key + " entries must be strings");
  }
  return out;
}

void require_shape(const QMat& m, int rows, int cols, const std::string& what) {
  if (m.empty()) return;
  if ((rows >= 0 && m.rows() != rows) || (cols >= 0 && m.cols() != cols))
    throw InputError(what + " has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     ", expected " + (rows >= 0 ? std::to_string(rows) : "?") + "x" +
                     (cols >= 0 ? std::to_string(cols) : "?"));
}

}  // namespace

Model parse_model(const Json& j) {
  if (!j.is_object()) throw InputError("model must be a JSON object");
  Model m;
  static const std::set<std::string> known{"name", "n", "r", "l", "A", "B", "C", "D", "E", "H", "F",
                                           "phi", "targets", "poles", "observer_poles"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) m.extra[it.key()] = it.value();
  m.name = j.value("name", "");
  if (!j.contains("A")) throw InputError("model needs A");
  m.A = matrix_from(j["A"], "A");
  const int n = m.A.rows();
  if (n == 0 || m.A.cols() != n) throw InputError("A must be square and non-empty");
  for (const char* key : {"B", "C", "D", "E", "H", "F"})
    if (j.contains(key)) {
      QMat v = matrix_from(j[key], key);
      switch (key[0]) {
        case 'B': m.B = v; break;
        case 'C': m.C = v; break;
        case 'D': m.D = v; break;
        case 'E': m.E = v; break;
        case 'H': m.H = v; break;
        case 'F': m.F = v; break;
      }
    }
  require_shape(m.B, n, -1, "B");
  require_shape(m.C, -1, n, "C");
  require_shape(m.E, n, -1, "E");
  require_shape(m.H, -1, n, "H");
  if (!m.H.empty()) require_shape(m.F, m.H.rows(), m.E.empty() ? -1 : m.E.cols(), "F");
  auto check_dim = [&](const char* key, int actual) {
    if (j.contains(key) && j[key].get<int>() != actual)
      throw InputError(std::string("declared ") + key + " = " + std::to_string(j[key].get<int>()) +
                       " does not match the matrices (" + std::to_string(actual) + ")");
  };
  check_dim("n", n);
  if (!m.B.empty()) check_dim("r", m.B.cols());
  if (!m.C.empty()) check_dim("l", m.C.rows());
  if (j.contains("phi")) {
    const Json& p = j["phi"];
    if (p.is_string()) {
      m.phi = parse_poly(p.get<std::string>());
    } else if (p.is_array()) {
      std::vector<Rational> c;
      for (const auto& e : p) c.push_back(entry(e, "phi"));
      m.phi = Poly(c);
    } else {
      throw InputError("phi must be an expression or a coefficient list");
    }
  }
  if (j.contains("targets")) m.targets = string_list(j["targets"], "targets");
  if (j.contains("poles")) m.poles = string_list(j["poles"], "poles");
  if (j.contains("observer_poles")) m.observer_poles = string_list(j["observer_poles"], "observer_poles");
  return m;
}

namespace {

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace

Model load_model(const std::string& path) { return parse_model(read_json(path)); }

// ---- report pieces

std::string num(double x) {
  if (x == 0 || !std::isfinite(x)) x = std::isfinite(x) ? 0.0 : x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

Json poly_json(const Poly& p) {
  return Json{{"text", p.to_string()}, {"coeffs", p.coeff_strings()}};
}

namespace {

Json root_entry(std::complex<double> z, int mult, const Poly* p) {
  double im = std::abs(z.imag()) <= 1e-12 * (1 + std::abs(z)) ? 0.0 : z.imag();
  Json e{{"re", num(z.real())}, {"im", num(im)}, {"multiplicity", mult}};
  if (p && im == 0)
    if (auto q = rational_root_near(*p, z.real())) e["exact"] = to_string(*q);
  return e;
}

Json list_json(const ZeroList& zs) {
  Json a = Json::array();
  ZeroList sorted = zs;
  sort_roots(sorted);
  for (const auto& z : sorted) a.push_back(root_entry(z, 1, nullptr));
  return a;
}

}  // namespace

Json roots_json(const Poly& p, const RootSet& roots) {
  Json a = Json::array();
  std::vector<Root> rs = roots.roots;
  std::sort(rs.begin(), rs.end(), [](const Root& x, const Root& y) {
    if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });
  for (const auto& r : rs) a.push_back(root_entry(r.value, r.multiplicity, &p));
  return a;
}

Json zeros_json(const ZeroPoly& z) {
  Json j{{"degenerate", z.degenerate}};
  if (!z.degenerate) {
    j["polynomial"] = poly_json(z.poly);
    j["roots"] = roots_json(z.poly, z.roots);
  }
  return j;
}

Json matrix_json(const QMat& m) {
  Json a = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    a.push_back(row);
  }
  return a;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num(m(i, j)));
    a.push_back(row);
  }
  return a;
}

namespace {

Json pmat_json(const PMat& m) {
  Json a = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
    a.push_back(row);
  }
  return a;
}

Json decimal_json(const QMat& m) { return matrix_json(to_eigen(m)); }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::complex<double>> complex_list(const std::vector<std::string>& items) {
  std::vector<std::complex<double>> out;
  for (const auto& t : items) out.push_back(parse_complex(t));
  return out;
}

StateSpace plant_of(const Model& m) {
  if (m.B.empty()) throw InputError("model needs B");
  if (m.C.empty()) throw InputError("model needs C");
  return StateSpace(m.A, m.B, m.C, m.D);
}

struct Outcome {
  Json report;
  int code = kOk;
  std::string summary;
};

// ---- zeros

Outcome cmd_zeros(const Model& m, const std::vector<std::string>& methods, std::uint64_t seed) {
  StateSpace sys = plant_of(m);
  if (sys.has_feedthrough())
    throw InputError("zero algorithms assume a strictly proper model (D = 0); drop D or absorb it");
  Outcome o;
  Json& rep = o.report;
  ZeroReport zr = zero_report(sys);
  rep["system"] = Json{{"n", sys.n()}, {"r", sys.r()}, {"l", sys.l()}};
  if (zr.system.degenerate) {
    rep["degenerate"] = true;
    rep["taxonomy"] = Json{{"system", zeros_json(zr.system)}};
    o.code = kDegenerate;
    o.summary = "degenerate system: every s is a zero";
    return o;
  }
  rep["degenerate"] = false;
  rep["taxonomy"] = Json{{"system", zeros_json(zr.system)},
                         {"invariant", zeros_json(zr.invariant)},
                         {"transmission", zeros_json(zr.transmission)},
                         {"input_decoupling", zeros_json(zr.decoupling.input)},
                         {"output_decoupling", zeros_json(zr.decoupling.output)},
                         {"input_output_decoupling", zeros_json(zr.decoupling.io)},
                         {"inclusions_hold", zr.inclusions_hold},
                         {"identity_holds", zr.identity_holds}};

  std::set<std::string> want(methods.begin(), methods.end());
  bool all = want.count("all") > 0;
  const Poly& ref = zr.system.poly;
  const ZeroList ref_roots = zr.system.roots.flat();
  Json results = Json::object();
  bool agree = true;
  std::vector<std::string> used;

  auto exact = [&](const char* name, auto fn) {
    if (!all && !want.count(name)) return;
    Json r;
    try {
      ZeroPoly z = fn();
      r = zeros_json(z);
      r["status"] = "ok";
      r["agrees"] = !z.degenerate && z.poly == ref;
      agree = agree && r["agrees"].get<bool>();
      used.push_back(name);
    } catch (const StructuralError& e) {
      r = Json{{"status", "skipped"}, {"reason", e.what()}};
    } catch (const PreconditionError& e) {
      r = Json{{"status", "skipped"}, {"reason", e.what()}};
    } catch (const DegenerateError& e) {
      r = Json{{"status", "failed"}, {"reason", e.what()}, {"agrees", false}};
      agree = false;
    }
    results[name] = r;
  };

  exact("minors", [&] { return zr.system; });
  if (all || want.count("pencil")) {
    Json r;
    try {
      ZeroPoly z = zeros_pencil(sys, seed);
      r = zeros_json(z);
      r["status"] = "ok";
      bool ok = sys.r() == sys.l() ? z.poly == ref : multiset_equal(z.roots.flat(), ref_roots);
      r["agrees"] = ok;
      agree = agree && ok;
      used.push_back("pencil");
    } catch (const DegenerateError& e) {
      r = Json{{"status", "failed"}, {"reason", e.what()}, {"agrees", false}};
      agree = false;
    }
    results["pencil"] = r;
  }
  exact("matrixpoly", [&] { return zero_poly_matrix_polynomial(sys); });
  exact("interp", [&] { return zeros_interpolation(sys).zeros; });
  if (all || want.count("highgain")) {
    HighGainResult hg = zeros_highgain(sys, seed);
    bool ok = multiset_equal(hg.all, ref_roots);
    results["highgain"] = Json{{"status", "ok"},
                               {"gain", num(kHighGain)},
                               {"all", list_json(hg.all)},
                               {"decoupling", list_json(hg.decoupling)},
                               {"transmission", list_json(hg.transmission)},
                               {"agrees", ok}};
    agree = agree && ok;
    used.push_back("highgain");
  }
  rep["methods"] = results;
  rep["agreement"] = agree;
  o.code = agree ? kOk : kDisagreement;
  std::ostringstream os;
  os << "system zeros: " << ref.to_string() << " (" << used.size() << (used.size() == 1 ? " method, " : " methods, ")
     << (agree ? "agree" : "DISAGREE") << ")";
  o.summary = os.str();
  return o;
}

// ---- canon

Outcome cmd_canon(const Model& m, const std::string& form) {
  if (m.B.empty()) throw InputError("model needs B");
  StateSpace sys(m.A, m.B, m.C.empty() ? QMat(0, m.A.rows()) : m.C);
  CanonicalDecomposition cd;
  if (form == "companion") cd = to_companion(sys);
  else if (form == "asseo") cd = to_asseo(sys);
  else cd = to_yokoyama(sys);
  Outcome o;
  Json& rep = o.report;
  rep["form"] = to_string(cd.kind);
  rep["nu"] = cd.nu;
  rep["l"] = cd.l_list;
  rep["N"] = matrix_json(cd.N);
  rep["N_inv"] = matrix_json(cd.N_inv);
  rep["M"] = matrix_json(cd.M);
  rep["F"] = matrix_json(cd.F);
  rep["G"] = matrix_json(cd.G);
  if (!m.C.empty()) rep["C_N_inv"] = matrix_json(m.C * cd.N_inv);
  o.summary = to_string(cd.kind) + " form, nu = " + std::to_string(cd.nu);
  return o;
}

// ---- smith

Outcome cmd_smith(const std::string& path, bool mcmillan) {
  Json j = read_json(path);
  const Json* src = nullptr;
  for (const char* key : {"P", "W", "G"})
    if (j.contains(key)) {
      src = &j[key];
      break;
    }
  if (!src || !src->is_array() || src->empty() || !(*src)[0].is_array())
    throw InputError("matrix file needs \"P\" (or \"W\") as an array of rows of expressions");
  const int rows = static_cast<int>(src->size()), cols = static_cast<int>((*src)[0].size());
  RMat W(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>((*src)[i].size()) != cols) throw InputError("ragged matrix");
    for (int k = 0; k < cols; ++k) {
      const Json& e = (*src)[i][k];
      if (e.is_number_integer()) W(i, k) = RatFn(Rational(e.get<long>()));
      else if (e.is_string()) W(i, k) = parse_ratfn(e.get<std::string>());
      else throw InputError("matrix entries must be expression strings");
    }
  }
  Outcome o;
  Json& rep = o.report;
  rep["name"] = j.value("name", "");
  if (mcmillan) {
    SmithMcMillanDecomposition sm = smith_mcmillan(W);
    rep["phi"] = poly_json(sm.phi);
    Json diag = Json::array(), eps = Json::array(), psi = Json::array();
    for (size_t i = 0; i < sm.eps.size(); ++i) {
      diag.push_back(RatFn(sm.eps[i], sm.psi[i]).to_string());
      eps.push_back(poly_json(sm.eps[i]));
      psi.push_back(poly_json(sm.psi[i]));
    }
    rep["diagonal"] = diag;
    rep["eps"] = eps;
    rep["psi"] = psi;
    rep["U_L"] = pmat_json(sm.U_L);
    rep["U_R"] = pmat_json(sm.U_R);
    o.summary = "Smith-McMillan form with " + std::to_string(sm.eps.size()) + " nonzero entries";
    return o;
  }
  PMat P(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      if (W(i, k).den() != Poly(1)) throw InputError("entry (" + std::to_string(i + 1) + ", " +
                                                     std::to_string(k + 1) + ") is not a polynomial; use --mcmillan");
      P(i, k) = W(i, k).num();
    }
  SmithDecomposition sd = smith_form(P);
  Json inv = Json::array();
  for (const auto& p : sd.invariant_polys) inv.push_back(poly_json(p));
  rep["invariant_polynomials"] = inv;
  rep["S"] = pmat_json(sd.S);
  rep["U_L"] = pmat_json(sd.U_L);
  rep["U_R"] = pmat_json(sd.U_R);
  rep["reconstruction_exact"] = sd.U_L * P * sd.U_R == sd.S;
  o.summary = "Smith form with " + std::to_string(sd.invariant_polys.size()) + " invariant polynomials";
  return o;
}

// ---- assign

struct AssignFlags {
  std::string method = "analytic";
  std::string targets;
  int measured = 0;
  double q = 0.25;
  double eps = 0.02;
  int max_iter = 50000;
  std::string emit;
};

Json gradient_json(const GradientResult& g) {
  return Json{{"J", num(g.J)},          {"J1", num(g.J1)},         {"J2", num(g.J2)},
              {"gradient_norm", num(g.grad_norm)}, {"iterations", g.iterations}, {"final_step", num(g.alpha)},
              {"achieved_zeros", list_json(g.zeros)}};
}

Outcome cmd_assign(const Model& m, const AssignFlags& f, std::uint64_t seed) {
  if (m.B.empty()) throw InputError("model needs B");
  std::vector<std::string> targets = f.targets.empty() ? m.targets : split_list(f.targets);
  Outcome o;
  Json& rep = o.report;
  rep["method"] = f.method;
  rep["targets"] = targets;
  Json emitted;
  if (f.method == "analytic") {
    std::vector<Rational> t;
    for (const auto& s : targets) t.push_back(parse_rational(s));
    QMat C = assign_analytical(m.A, m.B, t);
    ZeroPoly z = system_zeros(StateSpace(m.A, m.B, C));
    bool ok = z.poly == Poly::from_roots(t);
    rep["C"] = matrix_json(C);
    rep["zeros"] = zeros_json(z);
    rep["verified"] = ok;
    emitted = Json{{"C", rep["C"]}};
    o.code = ok ? kOk : kDisagreement;
    o.summary = "assigned zero polynomial " + z.poly.to_string() + (ok ? " (verified)" : " (MISMATCH)");
  } else if (f.method == "gradient") {
    AssignmentProblem p;
    p.A = m.A;
    p.B = m.B;
    p.C0 = m.C;
    for (const auto& s : targets) p.targets.push_back(parse_rational(s).get_d());
    p.q = f.q;
    p.eps = f.eps;
    p.max_iter = f.max_iter;
    p.measured = f.measured;
    p.seed = seed;
    GradientResult g = assign_gradient(p);
    rep["C"] = matrix_json(g.X);
    rep["result"] = gradient_json(g);
    emitted = Json{{"C", rep["C"]}};
    o.summary = "gradient assignment converged in " + std::to_string(g.iterations) + " steps";
  } else {
    SquareDownProblem p;
    p.A = m.A;
    p.B = m.B;
    p.C = m.C;
    if (m.extra.contains("D0")) p.D0 = matrix_from(m.extra["D0"], "D0");
    for (const auto& s : targets) p.targets.push_back(parse_rational(s).get_d());
    p.q = f.q;
    p.eps = f.eps;
    p.max_iter = f.max_iter;
    p.seed = seed;
    GradientResult g = assign_squaring_down(p);
    rep["D"] = matrix_json(g.X);
    rep["result"] = gradient_json(g);
    emitted = Json{{"D", rep["D"]}};
    o.summary = "squaring down converged in " + std::to_string(g.iterations) + " steps";
  }
  if (!f.emit.empty()) {
    std::ofstream out(f.emit);
    if (!out) throw InputError("cannot write " + f.emit);
    out << emitted.dump(2) << "\n";
  }
  return o;
}

// ---- servo

struct ServoFlags {
  bool check = false, synth = false;
  std::string poles, observer_poles, refpoly, csv;
  double horizon = 80;
  double zref = 1;
  double disturbance = 0;
};

Json pi_json(const PiConditions& c) {
  return Json{{"stabilizable", c.stabilizable}, {"d_le_r", c.d_le_r}, {"origin_rank", c.origin_rank},
              {"no_zero_at_origin", c.no_origin_zero}, {"ok", c.ok()}};
}

Outcome cmd_servo(const Model& m, const ServoFlags& f) {
  if (m.B.empty()) throw InputError("model needs B");
  QMat Dz = !m.D.empty() ? m.D : m.C;
  if (Dz.empty()) throw InputError("servo models need a regulated output D (or C)");
  require_shape(Dz, -1, m.A.rows(), "regulated output");
  std::optional<Poly> phi = m.phi;
  if (!f.refpoly.empty()) phi = parse_poly(f.refpoly);
  const QMat F = m.F.empty() && !m.H.empty() ? QMat(m.H.rows(), m.E.cols()) : m.F;

  Outcome o;
  Json& rep = o.report;
  if (f.check || !f.synth) {
    Json checks;
    bool ok = true;
    PiConditions pc = pi_solvable(m.A, m.B, Dz);
    checks["integral_action"] = pi_json(pc);
    ok = ok && pc.ok();
    if (!m.H.empty()) {
      ObserverConditions oc = observer_solvable(m.A, m.E, m.H, F);
      checks["observer"] = Json{{"detectable", oc.detectable}, {"l_ge_p", oc.l_ge_p},
                                {"origin_rank", oc.origin_rank}, {"no_zero_at_origin", oc.no_origin_zero},
                                {"ok", oc.ok()}};
      ok = ok && oc.ok();
    }
    if (phi) {
      ServoConditions sc = servo_solvable(m.A, m.B, Dz, *phi);
      checks["internal_model"] = Json{{"reference_polynomial", poly_json(*phi)},
                                      {"stabilizable", sc.stabilizable},
                                      {"d_le_r", sc.d_le_r},
                                      {"zeros_disjoint", sc.zeros_disjoint},
                                      {"transmission_zeros", list_json(sc.transmission)},
                                      {"reference_roots", list_json(sc.reference_roots)},
                                      {"ok", sc.ok()}};
      ok = ok && sc.ok();
    }
    rep["conditions"] = checks;
    rep["verdict"] = ok ? "solvable" : "not established";
    o.code = ok ? kOk : kNotEstablished;
    o.summary = ok ? "servo conditions hold" : "solvability not established";
    if (!f.synth) return o;
    if (!ok) return o;
  }

  std::vector<std::complex<double>> poles = complex_list(f.poles.empty() ? m.poles : split_list(f.poles));
  std::vector<std::complex<double>> obs =
      complex_list(f.observer_poles.empty() ? m.observer_poles : split_list(f.observer_poles));
  RegulatorRealization reg;
  std::string kind;
  if (phi) {
    reg = synthesize_servo(m.A, m.B, Dz, m.E, *phi, poles);
    kind = "internal model";
  } else {
    ServoPlant plant{m.A, m.B, m.E, Dz, m.H, F};
    if (!obs.empty() && m.H.empty()) throw InputError("observer poles need a measured output H");
    reg = synthesize_pi(plant, poles, obs);
    kind = obs.empty() ? "PI, full state" : "PI with observer";
  }
  Json r{{"structure", kind}, {"K1", decimal_json(reg.K1)}, {"K2", decimal_json(reg.K2)}};
  if (!reg.L.empty()) r["L"] = decimal_json(reg.L);
  if (!reg.F.empty()) {
    r["F"] = matrix_json(reg.F);
    r["Gamma"] = matrix_json(reg.Gamma);
  }
  r["closed_loop_poles"] = list_json(reg.closed_loop_poles);
  rep["regulator"] = r;
  o.summary = kind + " regulator synthesized";

  if (!f.csv.empty()) {
    if (phi) throw InputError("--csv simulates constant references; drop the reference polynomial");
    TrackingScenario sc;
    const double zr = f.zref, w = f.disturbance;
    const int d = reg.d;
    sc.reference = [zr, d](double) { return Eigen::VectorXd::Constant(d, zr); };
    const int p = reg.closed_loop.r() - d;
    if (p > 0) sc.disturbance = [w, p](double) { return Eigen::VectorXd::Constant(p, w); };
    sc.horizon = f.horizon;
    TrackingResult tr = simulate_tracking(reg, sc);
    std::ofstream out(f.csv);
    if (!out) throw InputError("cannot write " + f.csv);
    write_csv(out, tr.traj);
    rep["simulation"] = Json{{"horizon", num(f.horizon)}, {"reference", num(zr)}, {"disturbance", num(w)},
                             {"final_error", num(tr.max_error)}, {"csv", f.csv}};
  }
  return o;
}

void add_common(CLI::App* sub, std::string& file, std::uint64_t& seed, std::string& out) {
  sub->add_option("file", file, "model file (JSON)")->required();
  sub->add_option("--seed", seed, "seed for randomized methods")->default_val(1);
  sub->add_option("--out", out, "write the report here instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zeros of linear multivariable systems: analysis, assignment and servo design."};
  app.name("zerolab");
  app.require_subcommand(1);
  std::string file, out_path;
  std::uint64_t seed = 1;

  std::string methods = "all";
  auto* zeros = app.add_subcommand("zeros", "zero taxonomy and cross-checked zero polynomials");
  add_common(zeros, file, seed, out_path);
  zeros->add_option("--methods", methods, "all or a comma list of pencil,minors,matrixpoly,interp,highgain");

  std::string form = "yokoyama";
  auto* canon = app.add_subcommand("canon", "block companion forms of (A, B)");
  add_common(canon, file, seed, out_path);
  canon->add_option("--form", form)->check(CLI::IsMember({"companion", "asseo", "yokoyama"}));

  bool mcmillan = false;
  auto* smith = app.add_subcommand("smith", "Smith (or Smith-McMillan) form of a matrix file");
  add_common(smith, file, seed, out_path);
  smith->add_flag("--mcmillan", mcmillan, "treat entries as rational functions");

  AssignFlags af;
  auto* assign = app.add_subcommand("assign", "zero assignment by output matrix design");
  add_common(assign, file, seed, out_path);
  assign->add_option("--targets", af.targets, "comma list of zero targets");
  assign->add_option("--method", af.method)->check(CLI::IsMember({"analytic", "gradient", "squaredown"}));
  assign->add_option("--measured", af.measured, "restrict C to the first m states");
  assign->add_option("--q", af.q, "weight of the rank penalty");
  assign->add_option("--eps", af.eps, "stop when the gradient sum falls below eps");
  assign->add_option("--max-iter", af.max_iter, "cap on descent steps, halvings included")->capture_default_str();
  assign->add_option("--emit", af.emit, "write the designed matrix to this file");

  ServoFlags sf;
  auto* servo = app.add_subcommand("servo", "tracking conditions and regulator synthesis");
  add_common(servo, file, seed, out_path);
  servo->add_flag("--check", sf.check, "test solvability conditions");
  servo->add_flag("--synth", sf.synth, "synthesize the regulator");
  servo->add_option("--poles", sf.poles, "closed-loop poles, e.g. \"-1,-1+1j,-1-1j\"");
  servo->add_option("--observer-poles", sf.observer_poles, "observer poles; enables the observer-based loop");
  servo->add_option("--refpoly", sf.refpoly, "reference model polynomial, e.g. \"s-2\"");
  servo->add_option("--csv", sf.csv, "simulate and write the trajectory");
  servo->add_option("--horizon", sf.horizon, "simulation length for --csv")->capture_default_str();
  servo->add_option("--zref", sf.zref, "constant reference for --csv");
  servo->add_option("--disturbance", sf.disturbance, "constant disturbance for --csv");

  std::vector<std::string> argv_store{"zerolab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "zerolab: " << e.what() << "\n";
    return kInput;
  }

  CLI::App* sub = app.get_subcommands().front();
  Json echo = Json::array();
  for (const auto& a : args)
    if (&a != &args.front()) echo.push_back(a);
  Json report{{"command", sub->get_name()}, {"arguments", echo}, {"seed", std::to_string(seed)}};

  Outcome o;
  std::string kind;
  try {
    if (sub == smith) {
      o = cmd_smith(file, mcmillan);
    } else {
      Model m = load_model(file);
      report["model"] = m.name;
      if (sub == zeros) {
        std::vector<std::string> ms = split_list(methods);
        static const std::set<std::string> valid{"all", "pencil", "minors", "matrixpoly", "interp", "highgain"};
        for (const auto& x : ms)
          if (!valid.count(x)) throw InputError("unknown method '" + x + "'");
        o = cmd_zeros(m, ms, seed);
      } else if (sub == canon) {
        o = cmd_canon(m, form);
      } else if (sub == assign) {
        o = cmd_assign(m, af, seed);
      } else {
        o = cmd_servo(m, sf);
      }
    }
  } catch (const InputError& e) {
    o.code = kInput, kind = "input", o.summary = e.what();
  } catch (const DomainError& e) {
    o.code = kInput, kind = "domain", o.summary = e.what();
  } catch (const SizeError& e) {
    o.code = kInput, kind = "size", o.summary = e.what();
  } catch (const Json::exception& e) {
    o.code = kInput, kind = "input", o.summary = e.what();
  } catch (const DegenerateError& e) {
    o.code = kDegenerate, kind = "degenerate", o.summary = e.what();
  } catch (const StructuralError& e) {
    o.code = kNotEstablished, kind = "structural", o.summary = e.what();
  } catch (const PreconditionError& e) {
    o.code = kNotEstablished, kind = "precondition", o.summary = e.what();
  } catch (const NumericError& e) {
    o.code = kNotEstablished, kind = "numeric", o.summary = e.what();
  }
  for (auto it = o.report.begin(); it != o.report.end(); ++it) report[it.key()] = it.value();
  if (!kind.empty()) report["error"] = Json{{"kind", kind}, {"message", o.summary}};
  report["exit_code"] = o.code;

  std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      err << "zerolab: cannot write " << out_path << "\n";
      return kInput;
    }
    f << text;
  }
  err << "zerolab " << sub->get_name() << ": " << o.summary << "\n";
  return o.code;
}

}  // namespace zerolab::cli

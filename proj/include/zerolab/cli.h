#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "zerolab/matrix.h"
#include "zerolab/ratpoly.h"
#include "zerolab/zeros.h"

namespace zerolab::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  kOk = 0,
  kInput = 2,
  kDisagreement = 3,
  kDegenerate = 4,
  kNotEstablished = 5,
};

// Matrices are arrays of rows; entries are strings ("3", "-4.6", "1/3") or
// integers. An absent matrix is empty.
struct Model {
  std::string name;
  QMat A, B, C, D, E, H, F;
  std::optional<Poly> phi;            // reference model
  std::vector<std::string> targets;   // zero targets, as written
  std::vector<std::string> poles;     // closed-loop poles, as written
  std::vector<std::string> observer_poles;
  Json extra;                         // unknown keys, echoed back
};

Model parse_model(const Json& j);
Model load_model(const std::string& path);

// Rational expression in s: sums, products (explicit or by juxtaposition),
// quotients, integer powers and parentheses, e.g. "(s+2)/(s(s+1)^2)".
RatFn parse_ratfn(std::string_view text);
Poly parse_poly(std::string_view text);
// "-1", "2.5", "-1+2j", "-1.926-0.127j"
std::complex<double> parse_complex(std::string_view text);

// Deterministic decimal text for doubles (10 significant digits).
std::string num(double x);
Json poly_json(const Poly& p);
Json roots_json(const Poly& p, const RootSet& roots);
Json zeros_json(const ZeroPoly& z);
Json matrix_json(const QMat& m);
Json matrix_json(const Eigen::MatrixXd& m);

// zerolab <command> <file> [flags]. Report JSON goes to `out` (or --out),
// the human summary to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zerolab::cli

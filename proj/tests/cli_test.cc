#include "zerolab/cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "zerolab/errors.h"

namespace zerolab::cli {
namespace {

const Poly s = Poly::s();

std::string model_path(const std::string& name) { return std::string(ZEROLAB_MODELS_DIR) + "/" + name; }

struct CliRun {
  int code;
  Json report;
  std::string text;
};

CliRun run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  CliRun r{code, Json(), out.str()};
  if (!r.text.empty() && r.text[0] == '{') r.report = Json::parse(r.text);
  return r;
}

std::string write_temp(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / ("zerolab_cli_test_" + name);
  std::ofstream(path) << body;
  return path.string();
}

GTEST_TEST(Expressions, Polynomials) {
  EXPECT_EQ(parse_poly("s^2 + 3s + 2"), s * s + 3 * s + 2);
  EXPECT_EQ(parse_poly("(s+1)(s-2)"), (s + 1) * (s - 2));
  EXPECT_EQ(parse_poly("-s + 1/2"), -s + Poly(Rational(1, 2)));
  EXPECT_EQ(parse_poly("2*s^3 - 0.5 s"), 2 * s * s * s - Poly(Rational(1, 2)) * s);
  EXPECT_EQ(parse_poly("3(s+2)"), 3 * (s + 2));
  EXPECT_THROW(parse_poly("1/s"), InputError);
  EXPECT_THROW(parse_poly("s +"), InputError);
  EXPECT_THROW(parse_poly("x"), InputError);
}

GTEST_TEST(Expressions, RationalFunctions) {
  RatFn f = parse_ratfn("(s+2)/(s(s+1)^2)");
  EXPECT_EQ(f.num(), s + 2);
  EXPECT_EQ(f.den(), s * (s + 1) * (s + 1));
  EXPECT_EQ(parse_ratfn("(s^2-1)/(s+1)"), RatFn(s - 1));
  EXPECT_THROW(parse_ratfn("1/(s-s)"), InputError);
}

GTEST_TEST(Expressions, ComplexNumbers) {
  EXPECT_EQ(parse_complex("-1"), std::complex<double>(-1, 0));
  EXPECT_EQ(parse_complex("-1+1j"), std::complex<double>(-1, 1));
  EXPECT_EQ(parse_complex("-1.926-0.127j"), std::complex<double>(-1.926, -0.127));
  EXPECT_EQ(parse_complex("2j"), std::complex<double>(0, 2));
  EXPECT_EQ(parse_complex("-j"), std::complex<double>(0, -1));
  EXPECT_THROW(parse_complex("abc"), InputError);
}

GTEST_TEST(ModelFile, ParsesExactEntries) {
  Model m = parse_model(Json::parse(R"({"name": "x", "A": [["0", "1"], ["-1/3", "-4.6"]], "B": [[0], [1]],
                                        "C": [["1", "0"]], "phi": "s - 2", "targets": "-1,-2", "note": 5})"));
  EXPECT_EQ(m.A(1, 0), Rational(-1, 3));
  EXPECT_EQ(m.A(1, 1), Rational(-23, 5));
  EXPECT_EQ(*m.phi, s - 2);
  EXPECT_EQ(m.targets, (std::vector<std::string>{"-1", "-2"}));
  EXPECT_EQ(m.extra["note"], 5);
}

GTEST_TEST(ModelFile, RejectsBadInput) {
  auto bad = [](const char* text) { return parse_model(Json::parse(text)); };
  EXPECT_THROW(bad(R"({"B": [["1"]]})"), InputError);
  EXPECT_THROW(bad(R"({"A": [["1", "2"], ["3"]]})"), InputError);
  EXPECT_THROW(bad(R"({"A": [["1", "2"]]})"), InputError);
  EXPECT_THROW(bad(R"({"A": [[0.5]]})"), InputError);
  EXPECT_THROW(bad(R"({"A": [["1x"]]})"), InputError);
  EXPECT_THROW(bad(R"({"A": [["1"]], "B": [["1"], ["2"]]})"), InputError);
  EXPECT_THROW(bad(R"({"n": 2, "A": [["1"]]})"), InputError);
}

GTEST_TEST(Zeros, TaxonomyOfMixedDecouplingSystem) {
  CliRun r = run_cli({"zeros", model_path("mixed_decoupling.json")});
  ASSERT_EQ(r.code, kOk) << r.text;
  const Json& t = r.report["taxonomy"];
  EXPECT_EQ(t["system"]["polynomial"]["text"], ((s - 1) * (s + 1) * (s - 3)).to_string());
  EXPECT_EQ(t["transmission"]["polynomial"]["text"], "s - 3");
  EXPECT_EQ(t["input_decoupling"]["polynomial"]["text"], "s - 1");
  EXPECT_EQ(t["output_decoupling"]["polynomial"]["text"], "s + 1");
  EXPECT_TRUE(t["inclusions_hold"].get<bool>());
  EXPECT_TRUE(r.report["agreement"].get<bool>());
}

GTEST_TEST(Zeros, SquareSystemAllMethodsAgree) {
  CliRun r = run_cli({"zeros", model_path("square_two_input.json"), "--methods", "all"});
  ASSERT_EQ(r.code, kOk);
  int ran = 0;
  for (const auto& [name, res] : r.report["methods"].items())
    if (res["status"] == "ok") {
      ++ran;
      EXPECT_TRUE(res["agrees"].get<bool>()) << name;
    }
  EXPECT_GE(ran, 3);
  EXPECT_EQ(r.report["taxonomy"]["system"]["polynomial"]["text"], "s^2 - 1");
}

GTEST_TEST(Zeros, MethodSubset) {
  CliRun r = run_cli({"zeros", model_path("square_two_input.json"), "--methods", "interp,pencil"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_TRUE(r.report["methods"].contains("interp"));
  EXPECT_FALSE(r.report["methods"].contains("highgain"));
  EXPECT_EQ(run_cli({"zeros", model_path("square_two_input.json"), "--methods", "magic"}).code, kInput);
}

GTEST_TEST(Zeros, DegenerateSystem) {
  CliRun r = run_cli({"zeros", model_path("degenerate_siso.json")});
  EXPECT_EQ(r.code, kDegenerate);
  EXPECT_TRUE(r.report["degenerate"].get<bool>());
}

GTEST_TEST(Zeros, FeedthroughRejected) {
  std::string p = write_temp("feedthrough.json", R"({"A": [["-1"]], "B": [["1"]], "C": [["1"]], "D": [["1"]]})");
  CliRun r = run_cli({"zeros", p});
  EXPECT_EQ(r.code, kInput);
  EXPECT_NE(r.report["error"]["message"].get<std::string>().find("D = 0"), std::string::npos);
}

GTEST_TEST(Canon, BlockCompanionForm) {
  CliRun r = run_cli({"canon", model_path("zero_assignment.json")});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.report["nu"], 3);
  EXPECT_EQ(r.report["l"], Json::parse("[1, 1, 2]"));
  EXPECT_EQ(r.report["form"], "yokoyama");
}

GTEST_TEST(Canon, CompanionInputEchoesIdentity) {
  std::string p = write_temp("companion.json", R"({"A": [["0", "1"], ["-2", "-3"]], "B": [["0"], ["1"]]})");
  CliRun r = run_cli({"canon", p, "--form", "companion"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.report["N"], Json::parse(R"([["1", "0"], ["0", "1"]])"));
  EXPECT_EQ(r.report["F"], Json::parse(R"([["0", "1"], ["-2", "-3"]])"));
}

GTEST_TEST(Canon, UncontrollablePair) {
  std::string p = write_temp("uncontrollable.json", R"({"A": [["1", "0"], ["0", "1"]], "B": [["1"], ["1"]]})");
  EXPECT_EQ(run_cli({"canon", p}).code, kNotEstablished);
}

GTEST_TEST(Smith, PolynomialMatrix) {
  CliRun r = run_cli({"smith", model_path("smith_polynomial.json")});
  ASSERT_EQ(r.code, kOk);
  Json inv = r.report["invariant_polynomials"];
  ASSERT_EQ(inv.size(), 3u);
  EXPECT_EQ(inv[0]["text"], "1");
  EXPECT_EQ(inv[1]["text"], "1");
  EXPECT_EQ(inv[2]["text"], "s^3 - s");
  EXPECT_TRUE(r.report["reconstruction_exact"].get<bool>());
}

GTEST_TEST(Smith, IdentityIsItsOwnForm) {
  std::string p = write_temp("identity.json", R"({"P": [["1", "0"], ["0", "1"]]})");
  CliRun r = run_cli({"smith", p});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.report["S"], Json::parse(R"([["1", "0"], ["0", "1"]])"));
}

GTEST_TEST(Smith, McMillanDiagonal) {
  CliRun r = run_cli({"smith", model_path("smith_mcmillan.json"), "--mcmillan"});
  ASSERT_EQ(r.code, kOk);
  ASSERT_EQ(r.report["eps"].size(), 3u);
  EXPECT_EQ(r.report["eps"][0]["text"], "1");
  EXPECT_EQ(r.report["psi"][0]["text"], (s * (s + 1) * (s + 1)).to_string());
  EXPECT_EQ(r.report["eps"][1]["text"], "s + 2");
  EXPECT_EQ(r.report["psi"][1]["text"], ((s + 1) * (s + 1)).to_string());
  EXPECT_EQ(r.report["eps"][2]["text"], "s + 2");
  EXPECT_EQ(r.report["psi"][2]["text"], "s + 1");
  EXPECT_EQ(run_cli({"smith", model_path("smith_mcmillan.json")}).code, kInput);
}

GTEST_TEST(Assign, AnalyticWithEmittedMatrix) {
  std::string emit = (std::filesystem::temp_directory_path() / "zerolab_cli_test_C.json").string();
  CliRun r = run_cli({"assign", model_path("zero_assignment.json"), "--emit", emit});
  ASSERT_EQ(r.code, kOk);
  EXPECT_TRUE(r.report["verified"].get<bool>());
  EXPECT_EQ(r.report["zeros"]["polynomial"]["text"], "s^2 + 3s + 2");
  std::ifstream in(emit);
  Json c = Json::parse(in);
  EXPECT_EQ(c["C"], r.report["C"]);
}

GTEST_TEST(Assign, TargetsFromFlag) {
  CliRun r = run_cli({"assign", model_path("zero_assignment.json"), "--targets=-3,1/2"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.report["zeros"]["polynomial"]["text"], ((s + 3) * (s - Poly(Rational(1, 2)))).to_string());
}

GTEST_TEST(Assign, NothingToAssignWhenInputsMatchStates) {
  std::string p = write_temp("square_b.json", R"({"A": [["1", "2"], ["3", "4"]], "B": [["1", "1"], ["0", "1"]]})");
  CliRun r = run_cli({"assign", p});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.report["zeros"]["polynomial"]["text"], "1");
}

GTEST_TEST(Assign, GradientStructural) {
  CliRun r = run_cli({"assign", model_path("structural_assignment.json"), "--method", "gradient", "--measured", "3",
                   "--q", "0.5"});
  ASSERT_EQ(r.code, kOk);
  const Json& C = r.report["C"];
  EXPECT_EQ(C[0][3], "0");
  EXPECT_EQ(C[1][3], "0");
  EXPECT_EQ(r.report["result"]["achieved_zeros"].size(), 2u);
}

GTEST_TEST(Assign, StructuralCaseWithTooFewStates) {
  CliRun r = run_cli({"assign", model_path("structural_assignment.json"), "--method", "gradient", "--measured", "2"});
  EXPECT_EQ(r.code, kNotEstablished);
}

GTEST_TEST(Servo, AntennaConditionsHold) {
  CliRun r = run_cli({"servo", model_path("antenna.json"), "--check"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.report["conditions"]["integral_action"]["origin_rank"], 3);
  EXPECT_EQ(r.report["conditions"]["observer"]["origin_rank"], 3);
  EXPECT_EQ(r.report["verdict"], "solvable");
}

GTEST_TEST(Servo, SpeedMeasurementFailsObserverCondition) {
  std::string p = write_temp("antenna_speed.json",
                             R"({"A": [["0", "1"], ["0", "-4.6"]], "B": [["0"], ["0.787"]], "E": [["0"], ["0.1"]],
                                 "D": [["1", "1"]], "H": [["0", "1"]], "F": [["0"]]})");
  CliRun r = run_cli({"servo", p, "--check"});
  EXPECT_EQ(r.code, kNotEstablished);
  EXPECT_FALSE(r.report["conditions"]["observer"]["ok"].get<bool>());
}

GTEST_TEST(Servo, ExponentialReferenceGains) {
  CliRun r = run_cli({"servo", model_path("exponential_reference.json"), "--synth"});
  ASSERT_EQ(r.code, kOk);
  auto gain = [](const Json& j) { return std::stod(j.get<std::string>()); };
  EXPECT_NEAR(gain(r.report["regulator"]["K1"][0][0]), -2.167, 1e-2);
  EXPECT_NEAR(gain(r.report["regulator"]["K1"][0][1]), -7.833, 1e-2);
  EXPECT_NEAR(gain(r.report["regulator"]["K2"][0][0]), -21.333, 1e-2);
}

GTEST_TEST(Servo, CollidingReferenceIsNotEstablished) {
  CliRun r = run_cli({"servo", model_path("exponential_reference.json"), "--check", "--refpoly", "s+1"});
  EXPECT_EQ(r.code, kNotEstablished);
  EXPECT_EQ(r.report["verdict"], "not established");
  EXPECT_FALSE(r.report["conditions"]["internal_model"]["zeros_disjoint"].get<bool>());
}

GTEST_TEST(Servo, CsvTrajectory) {
  std::string csv = (std::filesystem::temp_directory_path() / "zerolab_cli_test.csv").string();
  CliRun r = run_cli({"servo", model_path("antenna.json"), "--synth", "--csv", csv, "--horizon", "30",
                   "--disturbance", "10"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_LT(std::stod(r.report["simulation"]["final_error"].get<std::string>()), 1e-3);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,x1,x2,x3,x4,x5,x6,y1");
}

GTEST_TEST(Reports, RoundTripAndDeterminism) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"zeros", model_path("square_two_input.json"), "--seed", "7"},
           {"zeros", model_path("mixed_decoupling.json")},
           {"assign", model_path("gradient_assignment.json"), "--method", "gradient"}}) {
    CliRun a = run_cli(args), b = run_cli(args);
    EXPECT_EQ(a.text, b.text);
    EXPECT_EQ(Json::parse(a.report.dump()), a.report);
    EXPECT_EQ(a.report.dump(2) + "\n", a.text);
  }
}

GTEST_TEST(Reports, InputErrors) {
  EXPECT_EQ(run_cli({"zeros", "/nonexistent/model.json"}).code, kInput);
  EXPECT_EQ(run_cli({"zeros"}).code, kInput);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kInput);
  std::string p = write_temp("broken.json", "{ not json");
  EXPECT_EQ(run_cli({"zeros", p}).code, kInput);
  EXPECT_EQ(run_cli({"--help"}).code, kOk);
}

}  // namespace
}  // namespace zerolab::cli

#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "kaehler/driver.hpp"
#include "kaehler/error.hpp"
#include "support.hpp"

using namespace kaehler;
using json = nlohmann::ordered_json;

namespace {

FormFile inner_product_file() {
  BilinearMap phi(2, QuadSpace::euclidean(1));
  phi.set(0, 0, Vector::Ones(1));
  phi.set(1, 1, Vector::Ones(1));
  return FormFile::from_form(phi);
}

std::string example_document(std::uint64_t seed = 0) {
  SuiteOptions opt;
  opt.seed = seed;
  opt.points = 1;
  return *cmd_example_suite(testing::standard_radii(), opt).document;
}

const Check* find(const Report& r, const std::string& name) {
  for (const Check& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("form files round trip") {
  const KaehlerPair pair = testing::pair_at(testing::example1(), 3);
  const FormFile f = FormFile::from_pair(pair);
  const FormFile g = FormFile::parse(f.dump());
  CHECK(g.dim_v == 6);
  CHECK(g.w_signature[0] == 2);
  CHECK(g.w_signature[1] == 1);
  CHECK((g.values - f.values).norm() == 0.0);
  CHECK(g.describes_alpha());
  CHECK(g.dump() == f.dump());
  const KaehlerPair back = g.pair();
  CHECK((back.beta().values() - pair.beta().values()).norm() == 0.0);
  const json j = json::parse(f.dump());
  CHECK(j["tensor"][1][2][0].get<double>() == pair.alpha().at(1, 2)[0]);
}

TEST_CASE("form file validation") {
  const std::string good = FormFile::from_pair(testing::pair_at(testing::example1(), 1)).dump();
  json j = json::parse(good);
  CHECK_NOTHROW(FormFile::parse(j.dump()));
  auto broken = [&](auto mutate) {
    json c = j;
    mutate(c);
    return c.dump();
  };
  CHECK_THROWS_WITH_AS(FormFile::parse("{oops"), doctest::Contains("ParseError"), Error);
  CHECK_THROWS_WITH_AS(FormFile::parse("[1, 2]"), doctest::Contains("ParseError"), Error);
  CHECK_THROWS_AS(FormFile::parse(broken([](json& c) { c.erase("tensor"); })), Error);
  CHECK_THROWS_AS(FormFile::parse(broken([](json& c) { c["dim_v"] = 5; })), Error);
  CHECK_THROWS_AS(FormFile::parse(broken([](json& c) { c["w_signature"] = {3, 0}; })), Error);
  CHECK_THROWS_AS(FormFile::parse(broken([](json& c) { c["gram_w"][0][1] = 0.5; })), Error);
  CHECK_THROWS_AS(FormFile::parse(broken([](json& c) { c["J"][0][0] = 1.0; })), Error);
  CHECK_THROWS_AS(FormFile::parse(broken([](json& c) { c["w_index"] = 7; })), Error);
  CHECK_THROWS_AS(FormFile::parse(broken([](json& c) { c["tensor"][0][0][0] = "x"; })), Error);
  CHECK_THROWS_WITH_AS(FormFile::load("/nonexistent/file.json"), doctest::Contains("IoError"), Error);
}

TEST_CASE("report semantics") {
  Report r;
  r.suite = "t";
  r.add("a", 1e-12, 1e-9);
  CHECK(r.passed());
  r.add_at_least("dim", 6, 6);
  CHECK(r.passed());
  r.add("nan", std::nan(""), 1.0);
  CHECK_FALSE(r.passed());
  CHECK(r.exit_code() == 1);
  const json j = json::parse(r.dump(false));
  CHECK_FALSE(j.contains("runtime_ms"));
  CHECK(j["checks"][2]["max_residual"] == "nan");
  for (const auto& c : j["checks"])
    if (c["max_residual"].is_number())
      CHECK(c["pass"].get<bool>() == (c["max_residual"].get<double>() <= c["tolerance"].get<double>()));
  Report failed;
  failed.reason = "DegenerateSpan";
  CHECK_FALSE(failed.passed());
}

TEST_CASE("check-flat command") {
  const FormFile zero = FormFile::from_form(BilinearMap::zero(2, QuadSpace::euclidean(2)));
  const Report rz = cmd_check_flat(zero, 1e-9).report;
  CHECK(rz.passed());
  CHECK(rz.checks.at(0).max_residual == 0.0);

  const Report ri = cmd_check_flat(inner_product_file(), 1e-9).report;
  CHECK_FALSE(ri.passed());
  CHECK(ri.checks.at(0).max_residual == doctest::Approx(1.0));

  const FormFile ex = FormFile::parse(example_document());
  const Report re = cmd_check_flat(ex, 1e-9).report;
  CHECK(re.passed());
  CHECK(re.checks.at(0).max_residual <= 1e-9);

  // The exported beta on its own, as a raw form with J.
  const KaehlerPair pair = ex.pair();
  const FormFile raw = FormFile::from_form(pair.beta(), pair.J().matrix());
  CHECK(cmd_check_flat(raw, 1e-9).report.passed());
}

TEST_CASE("diagonalize command") {
  const FormFile ex = FormFile::parse(example_document(5));
  const CommandResult a = cmd_diagonalize(ex, 1e-9, 3);
  CHECK(a.report.passed());
  CHECK(a.report.values["pairs"] == 3);
  REQUIRE(a.document);
  CHECK(json::parse(*a.document)["pairs"].size() == 3);
  const CommandResult b = cmd_diagonalize(ex, 1e-9, 3);
  CHECK(*a.document == *b.document);

  const KaehlerPair pair = ex.pair();
  const CommandResult raw = cmd_diagonalize(FormFile::from_form(pair.beta(), pair.J().matrix()), 1e-9, 3);
  CHECK(raw.report.passed());

  SuiteOptions opt;
  opt.points = 1;
  const FormFile horo = FormFile::parse(*cmd_horosphere_suite(4, opt).document);
  const CommandResult h = cmd_diagonalize(horo, 1e-9, 1);
  CHECK_FALSE(h.report.passed());
  CHECK(h.report.exit_code() == 1);
  REQUIRE(h.report.reason);
  CHECK(*h.report.reason == "DegenerateSpan");
  CHECK_FALSE(h.document);

  CHECK_THROWS_AS(cmd_diagonalize(inner_product_file(), 1e-9, 1), Error);
}

TEST_CASE("example suite") {
  SuiteOptions opt;
  opt.points = 5;
  const Report r = cmd_example_suite(testing::standard_radii(), opt).report;
  CHECK(r.passed());
  const std::vector<double> k = r.values["K"].get<std::vector<double>>();
  REQUIRE(k.size() == 3);
  CHECK(k[0] == doctest::Approx(-0.25).epsilon(1e-9));
  CHECK(k[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(k[2] == doctest::Approx(0.5).epsilon(1e-9));
  for (const char* name : {"flatness", "product_star", "diag_factor_planes", "normal_commutators", "hessian"})
    CHECK(find(r, name) != nullptr);
  CHECK_THROWS_WITH_AS(cmd_example_suite({1.0, 1.0, 1.0}, opt), doctest::Contains("CurvatureConstraintViolated"), Error);
  opt.points = 0;
  CHECK_THROWS_AS(cmd_example_suite(testing::standard_radii(), opt), Error);
}

TEST_CASE("horosphere suite") {
  SuiteOptions opt;
  opt.points = 3;
  const Report r = cmd_horosphere_suite(4, opt).report;
  CHECK(r.passed());
  CHECK(r.values["witness_dimension"].get<int>() >= 6);
  for (const char* name : {"witness_holomorphic", "witness_ricci", "hessian", "parallel_normal", "umbilic"})
    CHECK(find(r, name) != nullptr);
  CHECK_THROWS_AS(cmd_horosphere_suite(2, opt), Error);
}

TEST_CASE("horosphere suite below the witness range keeps the umbilical checks") {
  SuiteOptions opt;
  opt.points = 3;
  const Report r = cmd_horosphere_suite(3, opt).report;
  CHECK(r.passed());
  CHECK(find(r, "witness_dimension") == nullptr);
  CHECK(find(r, "umbilic") != nullptr);
  CHECK(find(r, "hessian_pair_numeric") != nullptr);
}

TEST_CASE("random suite and its negative control") {
  SuiteOptions opt;
  opt.seed = 9;
  const Report good = cmd_random_suite(20, 3, 4, false, opt).report;
  CHECK(good.passed());
  const Report bad = cmd_random_suite(20, 3, 4, true, opt).report;
  CHECK_FALSE(bad.passed());
  CHECK_FALSE(find(bad, "symmetries")->pass);
  CHECK(cmd_random_suite(20, 3, 4, false, opt).report.dump(false) == good.dump(false));
  CHECK_THROWS_AS(cmd_random_suite(0, 3, 4, false, opt), Error);
  CHECK_THROWS_AS(cmd_random_suite(1, 0, 4, false, opt), Error);
}

TEST_CASE("input error classification") {
  CHECK(is_input_error(ErrorCode::ParseError));
  CHECK(is_input_error(ErrorCode::CurvatureConstraintViolated));
  CHECK_FALSE(is_input_error(ErrorCode::DegenerateSpan));
  CHECK_FALSE(is_input_error(ErrorCode::ShapeIdViolation));
}

#pragma once

// File formats, verification reports and the command implementations shared
// by the C API and the command-line tool.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kaehler/bilinear.hpp"
#include "kaehler/error.hpp"
#include "kaehler/kaehler_forms.hpp"

namespace kaehler {

/// A bilinear form on R^dim_v with values in (R^k, gram_w). With both J and
/// w_index present the tensor holds a second fundamental form alpha and
/// commands operate on the beta derived from it; otherwise the tensor is the
/// form itself. The domain inner product is the identity.
struct FormFile {
  int dim_v = 0;
  std::array<int, 2> w_signature{0, 0};
  Matrix gram_w;
  Matrix values;  // target x (dim_v * dim_v), column i * dim_v + j
  std::optional<Matrix> J;
  std::optional<int> w_index;

  bool describes_alpha() const { return J.has_value() && w_index.has_value(); }
  BilinearMap form() const;
  /// The pair built from alpha; requires describes_alpha().
  KaehlerPair pair(double tol = kDefaultTol) const;
  /// beta (derived or raw) with J, when J is present.
  ComplexForm complex_form(double tol = kDefaultTol) const;

  static FormFile from_form(const BilinearMap& form, std::optional<Matrix> j = std::nullopt,
                            std::optional<int> w_index = std::nullopt);
  static FormFile from_pair(const KaehlerPair& pair);

  /// Throws Error(ParseError) on malformed or inconsistent documents.
  static FormFile parse(const std::string& text, double tol = kDefaultTol);
  static FormFile load(const std::string& path, double tol = kDefaultTol);
  std::string dump() const;
  void save(const std::string& path) const;
};

struct Check {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Report {
  std::string suite;
  std::vector<Check> checks;
  std::uint64_t seed = 0;
  std::int64_t runtime_ms = 0;
  std::optional<std::string> reason;
  nlohmann::ordered_json values = nlohmann::ordered_json::object();

  /// Records max_residual against tolerance; NaN residuals fail.
  void add(const std::string& name, double max_residual, double tolerance);
  /// A lower bound check: passes when value >= bound.
  void add_at_least(const std::string& name, double value, double bound);
  bool passed() const;
  int exit_code() const { return passed() ? 0 : 1; }
  nlohmann::ordered_json to_json(bool include_runtime = true) const;
  std::string dump(bool include_runtime = true) const;
};

/// Output of a command: the report plus an optional document for --out.
struct CommandResult {
  Report report;
  std::optional<std::string> document;
};

struct SuiteOptions {
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  int points = 10;
};

/// Commands throw Error(ParseError / CurvatureConstraintViolated /
/// InvalidArgument) for invalid input; hypothesis failures are reported in
/// the Report with a reason instead.
CommandResult cmd_check_flat(const FormFile& file, double tol);
CommandResult cmd_diagonalize(const FormFile& file, double tol, std::uint64_t seed);
CommandResult cmd_example_suite(const std::vector<double>& radii, const SuiteOptions& options);
CommandResult cmd_horosphere_suite(int n, const SuiteOptions& options);
CommandResult cmd_random_suite(int trials, int n, int p, bool corrupt, const SuiteOptions& options);

/// JSON document of a diagonalizing basis.
std::string basis_document(const DiagonalizingBasis& basis);

/// True for error codes that signal bad input (exit code 2).
bool is_input_error(ErrorCode code);

}  // namespace kaehler

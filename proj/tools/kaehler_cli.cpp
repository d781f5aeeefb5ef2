#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kaehler/kaehler.h"

namespace {

constexpr int kExitInput = 2;

int fail_input(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return kExitInput;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument(item);
  }
  return out;
}

bool write_file(const std::string& path, const char* text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) return false;
  f << text;
  return static_cast<bool>(f);
}

// Prints the report, writes the optional document and maps the status to an exit code.
int finish(kf_status status, kf_report* report, char* document, const std::string& out_path) {
  if (!report) return status == KF_INPUT_ERROR ? fail_input(kf_last_error()) : (std::cerr << "error: " << kf_last_error() << "\n", 1);
  char* json = nullptr;
  if (kf_report_json(report, 1, &json) == KF_OK) {
    std::cout << json;
    kf_string_free(json);
  }
  int code = kf_report_exit_code(report);
  if (!out_path.empty() && document && !write_file(out_path, document)) code = fail_input("cannot write " + out_path);
  kf_string_free(document);
  kf_report_free(report);
  return code;
}

kf_form* load_form(const std::string& path, double tol, int& code) {
  kf_form* form = nullptr;
  const kf_status st = kf_form_load(path.c_str(), tol, &form);
  if (st != KF_OK) code = st == KF_INPUT_ERROR ? fail_input(kf_last_error()) : 1;
  return form;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification tools for Kaehler submanifolds of hyperbolic space"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kf_version());

  double tol = 1e-9;
  std::uint64_t seed = 0;
  int points = 10;
  std::string path, out_path, radii = "2,1,1.4142135623730951", dims = "3,4";
  int n = 4, trials = 100;
  bool corrupt = false;

  auto* flat = app.add_subcommand("check-flat", "Test a form file for flatness");
  flat->add_option("path", path, "Form file")->required();
  flat->add_option("--tol", tol, "Tolerance");

  auto* diag = app.add_subcommand("diagonalize", "Compute a diagonalizing basis of a form file with J");
  diag->add_option("path", path, "Form file")->required();
  diag->add_option("--tol", tol, "Tolerance");
  diag->add_option("--seed", seed, "Random seed");
  diag->add_option("--out", out_path, "Basis output file");

  auto* example = app.add_subcommand("example-suite", "Checks on a product of umbilical surfaces");
  example->add_option("--radii", radii, "Comma separated radii r1,...,rn");
  example->add_option("--points", points, "Number of sample points");
  example->add_option("--tol", tol, "Tolerance");
  example->add_option("--seed", seed, "Random seed");
  example->add_option("--out", out_path, "Write the form file of the first point");

  auto* horo = app.add_subcommand("horosphere-suite", "Checks on S^2 x R^{2n-2} in a horosphere");
  horo->add_option("--n", n, "Complex dimension (n >= 3)");
  horo->add_option("--points", points, "Number of sample points");
  horo->add_option("--tol", tol, "Tolerance");
  horo->add_option("--seed", seed, "Random seed");
  horo->add_option("--out", out_path, "Write the form file of the first point");

  auto* random = app.add_subcommand("random-suite", "Randomized algebraic identity sweeps");
  random->add_option("--trials", trials, "Number of trials");
  random->add_option("--seed", seed, "Random seed");
  random->add_option("--dims", dims, "n,p: complex dimension and codimension of the shape form");
  random->add_option("--tol", tol, "Tolerance");
  random->add_flag("--corrupt", corrupt, "Flip one tensor entry (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  if (!(tol > 0)) return fail_input("--tol must be positive");

  kf_report* report = nullptr;
  char* document = nullptr;
  if (*flat || *diag) {
    int code = 0;
    kf_form* form = load_form(path, tol, code);
    if (!form) return code;
    const kf_status st = *flat ? kf_check_flat(form, tol, &report) : kf_diagonalize(form, tol, seed, &report, &document);
    kf_form_free(form);
    return finish(st, report, document, out_path);
  }
  if (*example) {
    std::vector<double> r;
    try {
      r = parse_list(radii);
    } catch (const std::exception&) {
      return fail_input("--radii expects comma separated numbers");
    }
    const kf_status st = kf_example_suite(r.data(), r.size(), points, tol, seed, &report, &document);
    return finish(st, report, document, out_path);
  }
  if (*horo) {
    const kf_status st = kf_horosphere_suite(n, points, tol, seed, &report, &document);
    return finish(st, report, document, out_path);
  }
  std::vector<double> np;
  try {
    np = parse_list(dims);
  } catch (const std::exception&) {
    return fail_input("--dims expects n,p");
  }
  if (np.size() != 2) return fail_input("--dims expects n,p");
  const kf_status st = kf_random_suite(trials, static_cast<int>(np[0]), static_cast<int>(np[1]), corrupt ? 1 : 0,
                                       tol, seed, &report);
  return finish(st, report, nullptr, out_path);
}

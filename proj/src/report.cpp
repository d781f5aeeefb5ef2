#include <cmath>

#include "kaehler/driver.hpp"

namespace kaehler {

void Report::add(const std::string& name, double max_residual, double tolerance) {
  const bool pass = !std::isnan(max_residual) && max_residual <= tolerance;
  checks.push_back({name, max_residual, tolerance, pass});
}

void Report::add_at_least(const std::string& name, double value, double bound) {
  add(name, std::max(0.0, bound - value), 0.0);
}

bool Report::passed() const {
  if (reason) return false;
  for (const Check& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::ordered_json Report::to_json(bool include_runtime) const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    nlohmann::ordered_json entry;
    entry["name"] = c.name;
    // NaN and infinities are not representable in JSON numbers.
    if (std::isfinite(c.max_residual))
      entry["max_residual"] = c.max_residual;
    else
      entry["max_residual"] = std::isnan(c.max_residual) ? "nan" : (c.max_residual > 0 ? "inf" : "-inf");
    entry["tolerance"] = c.tolerance;
    entry["pass"] = c.pass;
    list.push_back(std::move(entry));
  }
  j["checks"] = std::move(list);
  j["seed"] = seed;
  if (include_runtime) j["runtime_ms"] = runtime_ms;
  j["pass"] = passed();
  if (reason) j["reason"] = *reason;
  if (!values.empty()) j["values"] = values;
  return j;
}

std::string Report::dump(bool include_runtime) const { return to_json(include_runtime).dump(2) + "\n"; }

}  // namespace kaehler

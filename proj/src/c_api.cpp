#include "kaehler/kaehler.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "kaehler/driver.hpp"

struct kf_form {
  kaehler::FormFile file;
};

struct kf_report {
  kaehler::Report report;
};

namespace {

thread_local std::string g_last_error;

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

kf_status record(kf_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <class F>
kf_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const kaehler::Error& e) {
    return record(kaehler::is_input_error(e.code()) ? KF_INPUT_ERROR : KF_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return record(KF_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(KF_INTERNAL, e.what());
  }
}

kf_status deliver(kaehler::CommandResult&& result, kf_report** report, char** document) {
  const kaehler::Report& r = result.report;
  kf_status status = KF_OK;
  if (r.reason) status = record(KF_PRECONDITION, *r.reason);
  else if (!r.passed()) status = record(KF_CHECK_FAILED, "one or more checks failed");
  if (document) *document = result.document ? copy_string(*result.document) : nullptr;
  *report = new kf_report{std::move(result.report)};
  return status;
}

}  // namespace

extern "C" {

const char* kf_version(void) { return "1.0.0"; }

const char* kf_last_error(void) { return g_last_error.c_str(); }

void kf_string_free(char* s) { std::free(s); }

kf_status kf_form_load(const char* path, double tol, kf_form** out) {
  if (!path || !out) return record(KF_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new kf_form{kaehler::FormFile::load(path, tol)};
    return KF_OK;
  });
}

kf_status kf_form_parse(const char* text, double tol, kf_form** out) {
  if (!text || !out) return record(KF_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new kf_form{kaehler::FormFile::parse(text, tol)};
    return KF_OK;
  });
}

kf_status kf_form_save(const kf_form* form, const char* path) {
  if (!form || !path) return record(KF_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    form->file.save(path);
    return KF_OK;
  });
}

kf_status kf_form_dump(const kf_form* form, char** out) {
  if (!form || !out) return record(KF_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(form->file.dump());
    return KF_OK;
  });
}

int kf_form_dim(const kf_form* form) { return form ? form->file.dim_v : -1; }

void kf_form_free(kf_form* form) { delete form; }

kf_status kf_check_flat(const kf_form* form, double tol, kf_report** report) {
  if (!form || !report) return record(KF_INVALID_ARGUMENT, "null argument");
  return guarded([&] { return deliver(kaehler::cmd_check_flat(form->file, tol), report, nullptr); });
}

kf_status kf_diagonalize(const kf_form* form, double tol, uint64_t seed, kf_report** report, char** basis_json) {
  if (!form || !report) return record(KF_INVALID_ARGUMENT, "null argument");
  return guarded([&] { return deliver(kaehler::cmd_diagonalize(form->file, tol, seed), report, basis_json); });
}

kf_status kf_example_suite(const double* radii, size_t count, int points, double tol, uint64_t seed,
                           kf_report** report, char** form_json) {
  if ((!radii && count) || !report) return record(KF_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::vector<double> r(radii, radii + count);
    return deliver(kaehler::cmd_example_suite(r, {tol, seed, points}), report, form_json);
  });
}

kf_status kf_horosphere_suite(int n, int points, double tol, uint64_t seed, kf_report** report, char** form_json) {
  if (!report) return record(KF_INVALID_ARGUMENT, "null argument");
  return guarded([&] { return deliver(kaehler::cmd_horosphere_suite(n, {tol, seed, points}), report, form_json); });
}

kf_status kf_random_suite(int trials, int n, int p, int corrupt, double tol, uint64_t seed, kf_report** report) {
  if (!report) return record(KF_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    return deliver(kaehler::cmd_random_suite(trials, n, p, corrupt != 0, {tol, seed, 10}), report, nullptr);
  });
}

kf_status kf_report_json(const kf_report* report, int include_runtime, char** out) {
  if (!report || !out) return record(KF_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(report->report.dump(include_runtime != 0));
    return KF_OK;
  });
}

int kf_report_passed(const kf_report* report) { return report && report->report.passed() ? 1 : 0; }

int kf_report_exit_code(const kf_report* report) { return report ? report->report.exit_code() : 2; }

void kf_report_free(kf_report* report) { delete report; }

}  // extern "C"

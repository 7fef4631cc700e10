#include "hohmann/hohmann.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "hohmann/errors.hpp"
#include "hohmann/hohmann_analytic.hpp"
#include "hohmann/kkt_solver.hpp"
#include "hohmann/scenario.hpp"
#include "hohmann/verification.hpp"

struct hohmann_config {
  hohmann::scenario::ScenarioConfig value;
};

struct hohmann_summary {
  hohmann::scenario::RunSummary value;
};

struct hohmann_report {
  hohmann::verification::Report value;
  std::vector<std::string> lines;
};

namespace {

thread_local std::string g_last_error;

int fail(int status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps library exceptions onto status codes. Must be called from a catch block.
int translate_current() {
  try {
    throw;
  } catch (const hohmann::ConfigError& e) {
    return fail(HOHMANN_E_CONFIG, e.what());
  } catch (const hohmann::NonconvergenceError& e) {
    return fail(HOHMANN_E_NONCONVERGENCE, e.what());
  } catch (const hohmann::PreconditionError& e) {
    return fail(HOHMANN_E_ARGUMENT, e.what());
  } catch (const hohmann::Error& e) {
    // Domain, feasibility, degeneracy, singularity and friends.
    return fail(HOHMANN_E_DOMAIN, e.what());
  } catch (const std::bad_alloc&) {
    return fail(HOHMANN_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HOHMANN_E_INTERNAL, e.what());
  } catch (...) {
    return fail(HOHMANN_E_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class F>
int guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (...) {
    return translate_current();
  }
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = hohmann::scenario::preset_scenario_names();
  return names;
}

std::string key_of(const std::string& line) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) return {};
  auto key = line.substr(0, eq);
  while (!key.empty() && key.back() == ' ') key.pop_back();
  return key;
}

}  // namespace

extern "C" {

const char* hohmann_version(void) { return "1.0.0"; }

const char* hohmann_last_error(void) { return g_last_error.c_str(); }

const char* hohmann_status_name(int status) {
  switch (status) {
    case HOHMANN_OK: return "ok";
    case HOHMANN_E_INTERNAL: return "internal error";
    case HOHMANN_E_CONFIG: return "config error";
    case HOHMANN_E_NONCONVERGENCE: return "nonconvergence";
    case HOHMANN_E_VERIFICATION: return "verification failed";
    case HOHMANN_E_DOMAIN: return "domain error";
    case HOHMANN_E_ARGUMENT: return "invalid argument";
    default: return "unknown status";
  }
}

void hohmann_string_free(char* s) { std::free(s); }

int hohmann_config_parse(const char* text, hohmann_config** out) {
  if (!text || !out) return fail(HOHMANN_E_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new hohmann_config{hohmann::scenario::parse_config(text)};
    return HOHMANN_OK;
  });
}

int hohmann_config_load(const char* path, hohmann_config** out) {
  if (!path || !out) return fail(HOHMANN_E_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new hohmann_config{hohmann::scenario::load_config(path)};
    return HOHMANN_OK;
  });
}

int hohmann_config_preset(const char* name, hohmann_config** out) {
  if (!name || !out) return fail(HOHMANN_E_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new hohmann_config{hohmann::scenario::preset_scenario(name)};
    return HOHMANN_OK;
  });
}

int hohmann_config_set(hohmann_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return fail(HOHMANN_E_ARGUMENT, "null argument");
  return guarded([&] {
    std::string k = key;
    // Radius and altitude forms of the same orbit exclude each other.
    std::string twin;
    if (k == "r0") twin = "altitude0";
    if (k == "altitude0") twin = "r0";
    if (k == "rf") twin = "altitudef";
    if (k == "altitudef") twin = "rf";

    std::istringstream in(hohmann::scenario::serialize(config->value));
    std::string text, line;
    while (std::getline(in, line)) {
      const auto lk = key_of(line);
      if (lk == k || (!twin.empty() && lk == twin)) continue;
      text += line + '\n';
    }
    text += k + " = " + value + '\n';
    config->value = hohmann::scenario::parse_config(text);
    return HOHMANN_OK;
  });
}

int hohmann_config_serialize(const hohmann_config* config, char** out_text) {
  if (!config || !out_text) return fail(HOHMANN_E_ARGUMENT, "null argument");
  return guarded([&] {
    *out_text = dup_string(hohmann::scenario::serialize(config->value));
    return HOHMANN_OK;
  });
}

void hohmann_config_free(hohmann_config* config) { delete config; }

size_t hohmann_preset_count(void) { return preset_names().size(); }

const char* hohmann_preset_name(size_t index) {
  const auto& names = preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

int hohmann_run(const hohmann_config* config, const char* out_dir, int verbose,
                hohmann_summary** out) {
  if (!config || !out) return fail(HOHMANN_E_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const auto result =
        hohmann::scenario::run(config->value, out_dir ? out_dir : ".", verbose ? &std::cout : nullptr);
    *out = new hohmann_summary{result.summary};
    switch (result.status) {
      case hohmann::scenario::RunStatus::Ok: return int(HOHMANN_OK);
      case hohmann::scenario::RunStatus::Nonconvergence:
        return fail(HOHMANN_E_NONCONVERGENCE, result.summary.message);
      case hohmann::scenario::RunStatus::VerificationFailed:
        return fail(HOHMANN_E_VERIFICATION, "one or more criteria failed");
    }
    return fail(HOHMANN_E_INTERNAL, "unexpected run status");
  });
}

int hohmann_summary_json(const hohmann_summary* summary, char** out_json) {
  if (!summary || !out_json) return fail(HOHMANN_E_ARGUMENT, "null argument");
  return guarded([&] {
    *out_json = dup_string(hohmann::scenario::to_json(summary->value));
    return HOHMANN_OK;
  });
}

int hohmann_summary_text(const hohmann_summary* summary, char** out_text) {
  if (!summary || !out_text) return fail(HOHMANN_E_ARGUMENT, "null argument");
  return guarded([&] {
    *out_text = dup_string(hohmann::scenario::to_text(summary->value));
    return HOHMANN_OK;
  });
}

void hohmann_summary_free(hohmann_summary* summary) { delete summary; }

int hohmann_verify(const char* filter, int verbose, hohmann_report** out) {
  if (!out) return fail(HOHMANN_E_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    // Validate the filter before any criterion runs.
    hohmann::verification::parse_filter(filter ? filter : "");
    auto rep = std::make_unique<hohmann_report>();
    rep->value = hohmann::verification::run(filter ? filter : "", verbose ? &std::cout : nullptr, verbose != 0);
    for (const auto& r : rep->value.results) rep->lines.push_back(r.summary_line());
    const bool ok = rep->value.all_passed();
    *out = rep.release();
    if (!ok) return fail(HOHMANN_E_VERIFICATION, "one or more criteria failed");
    return int(HOHMANN_OK);
  });
}

size_t hohmann_report_count(const hohmann_report* report) {
  return report ? report->value.results.size() : 0;
}

int hohmann_report_item(const hohmann_report* report, size_t index, int* id, int* passed,
                        const char** line) {
  if (!report) return fail(HOHMANN_E_ARGUMENT, "null report");
  if (index >= report->value.results.size()) return fail(HOHMANN_E_ARGUMENT, "index out of range");
  const auto& r = report->value.results[index];
  if (id) *id = r.id;
  if (passed) *passed = r.passed ? 1 : 0;
  if (line) *line = report->lines[index].c_str();
  return HOHMANN_OK;
}

int hohmann_report_text(const hohmann_report* report, char** out_text) {
  if (!report || !out_text) return fail(HOHMANN_E_ARGUMENT, "null argument");
  return guarded([&] {
    std::string text;
    for (const auto& r : report->value.results) text += hohmann::verification::describe(r);
    *out_text = dup_string(text);
    return HOHMANN_OK;
  });
}

void hohmann_report_free(hohmann_report* report) { delete report; }

int hohmann_sweep(double lo, double hi, size_t n, const char* csv_path, char** out_csv) {
  return guarded([&] {
    const auto csv = hohmann::scenario::sweep_csv(hohmann::scenario::sweep(lo, hi, n));
    if (csv_path) {
      std::ofstream f(csv_path);
      if (!(f << csv)) return fail(HOHMANN_E_CONFIG, std::string("cannot write ") + csv_path);
    }
    if (out_csv) *out_csv = dup_string(csv);
    return int(HOHMANN_OK);
  });
}

int hohmann_analytic_plan(double mu, double r0, double rf, double dv0[3], double dv1[3],
                          double* transfer_time) {
  return guarded([&] {
    const hohmann::GravField field(mu);
    const auto plan = hohmann::hohmann_plan(r0, rf, field);
    for (int i = 0; i < 3; ++i) {
      if (dv0) dv0[i] = plan.dv0[i];
      if (dv1) dv1[i] = plan.dv1[i];
    }
    if (transfer_time) *transfer_time = plan.t_impulse_1;
    return HOHMANN_OK;
  });
}

int hohmann_stationary_points(double rbar_f, double prograde[5], double retrograde[5]) {
  return guarded([&] {
    const auto [pro, retro] = hohmann::kkt::stationary_points(rbar_f);
    auto fill = [](const hohmann::kkt::ClassifiedSolution& s, double* out) {
      if (!out) return;
      out[0] = s.point.x0;
      out[1] = s.point.y0;
      out[2] = s.point.lambda;
      out[3] = s.point.yf;
      out[4] = s.cost;
    };
    fill(pro, prograde);
    fill(retro, retrograde);
    return HOHMANN_OK;
  });
}

}  // extern "C"

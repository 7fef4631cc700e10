// Command-line front end. Talks to the library through the C interface only.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hohmann/hohmann.h"

namespace {

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kNonconvergence = 3, kVerification = 4 };

int exit_code(int status) {
  switch (status) {
    case HOHMANN_OK: return kOk;
    case HOHMANN_E_CONFIG:
    case HOHMANN_E_DOMAIN:
    case HOHMANN_E_ARGUMENT: return kUsage;
    case HOHMANN_E_NONCONVERGENCE: return kNonconvergence;
    case HOHMANN_E_VERIFICATION: return kVerification;
    default: return kInternal;
  }
}

int report_error(int status) {
  std::cerr << "hohmann: " << hohmann_status_name(status) << ": " << hohmann_last_error() << '\n';
  return exit_code(status);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  hohmann_string_free(s);
  return out;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("HOHMANN_OUT_DIR"); env && *env) return env;
  return "out";
}

struct ConfigGuard {
  hohmann_config* p = nullptr;
  ~ConfigGuard() { hohmann_config_free(p); }
};

// Loads a config from --config or --preset and applies --tol and --set.
int load(const std::string& path, const std::string& preset, const std::optional<double>& tol,
         const std::vector<std::string>& sets, ConfigGuard& cfg) {
  if (path.empty() == preset.empty()) {
    std::cerr << "hohmann: exactly one of --config and --preset is required\n";
    return kUsage;
  }
  int st = path.empty() ? hohmann_config_preset(preset.c_str(), &cfg.p)
                        : hohmann_config_load(path.c_str(), &cfg.p);
  if (st != HOHMANN_OK) return report_error(st);
  if (tol) {
    st = hohmann_config_set(cfg.p, "tol", std::to_string(*tol).c_str());
    if (st != HOHMANN_OK) return report_error(st);
  }
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "hohmann: --set expects key=value, got '" << kv << "'\n";
      return kUsage;
    }
    st = hohmann_config_set(cfg.p, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != HOHMANN_OK) return report_error(st);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-fuel two-impulse transfers between circular orbits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hohmann_version()));

  std::string config_path, preset, out_dir = default_out_dir(), filter;
  std::optional<double> tol;
  std::vector<std::string> sets;
  bool verbose = false, json = false;

  auto* run = app.add_subcommand("run", "Run a scenario and write its summary and trajectory");
  run->add_option("-c,--config", config_path, "Scenario config file")->check(CLI::ExistingFile);
  run->add_option("-p,--preset", preset, "Built-in scenario (see `presets`)");
  run->add_option("-o,--out", out_dir, "Output directory (default $HOHMANN_OUT_DIR or ./out)");
  run->add_option("--tol", tol, "Override the solver tolerance");
  run->add_option("--set", sets, "Override a config key, key=value (repeatable)");
  run->add_flag("-v,--verbose", verbose, "Echo solver diagnostics");
  run->add_flag("--json", json, "Print the summary as JSON instead of text");

  auto* show = app.add_subcommand("config", "Print the canonical config of a scenario");
  show->add_option("-c,--config", config_path, "Scenario config file")->check(CLI::ExistingFile);
  show->add_option("-p,--preset", preset, "Built-in scenario");
  show->add_option("--tol", tol, "Override the solver tolerance");
  show->add_option("--set", sets, "Override a config key, key=value (repeatable)");

  auto* verify = app.add_subcommand("verify", "Run the acceptance criteria");
  verify->add_option("-f,--filter", filter, "Criteria to run, e.g. 1,3,7-9 (default all)");
  verify->add_flag("-v,--verbose", verbose, "Print every check");

  double from = 1.5, to = 100.0;
  std::size_t count = 20;
  std::string csv_path;
  auto* sweep = app.add_subcommand("sweep", "Tabulate both stationary points over orbit ratios");
  sweep->add_option("--from", from, "Lowest ratio rf/r0 (> 1)")->capture_default_str();
  sweep->add_option("--to", to, "Highest ratio")->capture_default_str();
  sweep->add_option("-n,--n", count, "Number of log-spaced rows")->capture_default_str();
  sweep->add_option("--csv", csv_path, "Also write the table to this file");

  auto* presets = app.add_subcommand("presets", "List built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*presets) {
    for (std::size_t i = 0; i < hohmann_preset_count(); ++i) std::cout << hohmann_preset_name(i) << '\n';
    return kOk;
  }

  if (*show) {
    ConfigGuard cfg;
    if (int rc = load(config_path, preset, tol, sets, cfg); rc != kOk) return rc;
    char* text = nullptr;
    if (int st = hohmann_config_serialize(cfg.p, &text); st != HOHMANN_OK) return report_error(st);
    std::cout << take(text);
    return kOk;
  }

  if (*run) {
    ConfigGuard cfg;
    if (int rc = load(config_path, preset, tol, sets, cfg); rc != kOk) return rc;
    hohmann_summary* summary = nullptr;
    const int st = hohmann_run(cfg.p, out_dir.c_str(), verbose ? 1 : 0, &summary);
    if (summary) {
      char* text = nullptr;
      if (json ? hohmann_summary_json(summary, &text) : hohmann_summary_text(summary, &text)) {
        hohmann_summary_free(summary);
        return report_error(HOHMANN_E_INTERNAL);
      }
      std::cout << take(text);
      if (json) std::cout << '\n';
      hohmann_summary_free(summary);
    }
    return st == HOHMANN_OK ? kOk : report_error(st);
  }

  if (*verify) {
    hohmann_report* report = nullptr;
    const int st = hohmann_verify(filter.c_str(), verbose ? 1 : 0, &report);
    if (!report) return report_error(st);
    if (!verbose) {
      for (std::size_t i = 0; i < hohmann_report_count(report); ++i) {
        const char* line = nullptr;
        hohmann_report_item(report, i, nullptr, nullptr, &line);
        std::cout << line << '\n';
      }
    }
    hohmann_report_free(report);
    return st == HOHMANN_OK ? kOk : report_error(st);
  }

  if (*sweep) {
    char* csv = nullptr;
    const int st = hohmann_sweep(from, to, count, csv_path.empty() ? nullptr : csv_path.c_str(), &csv);
    if (st != HOHMANN_OK) return report_error(st);
    std::cout << take(csv);
    return kOk;
  }
  return kInternal;
}

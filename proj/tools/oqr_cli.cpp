// oqr: orientational quantum revivals of a rigid rotor under a single-cycle THz pulse.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oqr/config.hpp"
#include "oqr/errors.hpp"
#include "oqr/output.hpp"
#include "oqr/scan.hpp"

namespace {

enum ExitCode { kOk = 0, kIoError = 1, kConfigError = 2, kNumericalFailure = 3 };

struct GlobalFlags {
  std::string config;
  std::string out;
  int threads = 0;
  bool seedless = false;
  std::string format;
  std::vector<std::string> sets;
};

oqr::ScanConfig resolve(const GlobalFlags& g) {
  std::vector<std::string> overrides = g.sets;
  if (!g.out.empty()) overrides.push_back("output.dir=" + g.out);
  if (g.threads > 0) overrides.push_back("run.threads=" + std::to_string(g.threads));
  if (!g.format.empty()) overrides.push_back("output.format=" + g.format);
  const std::optional<std::string> path =
      g.config.empty() ? std::nullopt : std::optional<std::string>(g.config);
  return oqr::load_config(path, overrides);
}

void report_files(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
}

int run(const std::string& command, const GlobalFlags& g) {
  const oqr::ScanConfig cfg = resolve(g);
  if (command == "scan") {
    const auto r = oqr::run_scan(cfg);
    report_files(oqr::write_outputs(r, cfg));
    std::printf("%zu points, %zu failed, %.2f s\n", r.points.size(), r.failures(), r.wall_seconds);
    if (r.failures() > 0) {
      for (const auto& p : r.points) {
        if (!p.ok()) std::fprintf(stderr, "E0=%g f=%g: %s\n", p.e0, p.freq_thz, p.error.c_str());
      }
      return kNumericalFailure;
    }
  } else if (command == "simulate" || command == "density") {
    const auto r = oqr::run_simulate(cfg);
    report_files(command == "simulate" ? oqr::write_outputs(r, cfg)
                                       : oqr::write_density_outputs(r, cfg));
    std::printf("cos_max %.6f at %.4f ps, cos_min %.6f at %.4f ps, A_OQR %.6f, tau %.4f ps\n",
                r.report.cos_max, r.report.t_max, r.report.cos_min, r.report.t_min,
                r.report.amplitude, r.revival);
  } else if (command == "magnus-orders") {
    report_files(oqr::write_outputs(oqr::run_magnus_orders(cfg), cfg));
  } else if (command == "spectrum") {
    report_files(oqr::write_outputs(oqr::run_spectrum(cfg), cfg));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orientational quantum revivals driven by a single-cycle THz pulse"};
  app.set_version_flag("--version", std::string(OQR_VERSION));
  GlobalFlags g;
  app.add_option("--config", g.config, "INI experiment file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output directory");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--seedless", g.seedless, "accepted for compatibility; nothing is random");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--set", g.sets, "override a config key, key=value (repeatable)");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "thermal or single-state trace, density map and OQR report"},
      {"scan", "A_OQR over the (E0, delta_1) grid"},
      {"magnus-orders", "single-order Magnus populations"},
      {"spectrum", "|A(omega)| of the pulse"},
      {"density", "angular density heat map only"},
  };
  app.fallthrough();
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, g);
  } catch (const oqr::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const oqr::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIoError;
  }
}

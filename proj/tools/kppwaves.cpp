// Command-line front end: analyze, shoot, pde and sweep.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "kppwaves/commands.hpp"
#include "kppwaves/error.hpp"

namespace {

constexpr int kValidationFailure = 2;
constexpr int kComputationFailure = 3;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("kppwaves");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("KPPWAVES_LOG")) spdlog::cfg::helpers::load_levels(env);
}

bool is_validation(kppwaves::ErrorCode code) {
  using kppwaves::ErrorCode;
  return code == ErrorCode::ConfigError || code == ErrorCode::Unsupported ||
         code == ErrorCode::InvalidParameter || code == ErrorCode::DegenerateScale;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Travelling waves of u_t = (u^{m-1} u_x)_x + u^p - u^q"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir, format = "csv";
  int jobs = 1;
  app.add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("--jobs", jobs, "concurrent sweep rows")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));

  auto* analyze = app.add_subcommand("analyze", "regime, critical speed and fixed points");
  auto* shoot = app.add_subcommand("shoot", "connections, profiles and classifications");
  auto* pde = app.add_subcommand("pde", "profile advection tests");
  auto* sweep = app.add_subcommand("sweep", "predicted against observed class over a speed grid");
  for (auto* sub : {analyze, shoot, pde, sweep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kValidationFailure;
  }
  setup_logging();

  kppwaves::RunConfig cfg;
  try {
    cfg = kppwaves::load_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
  } catch (const kppwaves::Error& e) {
    spdlog::error("{}", e.what());
    return kValidationFailure;
  }

  kppwaves::CommandOptions opts;
  opts.jobs = jobs;
  opts.json = format == "json";
  try {
    kppwaves::echo_config(cfg);
    kppwaves::CommandStatus status;
    if (analyze->parsed()) {
      std::cout << kppwaves::dump(kppwaves::cmd_analyze(cfg, opts));
    } else if (shoot->parsed()) {
      status = kppwaves::cmd_shoot(cfg, opts);
    } else if (pde->parsed()) {
      status = kppwaves::cmd_pde(cfg, opts);
    } else {
      status = kppwaves::cmd_sweep(cfg, opts);
    }
    if (!status.ok()) {
      for (const auto& f : status.failures) spdlog::error("failed: {}", f);
      return kComputationFailure;
    }
  } catch (const kppwaves::Error& e) {
    spdlog::error("{}", e.what());
    return is_validation(e.code()) ? kValidationFailure : kComputationFailure;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kComputationFailure;
  }
  return 0;
}

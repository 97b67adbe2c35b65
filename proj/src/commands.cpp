#include "kppwaves/commands.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <thread>

#include <spdlog/spdlog.h>

#include "kppwaves/error.hpp"

namespace kppwaves {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path out_path(const RunConfig& cfg, const std::string& name) { return fs::path(cfg.output_dir) / name; }

std::vector<double> requested_speeds(const RunConfig& cfg) {
  if (cfg.sweep) return sweep_speeds(*cfg.sweep);
  return cfg.speeds;
}

json classification_json(double c, const Connection& conn, const WaveProfile* prof,
                         const CanonicalModel& cm) {
  json j{{"c", c},
         {"predicted", to_string(classify_speed(cm, c))},
         {"classification", to_string(conn.classification)},
         {"low_confidence", conn.low_confidence}};
  if (conn.classification == WaveClass::None) return j;
  j["x0"] = conn.x0;
  j["n_oscillations"] = conn.n_oscillations;
  j["extrema"] = conn.extrema;
  if (prof) {
    json ext = json::array();
    for (const auto& [xi, f] : prof->overshoot_extrema) ext.push_back({{"xi", xi}, {"f", f}});
    j["overshoot_extrema"] = ext;
    j["xi_range"] = {prof->xi_min(), prof->xi_max()};
    try {
      const auto edge = detect_finite_propagation(*prof, cm);
      j["support_edge"] = edge ? json(*edge) : json(nullptr);
    } catch (const Error& e) {
      j["support_edge"] = nullptr;
      j["support_edge_note"] = e.what();
    }
  }
  return j;
}

WaveClass parse_class(const std::string& s) {
  if (s == "Monotone") return WaveClass::Monotone;
  if (s == "Oscillatory") return WaveClass::Oscillatory;
  return WaveClass::None;
}

}  // namespace

void echo_config(const RunConfig& cfg) { write_text(out_path(cfg, "config.effective.json"), dump(effective_config(cfg))); }

json cmd_analyze(const RunConfig& cfg, const CommandOptions& /*opts*/) {
  json report = analysis_json(cfg);
  write_text(out_path(cfg, "analysis.json"), dump(report));
  return report;
}

CommandStatus cmd_shoot(const RunConfig& cfg, const CommandOptions& opts) {
  CommandStatus status;
  const auto speeds = requested_speeds(cfg);
  if (speeds.empty()) {
    spdlog::warn("no speeds configured; nothing to shoot");
    return status;
  }
  const auto& cm = cfg.canonical;
  const ShootOptions shoot = shoot_options(cfg);
  json summary = json::array();
  for (double c : speeds) {
    const std::string tag = speed_tag(c);
    try {
      const Connection conn = classify_connection(cm, c, shoot);
      std::optional<WaveProfile> prof;
      if (conn.classification != WaveClass::None) {
        prof = reconstruct_profile(conn.trajectory, conn.system, cm);
        write_table(out_path(cfg, "trajectory_" + tag), trajectory_table(conn.trajectory), opts.json);
        write_text(out_path(cfg, "trajectory_" + tag + ".events.json"), dump(events_json(conn.trajectory)));
        const Table pt = profile_table(*prof);
        write_table(out_path(cfg, "profile_" + tag), pt, false);  // read back by the pde command
        if (opts.json) write_table(out_path(cfg, "profile_" + tag), pt, true);
      }
      const json cj = classification_json(c, conn, prof ? &*prof : nullptr, cm);
      write_text(out_path(cfg, "classification_" + tag + ".json"), dump(cj));
      spdlog::info("c={}: {}", c, to_string(conn.classification));
      summary.push_back(cj);
    } catch (const Error& e) {
      spdlog::error("c={}: {}", c, e.what());
      status.failures.push_back(tag + ": " + e.what());
      summary.push_back({{"c", c}, {"error", e.what()}});
    }
  }
  write_text(out_path(cfg, "shoot_summary.json"), dump(summary));
  return status;
}

CommandStatus cmd_pde(const RunConfig& cfg, const CommandOptions& opts) {
  CommandStatus status;
  const auto speeds = requested_speeds(cfg);
  if (speeds.empty()) {
    spdlog::warn("no speeds configured; nothing to evolve");
    return status;
  }
  const auto& cm = cfg.canonical;
  AdvectionOptions adv;
  adv.cells = cfg.pde.cells;
  adv.cfl = cfg.pde.cfl;
  adv.checkpoints = cfg.pde.checkpoints;
  adv.snapshot_times = cfg.pde.snapshot_times;
  if (cfg.pde.x_min) adv.domain = std::make_pair(*cfg.pde.x_min, *cfg.pde.x_max);

  for (double c : speeds) {
    const std::string tag = speed_tag(c);
    if (c >= 0.0) {
      spdlog::warn("c={}: no travelling wave with non-negative speed; skipped", c);
      continue;
    }
    try {
      const fs::path cls_path = out_path(cfg, "classification_" + tag + ".json");
      if (!fs::exists(cls_path)) {
        throw Error(ErrorCode::MissingArtifact, "expected classification file " + cls_path.string());
      }
      const json cj = json::parse(read_text(cls_path));
      const WaveClass cls = parse_class(cj.value("classification", "None"));
      if (cls == WaveClass::None) {
        throw Error(ErrorCode::MissingArtifact, cls_path.string() + " records no profile");
      }
      const WaveProfile prof = read_profile_csv(out_path(cfg, "profile_" + tag + ".csv"), c, cls);
      const AdvectionResult res = advect_profile_test(prof, cm, cfg.pde.t_final, adv);

      write_table(out_path(cfg, "pde_" + tag + "_front"), front_table(res.front_track), opts.json);
      for (const auto& [t, u] : res.snapshots) {
        write_table(out_path(cfg, "pde_" + tag + "_t" + fmt_num(t)), snapshot_table(res.grid, u), opts.json);
      }
      json errors = json::array();
      for (const auto& [t, e] : res.errors) errors.push_back({{"t", t}, {"max_error", e}});
      json summary{{"c", c},
                   {"T", cfg.pde.t_final},
                   {"N", res.grid.cells},
                   {"domain", {res.grid.x_min, res.grid.x_max}},
                   {"max_error", res.max_error},
                   {"errors", errors},
                   {"measured_speed", res.measured_speed ? json(*res.measured_speed) : json(nullptr)},
                   {"max_u", res.max_u},
                   {"steps", res.steps}};
      if (res.measured_speed) summary["speed_relative_error"] = std::abs(*res.measured_speed / c - 1.0);
      write_text(out_path(cfg, "pde_" + tag + "_summary.json"), dump(summary));
      spdlog::info("c={}: max_error={} measured_speed={}", c, res.max_error,
                   res.measured_speed ? fmt_num(*res.measured_speed) : std::string("undefined"));
    } catch (const Error& e) {
      spdlog::error("c={}: {}", c, e.what());
      status.failures.push_back(tag + ": " + e.what());
    }
  }
  return status;
}

SweepRow sweep_row(const CanonicalModel& cm, double c, const ShootOptions& shoot) {
  SweepRow row;
  row.c = c;
  row.predicted = classify_speed(cm, c);
  try {
    if (c >= 0.0) {
      row.observed = WaveClass::None;
      ShootOptions o = shoot;
      o.stop_at_x_axis = true;
      try {
        const PhaseSystem sys = build_system(cm, c);
        row.x0 = first_x_axis_intersection(shoot_from(sys, FixedPointRole::P0, Direction::Forward, o));
      } catch (const Error&) {
        // X0 is informative only; the class of a non-negative speed is known.
      }
      return row;
    }
    const Connection conn = classify_connection(cm, c, shoot);
    row.observed = conn.classification;
    row.x0 = conn.x0;
    row.n_oscillations = conn.n_oscillations;
    row.low_confidence = conn.low_confidence;
  } catch (const Error& e) {
    row.error = e.what();
    row.low_confidence = std::abs(std::abs(c) - critical_speed(cm)) <= kLowConfidenceBand;
  }
  return row;
}

std::vector<SweepRow> run_sweep(const CanonicalModel& cm, std::vector<double> speeds,
                                const ShootOptions& shoot, int jobs) {
  std::sort(speeds.begin(), speeds.end());
  std::vector<SweepRow> rows(speeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < speeds.size(); i = next++) rows[i] = sweep_row(cm, speeds[i], shoot);
  };
  const auto n = static_cast<std::size_t>(std::max(1, jobs));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(n, speeds.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

CommandStatus cmd_sweep(const RunConfig& cfg, const CommandOptions& opts) {
  CommandStatus status;
  const auto speeds = requested_speeds(cfg);
  if (speeds.empty()) {
    spdlog::warn("no speeds configured; empty sweep");
  }
  const auto rows = run_sweep(cfg.canonical, speeds, shoot_options(cfg), opts.jobs);
  for (const auto& r : rows) {
    if (!r.error.empty()) status.failures.push_back(speed_tag(r.c) + ": " + r.error);
  }
  if (opts.json) write_text(out_path(cfg, "sweep.json"), dump(sweep_json(rows)));
  else write_text(out_path(cfg, "sweep.csv"), sweep_csv(rows));
  return status;
}

}  // namespace kppwaves

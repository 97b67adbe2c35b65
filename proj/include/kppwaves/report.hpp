#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kppwaves/config.hpp"
#include "kppwaves/connect.hpp"
#include "kppwaves/pde.hpp"

namespace kppwaves {

/// Fixed-precision text for data files; "nan" for NaN.
std::string fmt_num(double v);

/// File-name tag for a speed, e.g. "c-2.5".
std::string speed_tag(double c);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

/// Numeric table written either as CSV or as a JSON array of row objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  bool exact = false;  // round-trip precision instead of 12 digits
};

std::string to_csv(const Table& t);
nlohmann::json to_json_rows(const Table& t);
/// Writes stem.csv or stem.json; returns the path written.
std::filesystem::path write_table(const std::filesystem::path& stem, const Table& t, bool json);

Table trajectory_table(const Trajectory& traj);
nlohmann::json events_json(const Trajectory& traj);

/// Columns xi, f, df at the native samples, at full precision so that a
/// profile read back evaluates identically.
Table profile_table(const WaveProfile& prof);
/// Reads a profile written as CSV. Throws MissingArtifact naming the file
/// when it does not exist.
WaveProfile read_profile_csv(const std::filesystem::path& path, double c, WaveClass cls);

Table snapshot_table(const Grid& grid, const std::vector<double>& u);
Table front_table(const std::vector<FrontRecord>& track);

/// Canonical parameters, regime, c* and the fixed points for each speed.
nlohmann::json analysis_json(const RunConfig& cfg);

struct SweepRow {
  double c = 0.0;
  SpeedClass predicted = SpeedClass::NoWave;
  std::optional<WaveClass> observed;  // absent when the row failed
  double x0 = std::numeric_limits<double>::quiet_NaN();
  int n_oscillations = 0;
  bool low_confidence = false;
  std::string error;

  bool agrees() const;
};

std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);

/// Pretty JSON with a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace kppwaves

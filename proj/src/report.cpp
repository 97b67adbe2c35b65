#include "kppwaves/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "kppwaves/error.hpp"
#include "kppwaves/phaseplane.hpp"

namespace kppwaves {

using nlohmann::json;

namespace {

// Full round-trip precision for values that are read back.
std::string exact(double v) { return std::isnan(v) ? "nan" : fmt::format("{:.17g}", v); }

json complex_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::string predicted_name(SpeedClass s) {
  switch (s) {
    case SpeedClass::NoWave: return "None";
    case SpeedClass::MonotoneWave: return "Monotone";
    case SpeedClass::OscillatoryWave: return "Oscillatory";
  }
  return "None";
}

}  // namespace

std::string fmt_num(double v) { return std::isnan(v) ? "nan" : fmt::format("{:.12g}", v); }

std::string speed_tag(double c) { return fmt::format("c{:g}", c + 0.0); }

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingArtifact, "expected file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += t.exact ? exact(row[i]) : fmt_num(row[i]);
    }
    out += "\n";
  }
  return out;
}

json to_json_rows(const Table& t) {
  json out = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[t.columns[i]] = std::isnan(row[i]) ? json(nullptr) : json(row[i]);
    }
    out.push_back(std::move(obj));
  }
  return out;
}

std::filesystem::path write_table(const std::filesystem::path& stem, const Table& t, bool as_json) {
  std::filesystem::path path = stem;
  path += as_json ? ".json" : ".csv";
  write_text(path, as_json ? dump(to_json_rows(t)) : to_csv(t));
  return path;
}

Table trajectory_table(const Trajectory& traj) {
  Table t{{"tau", "X", "Y"}, {}, false};
  for (const auto& s : traj.samples) t.rows.push_back({s.tau, s.x, s.y});
  return t;
}

json events_json(const Trajectory& traj) {
  json events = json::array();
  for (const auto& e : traj.events) {
    json ev{{"kind", to_string(e.kind)}, {"index", e.index}, {"X", e.state.x}, {"Y", e.state.y}};
    if (e.target) ev["target"] = to_string(*e.target);
    events.push_back(ev);
  }
  json j{{"c", traj.c},
         {"seed", {{"X", traj.seed.x}, {"Y", traj.seed.y}, {"description", traj.seed_description}}},
         {"start", traj.start_role ? json(to_string(*traj.start_role)) : json(nullptr)},
         {"end", traj.end_role ? json(to_string(*traj.end_role)) : json(nullptr)},
         {"accepted_steps", traj.accepted_steps},
         {"events", events}};
  return j;
}

Table profile_table(const WaveProfile& prof) {
  Table t{{"xi", "f", "df"}, {}, true};
  for (const auto& s : prof.samples) t.rows.push_back({s.xi, s.f, s.df});
  return t;
}

WaveProfile read_profile_csv(const std::filesystem::path& path, double c, WaveClass cls) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::MissingArtifact, "expected profile file " + path.string());
  }
  std::istringstream in(read_text(path));
  std::string line;
  std::getline(in, line);
  if (line.rfind("xi,f", 0) != 0) {
    throw Error(ErrorCode::MissingArtifact, path.string() + " is not a profile table");
  }
  WaveProfile prof;
  prof.c = c;
  prof.classification = cls;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ProfileSample s;
    char comma1 = 0, comma2 = 0;
    std::istringstream ls(line);
    ls >> s.xi >> comma1 >> s.f >> comma2 >> s.df;
    if (!ls || comma1 != ',' || comma2 != ',') {
      throw Error(ErrorCode::MissingArtifact, path.string() + ": malformed row '" + line + "'");
    }
    prof.samples.push_back(s);
  }
  if (prof.samples.size() < 2) {
    throw Error(ErrorCode::MissingArtifact, path.string() + " holds fewer than two samples");
  }
  return prof;
}

Table snapshot_table(const Grid& grid, const std::vector<double>& u) {
  Table t{{"x", "u"}, {}, false};
  for (int i = 0; i < grid.nodes(); ++i) t.rows.push_back({grid.x(i), u[static_cast<std::size_t>(i)]});
  return t;
}

Table front_table(const std::vector<FrontRecord>& track) {
  Table t{{"t", "x_front"}, {}, false};
  for (const auto& r : track) t.rows.push_back({r.t, r.x});
  return t;
}

json analysis_json(const RunConfig& cfg) {
  const auto& cm = cfg.canonical;
  json j;
  j["model"] = cfg.model;
  j["canonical"] = cm;
  j["scaling"] = cfg.scaling;
  j["regime"] = to_string(cm.regime);
  j["critical_speed"] = critical_speed(cm);
  json speeds = json::array();
  for (double c : cfg.speeds) {
    PhaseSystem sys = build_system(cm, std::abs(c));
    if (c < 0.0) sys = mirrored(sys);
    json pts = json::array();
    for (const auto& fp : fixed_points(sys)) {
      pts.push_back({{"role", to_string(fp.role)},
                     {"X", fp.location.x},
                     {"Y", fp.location.y},
                     {"kind", to_string(fp.kind)},
                     {"degenerate", fp.degenerate},
                     {"eigenvalues", {complex_json(fp.eigenvalues[0]), complex_json(fp.eigenvalues[1])}}});
    }
    speeds.push_back({{"c", c}, {"predicted", predicted_name(classify_speed(cm, c))}, {"fixed_points", pts}});
  }
  j["speeds"] = speeds;
  return j;
}

bool SweepRow::agrees() const {
  if (!observed) return false;
  return predicted_name(predicted) == to_string(*observed);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "c,predicted_class,observed_class,X0,n_oscillations,agreement_flag,low_confidence\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", fmt_num(r.c), predicted_name(r.predicted),
                       r.observed ? to_string(*r.observed) : "Error", fmt_num(r.x0), r.n_oscillations,
                       r.agrees() ? 1 : 0, r.low_confidence ? 1 : 0);
  }
  return out;
}

json sweep_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json row{{"c", r.c},
             {"predicted_class", predicted_name(r.predicted)},
             {"observed_class", r.observed ? json(to_string(*r.observed)) : json(nullptr)},
             {"X0", std::isnan(r.x0) ? json(nullptr) : json(r.x0)},
             {"n_oscillations", r.n_oscillations},
             {"agreement_flag", r.agrees()},
             {"low_confidence", r.low_confidence}};
    if (!r.error.empty()) row["error"] = r.error;
    out.push_back(row);
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace kppwaves

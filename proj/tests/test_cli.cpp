#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;

  explicit Workspace(const std::string& name) : dir(fs::temp_directory_path() / ("kppwaves_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }

  fs::path config(const json& j, const std::string& file = "config.json") const {
    const fs::path p = dir / file;
    std::ofstream(p) << j.dump(2);
    return p;
  }
  fs::path out(const std::string& sub = "out") const { return dir / sub; }
};

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(KPPWAVES_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json model(double m, double p, double q) { return {{"m", m}, {"p", p}, {"q", q}}; }

std::string with_config(const fs::path& cfg, const fs::path& out) {
  return "--config " + cfg.string() + " --out " + out.string();
}

}  // namespace

TEST_CASE("analyze") {
  Workspace ws("analyze");
  const auto log = ws.dir / "log.txt";
  {
    const auto cfg = ws.config({{"model", model(2, 2, 1)}, {"speeds", {1.0}}});
    REQUIRE(run(with_config(cfg, ws.out()) + " analyze", log) == 0);
    const json r = json::parse(slurp(ws.out() / "analysis.json"));
    CHECK(r["critical_speed"].get<double>() == doctest::Approx(2.0));
    CHECK(r["regime"] == "CaseI");
    CHECK(r["speeds"][0]["fixed_points"].back()["kind"] == "StableFocus");
    CHECK(json::parse(slurp(log)) == r);
  }
  {
    const auto cfg = ws.config({{"model", model(1, 2, 1)}, {"speeds", json::array()}});
    REQUIRE(run(with_config(cfg, ws.out()) + " analyze", log) == 0);
    CHECK(json::parse(slurp(ws.out() / "analysis.json"))["regime"] == "CaseII");
  }
  {
    const auto cfg = ws.config({{"model", model(1, 1, 2)}, {"speeds", {-1.0}}});
    CHECK(run(with_config(cfg, ws.out()) + " analyze", log) == 2);
    CHECK(slurp(log).find("p>q") != std::string::npos);
  }
  {
    const auto cfg = ws.config({{"model", model(2, 2, 1)}, {"speedz", {1.0}}});
    CHECK(run(with_config(cfg, ws.out()) + " analyze", log) == 2);
    CHECK(slurp(log).find("speedz") != std::string::npos);
  }
  CHECK(run("--config " + (ws.dir / "absent.json").string() + " analyze", log) == 2);
}

TEST_CASE("shoot") {
  Workspace ws("shoot");
  const auto log = ws.dir / "log.txt";
  const auto cfg = ws.config({{"model", model(2, 2, 1)}, {"speeds", {-1.0, -3.0, 1.0}}});
  REQUIRE(run(with_config(cfg, ws.out()) + " shoot", log) == 0);
  CHECK(json::parse(slurp(ws.out() / "classification_c-1.json"))["classification"] == "Oscillatory");
  CHECK(json::parse(slurp(ws.out() / "classification_c-3.json"))["classification"] == "Monotone");
  CHECK(json::parse(slurp(ws.out() / "classification_c1.json"))["classification"] == "None");
  CHECK(fs::exists(ws.out() / "profile_c-1.csv"));
  CHECK(fs::exists(ws.out() / "profile_c-3.csv"));
  CHECK(fs::exists(ws.out() / "trajectory_c-3.csv"));
  CHECK_FALSE(fs::exists(ws.out() / "profile_c1.csv"));
  CHECK(slurp(ws.out() / "profile_c-3.csv").rfind("xi,f,df\n", 0) == 0);

  const auto empty = ws.config({{"model", model(2, 2, 1)}, {"speeds", json::array()}}, "empty.json");
  CHECK(run(with_config(empty, ws.out("empty")) + " shoot", log) == 0);
  CHECK(slurp(log).find("nothing to shoot") != std::string::npos);
  CHECK_FALSE(fs::exists(ws.out("empty") / "shoot_summary.json"));
}

TEST_CASE("pde") {
  Workspace ws("pde");
  const auto log = ws.dir / "log.txt";
  const auto cfg = ws.config({{"model", model(2, 2, 1)}, {"speeds", {-3.0}}, {"pde", {{"N", 1000}, {"T", 1.0}}}});
  CHECK(run(with_config(cfg, ws.out()) + " pde", log) == 3);
  CHECK(slurp(log).find("classification_c-3.json") != std::string::npos);
  CHECK(slurp(log).find("MissingArtifact") != std::string::npos);

  REQUIRE(run(with_config(cfg, ws.out()) + " shoot", log) == 0);
  REQUIRE(run(with_config(cfg, ws.out()) + " pde", log) == 0);
  const json s = json::parse(slurp(ws.out() / "pde_c-3_summary.json"));
  CHECK(s["max_error"].get<double>() < 0.02);
  CHECK(s["measured_speed"].get<double>() == doctest::Approx(-3.0).epsilon(0.02));
  CHECK(fs::exists(ws.out() / "pde_c-3_front.csv"));

  const auto zero = ws.config({{"model", model(2, 2, 1)}, {"speeds", {-3.0}}, {"pde", {{"N", 1000}, {"T", 0.0}}}},
                              "zero.json");
  REQUIRE(run(with_config(zero, ws.out()) + " pde", log) == 0);
  const json z = json::parse(slurp(ws.out() / "pde_c-3_summary.json"));
  CHECK(z["max_error"].get<double>() == 0.0);
  CHECK(z["measured_speed"].is_null());

  // A deleted profile is named in the diagnostic.
  fs::remove(ws.out() / "profile_c-3.csv");
  CHECK(run(with_config(cfg, ws.out()) + " pde", log) == 3);
  CHECK(slurp(log).find("profile_c-3.csv") != std::string::npos);
}

TEST_CASE("sweep") {
  Workspace ws("sweep");
  const auto log = ws.dir / "log.txt";
  const auto cfg = ws.config({{"model", model(2, 2, 1)}, {"sweep", {{"c_min", -3.0}, {"c_max", -0.5}, {"step", 0.25}}}});
  REQUIRE(run(with_config(cfg, ws.out()) + " --jobs 4 --format json sweep", log) == 0);
  const json rows = json::parse(slurp(ws.out() / "sweep.json"));
  REQUIRE(rows.size() == 11);
  double last_monotone = -1e9, first_osc = 1e9;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double c = rows[i]["c"];
    if (i > 0) CHECK(c > rows[i - 1]["c"].get<double>());
    if (rows[i]["observed_class"] == "Monotone") last_monotone = std::max(last_monotone, c);
    if (rows[i]["observed_class"] == "Oscillatory") first_osc = std::min(first_osc, c);
  }
  CHECK(last_monotone <= -2.0);
  CHECK(first_osc >= -2.0);
  CHECK(first_osc - last_monotone <= 0.25 + 1e-12);

  const auto single = ws.config({{"model", model(2, 2, 1)}, {"sweep", {{"c_min", -2.0}, {"c_max", -2.0}, {"step", 0.25}}}},
                                "single.json");
  REQUIRE(run(with_config(single, ws.out("single")) + " sweep", log) == 0);
  const std::string csv = slurp(ws.out("single") / "sweep.csv");
  CHECK(csv.rfind("c,predicted_class,observed_class,X0,n_oscillations,agreement_flag,low_confidence\n", 0) == 0);
  CHECK(csv.find("\n-2,Monotone,Monotone,") != std::string::npos);
  CHECK(csv.substr(csv.size() - 3) == ",1\n");

  const auto pos = ws.config({{"model", model(2, 2, 1)}, {"sweep", {{"c_min", 0.5}, {"c_max", 2.0}, {"step", 0.5}}}},
                             "pos.json");
  REQUIRE(run(with_config(pos, ws.out("pos")) + " --format json sweep", log) == 0);
  const json prows = json::parse(slurp(ws.out("pos") / "sweep.json"));
  CHECK(prows.size() == 4);
  for (const auto& r : prows) CHECK(r["observed_class"] == "None");
}

TEST_CASE("reruns are byte-identical and the echoed config reproduces them") {
  Workspace ws("repro");
  const auto log = ws.dir / "log.txt";
  const auto cfg = ws.config({{"model", {{"m", 2}, {"p", 2}, {"q", 1}, {"kappa", 2}, {"alpha", 1}, {"beta", 1}}},
                              {"speeds", {-1.0, -3.0}},
                              {"pde", {{"N", 800}, {"T", 0.5}, {"snapshot_times", {0.25}}}}});
  for (const char* sub : {"a", "b"}) {
    REQUIRE(run(with_config(cfg, ws.out(sub)) + " shoot", log) == 0);
    REQUIRE(run(with_config(cfg, ws.out(sub)) + " pde", log) == 0);
  }
  const fs::path echoed = ws.out("a") / "config.effective.json";
  REQUIRE(fs::exists(echoed));
  REQUIRE(run(with_config(echoed, ws.out("c")) + " shoot", log) == 0);
  REQUIRE(run(with_config(echoed, ws.out("c")) + " pde", log) == 0);

  int compared = 0;
  for (const auto& e : fs::directory_iterator(ws.out("a"))) {
    const auto name = e.path().filename();
    if (name == "config.effective.json") continue;
    CHECK(slurp(e.path()) == slurp(ws.out("b") / name));
    CHECK(slurp(e.path()) == slurp(ws.out("c") / name));
    ++compared;
  }
  CHECK(compared >= 10);
  CHECK(fs::exists(ws.out("a") / "pde_c-1_t0.25.csv"));

  REQUIRE(run(with_config(cfg, ws.out("j")) + " --format json shoot", log) == 0);
  const json traj = json::parse(slurp(ws.out("j") / "trajectory_c-3.json"));
  REQUIRE(traj.is_array());
  CHECK(traj[0].contains("tau"));
  CHECK(fs::exists(ws.out("j") / "profile_c-3.csv"));
  CHECK(fs::exists(ws.out("j") / "profile_c-3.json"));
}

#pragma once

#include <string>
#include <utility>

#include <nlohmann/json_fwd.hpp>

namespace kppwaves {

/// u_t = kappa (u^{m-1} u_x)_x + alpha u^p - beta u^q
struct GeneralModel {
  double kappa = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double m = 1.0;
  double p = 2.0;
  double q = 1.0;
};

/// Space, time and amplitude scales taking the general equation to the
/// unit-coefficient one: x -> a x, t -> b t, u -> l u.
struct ScalingMap {
  double a = 1.0;
  double b = 1.0;
  double l = 1.0;
};

enum class Regime { CaseI, CaseII, Unsupported };

/// u_t = (u^{m-1} u_x)_x + u^p - u^q
struct CanonicalModel {
  double m = 1.0;
  double p = 2.0;
  double q = 1.0;
  Regime regime = Regime::Unsupported;

  static CanonicalModel make(double m, double p, double q);

  bool supported() const { return regime != Regime::Unsupported; }
  /// Throws Unsupported naming the first failed hypothesis ("p>q" or "m+q>0").
  void require_supported() const;
};

enum class SpeedClass { NoWave, MonotoneWave, OscillatoryWave };

Regime regime_of(double m, double p, double q);

std::pair<CanonicalModel, ScalingMap> nondimensionalize(const GeneralModel& g);

/// |c*| = 2 sqrt(p - q)
double critical_speed(const CanonicalModel& cm);

/// Class predicted from the sign and magnitude of c alone.
SpeedClass classify_speed(const CanonicalModel& cm, double c);

std::string to_string(Regime r);
std::string to_string(SpeedClass s);

void to_json(nlohmann::json& j, const GeneralModel& g);
void from_json(const nlohmann::json& j, GeneralModel& g);
void to_json(nlohmann::json& j, const ScalingMap& s);
void to_json(nlohmann::json& j, const CanonicalModel& cm);

}  // namespace kppwaves

#include "kppwaves/model.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "kppwaves/error.hpp"

namespace kppwaves {

Regime regime_of(double m, double p, double q) {
  if (!(p > q) || !(m + q > 0.0)) return Regime::Unsupported;
  return (m + q > 2.0) ? Regime::CaseI : Regime::CaseII;
}

CanonicalModel CanonicalModel::make(double m, double p, double q) {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw Error(ErrorCode::InvalidParameter, "m must be positive");
  }
  if (!std::isfinite(p) || !std::isfinite(q)) {
    throw Error(ErrorCode::InvalidParameter, "p and q must be finite");
  }
  return CanonicalModel{m, p, q, regime_of(m, p, q)};
}

void CanonicalModel::require_supported() const {
  if (!(p > q)) {
    throw Error(ErrorCode::Unsupported, "hypothesis p>q failed (p=" + std::to_string(p) +
                                            ", q=" + std::to_string(q) + ")");
  }
  if (!(m + q > 0.0)) {
    throw Error(ErrorCode::Unsupported, "hypothesis m+q>0 failed (m+q=" + std::to_string(m + q) + ")");
  }
}

std::pair<CanonicalModel, ScalingMap> nondimensionalize(const GeneralModel& g) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidParameter, std::string(name) + " must be positive");
    }
  };
  positive(g.kappa, "kappa");
  positive(g.alpha, "alpha");
  positive(g.beta, "beta");
  positive(g.m, "m");
  if (g.p == g.q) {
    throw Error(ErrorCode::DegenerateScale, "p == q leaves the amplitude scale undefined");
  }

  ScalingMap s;
  s.l = std::pow(g.beta / g.alpha, 1.0 / (g.p - g.q));
  s.a = std::sqrt(g.kappa * std::pow(s.l, g.m - g.p) / g.alpha);
  s.b = std::pow(s.l, 1.0 - g.p) / g.alpha;
  return {CanonicalModel::make(g.m, g.p, g.q), s};
}

double critical_speed(const CanonicalModel& cm) {
  cm.require_supported();
  return 2.0 * std::sqrt(cm.p - cm.q);
}

SpeedClass classify_speed(const CanonicalModel& cm, double c) {
  const double cstar = critical_speed(cm);
  if (c >= 0.0) return SpeedClass::NoWave;
  return (-c >= cstar) ? SpeedClass::MonotoneWave : SpeedClass::OscillatoryWave;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::CaseI: return "CaseI";
    case Regime::CaseII: return "CaseII";
    case Regime::Unsupported: return "Unsupported";
  }
  return "Unsupported";
}

std::string to_string(SpeedClass s) {
  switch (s) {
    case SpeedClass::NoWave: return "NoWave";
    case SpeedClass::MonotoneWave: return "MonotoneWave";
    case SpeedClass::OscillatoryWave: return "OscillatoryWave";
  }
  return "NoWave";
}

void to_json(nlohmann::json& j, const GeneralModel& g) {
  j = nlohmann::json{{"kappa", g.kappa}, {"alpha", g.alpha}, {"beta", g.beta},
                     {"m", g.m},         {"p", g.p},         {"q", g.q}};
}

void from_json(const nlohmann::json& j, GeneralModel& g) {
  g.kappa = j.value("kappa", 1.0);
  g.alpha = j.value("alpha", 1.0);
  g.beta = j.value("beta", 1.0);
  g.m = j.at("m").get<double>();
  g.p = j.at("p").get<double>();
  g.q = j.at("q").get<double>();
}

void to_json(nlohmann::json& j, const ScalingMap& s) {
  j = nlohmann::json{{"a", s.a}, {"b", s.b}, {"l", s.l}};
}

void to_json(nlohmann::json& j, const CanonicalModel& cm) {
  j = nlohmann::json{{"m", cm.m}, {"p", cm.p}, {"q", cm.q}, {"regime", to_string(cm.regime)}};
}

}  // namespace kppwaves

#include "nrgate/model.hpp"

#include <cmath>
#include <sstream>

namespace nrgate {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string_view to_string(Direction dir) {
  return dir == Direction::LR ? "lr" : "rl";
}

Direction direction_from_string(std::string_view s) {
  if (s == "lr" || s == "LR") return Direction::LR;
  if (s == "rl" || s == "RL") return Direction::RL;
  throw DomainError("unknown direction '" + std::string(s) + "' (expected lr or rl)");
}

std::pair<double, double> gate_coefficients(const WaveguideConfig& cfg, Direction dir) {
  if (dir == Direction::LR) return {cfg.alpha1, cfg.alpha2};
  return {cfg.alpha2, cfg.alpha1};
}

double omega_hat(double theta, double d) {
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("theta must lie in [0, pi]");
  if (!(d > 0.0)) throw DomainError("d must be positive");
  const double s = std::sin(0.5 * theta);
  return std::sqrt(1.0 + 4.0 * d * s * s);
}

double WaveguideConfig::omega() const { return omega_hat(theta, d); }

Passband passband(double d) {
  if (!(d > 0.0)) throw DomainError("d must be positive");
  return {1.0, std::sqrt(1.0 + 4.0 * d)};
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i];
  }
  return os.str();
}

ValidationReport validate(const WaveguideConfig& cfg) {
  ValidationReport r;
  auto fail = [&](std::string msg) { r.violations.push_back(std::move(msg)); };

  if (cfg.n_per_side < cfg.p + 2)
    fail("n_per_side must be at least p + 2");
  if (cfg.p < 1)
    fail("p must address an interior upstream oscillator (p >= 1)");
  if (!(cfg.d > 0.0) || !std::isfinite(cfg.d))
    fail("d must be positive: degenerate coupling");
  if (!(cfg.zeta >= 0.0) || !std::isfinite(cfg.zeta))
    fail("zeta must be non-negative");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
    fail("dt must be positive");
  if (!(cfg.t_total > 0.0) || !std::isfinite(cfg.t_total))
    fail("t_total must be positive");
  if (!std::isfinite(cfg.alpha1) || !std::isfinite(cfg.alpha2) || !std::isfinite(cfg.sigma) ||
      !std::isfinite(cfg.a_p))
    fail("alpha1, alpha2, sigma and a_p must be finite");

  if (!std::isfinite(cfg.theta) || cfg.theta < 0.0 || cfg.theta > kPi) {
    fail("theta outside [0, pi]");
  } else if (cfg.theta == 0.0 || cfg.theta == kPi) {
    fail("theta at band edge: zero group velocity");
  } else if (cfg.d > 0.0) {
    const double w = omega_hat(cfg.theta, cfg.d);
    const Passband pb = passband(cfg.d);
    if (!(w > pb.low && w < pb.high))
      fail("omega_hat not strictly inside the passband");
  }
  return r;
}

void require_valid(const WaveguideConfig& cfg) {
  const ValidationReport r = validate(cfg);
  if (!r.ok()) throw DomainError("invalid waveguide config: " + r.to_string());
}

namespace presets {

WaveguideConfig system1() {
  WaveguideConfig c;
  c.d = 0.5;
  c.alpha1 = 0.15;
  c.alpha2 = 0.3;
  c.zeta = 0.013;
  c.theta = kPi / 6.0;
  c.sigma = -1.5;
  c.a_p = 1.0;
  return c;
}

WaveguideConfig system2() {
  WaveguideConfig c;
  c.d = 0.35;
  c.alpha1 = 1.81;
  c.alpha2 = 3.45;
  c.zeta = 0.023;
  c.theta = 2.5 * kPi / 6.0;
  c.sigma = -1.4;
  c.a_p = 0.46;
  return c;
}

WaveguideConfig system3() {
  WaveguideConfig c;
  c.d = 0.4;
  c.alpha1 = 3.9;
  c.alpha2 = 3.1;
  c.zeta = 0.013;
  c.theta = 3.0 * kPi / 6.0;
  c.sigma = -1.4;
  c.a_p = 0.4;
  return c;
}

WaveguideConfig system4() {
  WaveguideConfig c;
  c.d = 0.275;
  c.alpha1 = 1.7033;
  c.alpha2 = 3.0437;
  c.zeta = 0.013;
  c.theta = 1.67 * kPi / 6.0;
  c.sigma = -1.4;
  c.a_p = 0.54;
  return c;
}

WaveguideConfig kernel_design() {
  WaveguideConfig c;
  c.d = 0.2;
  c.alpha1 = 5.0;
  c.alpha2 = 3.1;
  c.zeta = 0.013;
  c.theta = 3.2659 * kPi / 6.0;
  c.sigma = -1.4;
  c.a_p = 0.4;
  return c;
}

std::vector<std::string> names() {
  return {"system1", "system2", "system3", "system4", "kernel_design"};
}

WaveguideConfig by_name(std::string_view name) {
  if (name == "system1") return system1();
  if (name == "system2") return system2();
  if (name == "system3") return system3();
  if (name == "system4") return system4();
  if (name == "kernel_design") return kernel_design();
  throw std::out_of_range("unknown preset '" + std::string(name) + "'");
}

}  // namespace presets

}  // namespace nrgate

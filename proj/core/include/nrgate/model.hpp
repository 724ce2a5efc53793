#pragma once

#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nrgate {

class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Normalized parameters of the two-gated waveguide plus integration controls.
///
/// The damping ratio stored here is the normalized one (zeta); the coefficient
/// that multiplies the velocities is always derived as xi = d * zeta.  The
/// excitation frequency is derived from the wavenumber through the dispersion
/// relation and is never stored.
struct WaveguideConfig {
  std::size_t n_per_side = 200;
  double d = 0.5;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double zeta = 0.013;
  double sigma = -1.4;
  double a_p = 1.0;
  double theta = std::numbers::pi / 6.0;
  std::size_t p = 4;
  double t_total = 1500.0;
  double dt = 0.02;

  double xi() const { return d * zeta; }
  double omega() const;

  bool operator==(const WaveguideConfig&) const = default;
};

/// Excitation side.  RL is realized by swapping the two cubic coefficients.
enum class Direction { LR, RL };

std::string_view to_string(Direction dir);
Direction direction_from_string(std::string_view s);

/// Gate coefficients seen by the lattice for the given direction.
std::pair<double, double> gate_coefficients(const WaveguideConfig& cfg, Direction dir);

/// sqrt(1 + 4 d sin^2(theta/2)); theta in [0, pi], d > 0.
double omega_hat(double theta, double d);

struct Passband {
  double low;
  double high;
};

Passband passband(double d);

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate(const WaveguideConfig& cfg);

/// Throws DomainError carrying the report text when cfg is not simulable.
void require_valid(const WaveguideConfig& cfg);

namespace presets {

WaveguideConfig system1();
WaveguideConfig system2();
WaveguideConfig system3();
WaveguideConfig system4();

/// Spot-check design picked from the kernel-size map (d = 0.2, A_p = 0.4).
WaveguideConfig kernel_design();

std::vector<std::string> names();

/// Looks up a preset by name ("system1" ... "system4", "kernel_design").
/// Throws std::out_of_range for unknown names.
WaveguideConfig by_name(std::string_view name);

}  // namespace presets

}  // namespace nrgate

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "nrgate/model.hpp"

namespace nrgate {

/// Positions, velocities and the two energy accumulators of the 2N+3 oscillator
/// lattice, stored in one contiguous buffer so the integrator can step it as a
/// flat vector.
///
/// Layout of the buffer (M = 2N + 3):
///   [0, M)        displacements  x_0..x_{N-1}, z_0, z_1, z_00, y_0..y_{N-1}
///   [M, 2M)       velocities in the same order
///   2M, 2M + 1    E_input, E_down
class LatticeState {
public:
  explicit LatticeState(std::size_t n_per_side);

  std::size_t n_per_side() const { return n_; }
  std::size_t oscillators() const { return 2 * n_ + 3; }

  std::span<double> x() { return {data_.data(), n_}; }
  std::span<double> z() { return {data_.data() + n_, 3}; }
  std::span<double> y() { return {data_.data() + n_ + 3, n_}; }
  std::span<double> vx() { return {data_.data() + m(), n_}; }
  std::span<double> vz() { return {data_.data() + m() + n_, 3}; }
  std::span<double> vy() { return {data_.data() + m() + n_ + 3, n_}; }

  std::span<const double> x() const { return {data_.data(), n_}; }
  std::span<const double> z() const { return {data_.data() + n_, 3}; }
  std::span<const double> y() const { return {data_.data() + n_ + 3, n_}; }
  std::span<const double> vx() const { return {data_.data() + m(), n_}; }
  std::span<const double> vz() const { return {data_.data() + m() + n_, 3}; }
  std::span<const double> vy() const { return {data_.data() + m() + n_ + 3, n_}; }

  double& e_input() { return data_[2 * m()]; }
  double& e_down() { return data_[2 * m() + 1]; }
  double e_input() const { return data_[2 * m()]; }
  double e_down() const { return data_[2 * m() + 1]; }

  std::span<double> raw() { return data_; }
  std::span<const double> raw() const { return data_; }

  double tau = 0.0;

  bool operator==(const LatticeState&) const = default;

private:
  std::size_t m() const { return 2 * n_ + 3; }

  std::size_t n_;
  std::vector<double> data_;
};

/// Oscillators recorded in every SimOutcome.
enum class Probe : std::size_t { X0, Z0, Z1, Z00, Y0, Y1, X1, XP };
inline constexpr std::size_t kProbeCount = 8;
std::string_view probe_name(Probe p);

struct SimOptions {
  std::size_t output_stride = 5;
  double blowup_bound = 1e6;
};

struct SimOutcome {
  std::vector<double> tau;
  std::array<std::vector<double>, kProbeCount> probes;
  std::vector<double> e_input_series;
  std::vector<double> e_down_series;

  double final_e_input = 0.0;
  double final_e_down = 0.0;

  bool diverged = false;
  double divergence_tau = 0.0;

  /// Full lattice state at the last accepted step (used for continuation).
  LatticeState final_state{1};

  const std::vector<double>& probe(Probe p) const { return probes[static_cast<std::size_t>(p)]; }
  double eta() const { return final_e_input > 0.0 ? final_e_down / final_e_input : 0.0; }
};

class StepTooLarge : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Largest linear natural frequency of the lattice (upper bound used by the
/// step-size self-check).
double max_linear_frequency(const WaveguideConfig& cfg);

/// dt * max_linear_frequency must stay at or below this value.
inline constexpr double kMaxPhasePerStep = 0.5;

/// Time derivative of the full lattice state including the two accumulators.
/// Forcing always enters at x_p; RL uses the swapped gate coefficients.
LatticeState rhs(const LatticeState& state, const WaveguideConfig& cfg, Direction dir, double tau);

/// Integrates from rest over [0, t_total] with fixed-step RK4.
SimOutcome integrate(const WaveguideConfig& cfg, Direction dir, const SimOptions& opts = {});

/// Integrates over [initial.tau, initial.tau + t_total] starting from the given
/// displacements and velocities.  The energy accumulators restart at zero and
/// the forcing phase continues from initial.tau.
SimOutcome integrate_from(const WaveguideConfig& cfg, Direction dir, const LatticeState& initial,
                          const SimOptions& opts = {});

struct RegionEnergies {
  double left = 0.0;
  double center = 0.0;
  double right = 0.0;

  double total() const { return left + center + right; }
};

/// Instantaneous mechanical energy of the upstream chain, the gate region and
/// the downstream chain.  The quartic gate potentials and the z couplings
/// belong to the center; the x_0-x_1 and y_0-y_1 springs belong to their
/// chains.
RegionEnergies region_energies(const LatticeState& state, const WaveguideConfig& cfg,
                               Direction dir = Direction::LR);

}  // namespace nrgate

#pragma once

#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "nrgate/simulator.hpp"

namespace nrgate {

/// Downstream energies at or below this value are treated as zero.
inline constexpr double kEnergyFloor = 1e-30;

struct MeasurePair {
  double eta_lr = 0.0;
  double eta_rl = 0.0;
  /// log10 of the LR/RL downstream energy ratio; +/-inf or NaN when degenerate.
  double delta = 0.0;
  double t_horizon = 0.0;
  bool degenerate = false;
};

/// Transmissibility per direction and the non-reciprocity measure.
/// Throws std::invalid_argument if either outcome diverged.
MeasurePair measures(const SimOutcome& lr, const SimOutcome& rl, double t_horizon);

enum class Branch { HNRB, INRB, NRB, LowTransmission };

std::string_view to_string(Branch b);
Branch branch_from_string(std::string_view s);

/// Total classification of a measure pair:
///   eta_lr <= 0.2      -> LowTransmission
///   delta >= 5         -> HNRB
///   1 <= delta < 5     -> INRB
///   otherwise          -> NRB
Branch classify(const MeasurePair& m);

struct DesirabilityThresholds {
  double eta_min = 0.2;
  double delta_min = 5.0;
};

/// Relaxed thresholds used when building kernel-size maps.
inline constexpr DesirabilityThresholds kKernelThresholds{0.2, 4.0};

bool is_desirable(double eta_lr, double delta, const DesirabilityThresholds& t = {});
inline bool is_desirable(const MeasurePair& m, const DesirabilityThresholds& t = {}) {
  return is_desirable(m.eta_lr, m.delta, t);
}

class WindowTooShort : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Spectrum {
  std::vector<double> frequency;  // angular, same units as omega_hat
  std::vector<double> amplitude;  // a pure tone of amplitude A peaks near A
  double peak_frequency = 0.0;
  bool sidebands = false;

  std::size_t samples = 0;    // samples inside the window
  double window_sum = 0.0;    // sum of the Hann weights
};

struct SpectrumOptions {
  double window_begin = 1000.0;
  double window_end = 1500.0;
  double min_periods = 50.0;
  double sideband_span = 0.2;      // relative half-width around the drive frequency
  double sideband_fraction = 0.1;  // relative to the main peak
};

/// Hann-tapered, mean-removed amplitude spectrum of a uniformly sampled series
/// restricted to [window_begin, window_end].
Spectrum spectrum(std::span<const double> tau, std::span<const double> series,
                  double drive_frequency, const SpectrumOptions& opts = {});

}  // namespace nrgate

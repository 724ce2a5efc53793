#include "nrgate/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace nrgate {

MeasurePair measures(const SimOutcome& lr, const SimOutcome& rl, double t_horizon) {
  if (lr.diverged || rl.diverged)
    throw std::invalid_argument("measures require completed (non-divergent) runs");

  MeasurePair m;
  m.t_horizon = t_horizon;
  m.eta_lr = lr.eta();
  m.eta_rl = rl.eta();

  const double e_lr = lr.final_e_down;
  const double e_rl = rl.final_e_down;
  const bool lr_zero = !(e_lr > kEnergyFloor);
  const bool rl_zero = !(e_rl > kEnergyFloor);
  if (lr_zero || rl_zero) {
    m.degenerate = true;
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (lr_zero && rl_zero)
      m.delta = std::numeric_limits<double>::quiet_NaN();
    else
      m.delta = rl_zero ? inf : -inf;
    return m;
  }
  // Difference of logs keeps the measure exactly antisymmetric.
  m.delta = std::log10(e_lr) - std::log10(e_rl);
  return m;
}

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::HNRB: return "HNRB";
    case Branch::INRB: return "INRB";
    case Branch::NRB: return "NRB";
    case Branch::LowTransmission: return "LOW_TRANSMISSION";
  }
  return "?";
}

Branch branch_from_string(std::string_view s) {
  if (s == "HNRB") return Branch::HNRB;
  if (s == "INRB") return Branch::INRB;
  if (s == "NRB") return Branch::NRB;
  if (s == "LOW_TRANSMISSION") return Branch::LowTransmission;
  throw std::invalid_argument("unknown branch label '" + std::string(s) + "'");
}

Branch classify(const MeasurePair& m) {
  if (!(m.eta_lr > 0.2)) return Branch::LowTransmission;
  if (m.delta >= 5.0) return Branch::HNRB;
  if (m.delta >= 1.0) return Branch::INRB;
  return Branch::NRB;
}

bool is_desirable(double eta_lr, double delta, const DesirabilityThresholds& t) {
  return eta_lr > t.eta_min && delta > t.delta_min;
}

namespace {

struct FftwPlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

// The FFTW planner is not re-entrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Spectrum spectrum(std::span<const double> tau, std::span<const double> series,
                  double drive_frequency, const SpectrumOptions& opts) {
  if (tau.size() != series.size()) throw std::invalid_argument("tau and series lengths differ");
  if (!(drive_frequency > 0.0)) throw std::invalid_argument("drive frequency must be positive");
  if (!(opts.window_end > opts.window_begin))
    throw WindowTooShort("empty spectrum window");

  const double period = 2.0 * std::numbers::pi / drive_frequency;
  if (opts.window_end - opts.window_begin < opts.min_periods * period)
    throw WindowTooShort("spectrum window shorter than " + std::to_string(opts.min_periods) +
                         " forcing periods");
  if (tau.empty() || opts.window_begin < tau.front() - 1e-9 || opts.window_end > tau.back() + 1e-9)
    throw WindowTooShort("spectrum window outside the simulated span");

  const auto first = std::lower_bound(tau.begin(), tau.end(), opts.window_begin - 1e-9);
  const auto last = std::upper_bound(tau.begin(), tau.end(), opts.window_end + 1e-9);
  const auto i0 = static_cast<std::size_t>(first - tau.begin());
  const auto n = static_cast<std::size_t>(last - first);
  if (n < 8) throw WindowTooShort("too few samples inside the spectrum window");
  const double step = (tau[i0 + n - 1] - tau[i0]) / static_cast<double>(n - 1);

  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += series[i0 + i];
  mean /= static_cast<double>(n);

  const std::size_t bins = n / 2 + 1;
  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));

  Spectrum s;
  s.samples = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double w =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
    s.window_sum += w;
    in.get()[i] = w * (series[i0 + i] - mean);
  }

  {
    std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan;
    {
      std::lock_guard lock(planner_mutex());
      plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    }
    fftw_execute(plan.get());
    std::lock_guard lock(planner_mutex());
    plan.reset();
  }

  s.frequency.resize(bins);
  s.amplitude.resize(bins);
  const double df = 2.0 * std::numbers::pi / (static_cast<double>(n) * step);
  for (std::size_t k = 0; k < bins; ++k) {
    const double mag = std::hypot(out.get()[k][0], out.get()[k][1]);
    const bool edge = k == 0 || (n % 2 == 0 && k == bins - 1);
    s.frequency[k] = df * static_cast<double>(k);
    s.amplitude[k] = (edge ? 1.0 : 2.0) * mag / s.window_sum;
  }

  const auto peak = static_cast<std::size_t>(
      std::max_element(s.amplitude.begin(), s.amplitude.end()) - s.amplitude.begin());
  s.peak_frequency = s.frequency[peak];
  const double peak_amp = s.amplitude[peak];

  const double lo = (1.0 - opts.sideband_span) * drive_frequency;
  const double hi = (1.0 + opts.sideband_span) * drive_frequency;
  for (std::size_t k = 1; k + 1 < bins; ++k) {
    if (k == peak || s.frequency[k] < lo || s.frequency[k] > hi) continue;
    const double a = s.amplitude[k];
    if (a > s.amplitude[k - 1] && a >= s.amplitude[k + 1] && a > opts.sideband_fraction * peak_amp) {
      s.sidebands = true;
      break;
    }
  }
  return s;
}

}  // namespace nrgate

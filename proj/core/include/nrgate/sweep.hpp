#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "nrgate/analysis.hpp"
#include "nrgate/model.hpp"
#include "nrgate/simulator.hpp"

namespace nrgate {

/// Per-record random stream.  Record i of a campaign with seed s draws from an
/// mt19937_64 seeded through std::seed_seq{lo(s), hi(s), lo(i), hi(i)}; doubles
/// are taken from the top 53 bits.  Both the engine and seed_seq are fully
/// specified by the standard, so datasets are identical across platforms and
/// independent of execution order.
class RecordStream {
public:
  RecordStream(std::uint64_t seed, std::uint64_t index);

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi].
  double uniform(double lo, double hi);
  /// Uniform integer on [0, bound) without modulo bias.
  std::uint64_t below(std::uint64_t bound);

private:
  std::mt19937_64 engine_;
};

struct Interval {
  double lo;
  double hi;

  bool contains(double v) const { return v >= lo && v <= hi; }
  bool operator==(const Interval&) const = default;
};

struct SweepSpec {
  Interval alpha1{0.0, 6.0};
  Interval alpha2{0.0, 6.0};
  Interval d{0.2, 0.6};
  Interval a_p{0.2, 1.0};
  Interval theta{0.05 * std::numbers::pi, 0.95 * std::numbers::pi};
  std::size_t n_samples = 60000;
  std::uint64_t seed = 1;

  double sigma = -1.4;
  double zeta = 0.013;
  std::size_t p = 4;
  std::size_t n_per_side = 200;
  double t_total = 1500.0;
  double dt = 0.02;

  /// Reduced CI profile: N = 60, T = 800.  Preset golden values are only
  /// claimed at full scale.
  static SweepSpec reduced();

  /// Lattice configuration for one drawn sample point.
  WaveguideConfig config(double a_p, double alpha1, double alpha2, double theta, double d) const;

  bool operator==(const SweepSpec&) const = default;
};

/// Throws DomainError when the spec cannot produce simulable configs.
void validate(const SweepSpec& spec);

enum class RecordFlag { Ok, Degenerate, Diverged, Failed };
std::string_view to_string(RecordFlag f);
RecordFlag record_flag_from_string(std::string_view s);

struct SweepRecord {
  double a_p = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double omega_hat = 0.0;
  double d = 0.0;
  double theta = 0.0;
  double eta_lr = 0.0;
  double eta_rl = 0.0;
  double delta = 0.0;
  Branch branch = Branch::LowTransmission;
  RecordFlag flag = RecordFlag::Ok;
  double wall_seconds = 0.0;  // not persisted

  bool usable() const { return flag == RecordFlag::Ok; }
};

/// Draws and simulates record `index` of the campaign.
SweepRecord run_record(const SweepSpec& spec, std::size_t index);

/// Draws only (no simulation); the sample point of record `index`.
SweepRecord draw_record(const SweepSpec& spec, std::size_t index);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Simulates every record of the campaign on `workers` threads.  Records are
/// returned in draw order.
std::vector<SweepRecord> generate_dataset(const SweepSpec& spec, std::size_t workers = 1,
                                          const ProgressFn& progress = {});

inline constexpr std::string_view kDatasetHeader =
    "a_p,alpha1,alpha2,omega_hat,d,theta,eta_lr,eta_rl,delta,branch,flag";

void write_dataset_csv(std::ostream& os, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_dataset_csv(std::istream& is);

/// 64-bit FNV-1a over the persisted dataset bytes.
std::uint64_t dataset_fingerprint(const std::vector<SweepRecord>& records);

// ---------------------------------------------------------------------------
// Damping sweeps

enum class SweepMode { Cold, ContinueUp, ContinueDown };
std::string_view to_string(SweepMode m);
SweepMode sweep_mode_from_string(std::string_view s);

/// eta values below this are "no transmission" when comparing runs.
inline constexpr double kEtaFloor = 1e-3;

/// |a - b| / max(|a|, |b|, kEtaFloor).
double relative_gap(double a, double b);

struct DirectionPoint {
  double eta = 0.0;
  double e_down = 0.0;
  bool diverged = false;
};

struct DampingPoint {
  double zeta = 0.0;
  DirectionPoint lr;
  DirectionPoint rl;
  Branch branch = Branch::LowTransmission;
};

struct CriticalBracket {
  Direction direction;
  double zeta_lo;
  double zeta_hi;
};

struct DampingSweepResult {
  SweepMode mode = SweepMode::Cold;
  std::vector<DampingPoint> points;  // ascending zeta regardless of mode
  std::vector<CriticalBracket> critical;
};

inline constexpr double kCriticalJump = 0.5;
inline constexpr double kMaxSweepZeta = 0.05;

/// Uniform grid lo, lo + step, ..., hi (inclusive, within rounding).
std::vector<double> zeta_grid(double lo, double hi, double step);

/// Runs both directions at every zeta of a strictly increasing grid inside
/// [0, 0.05].  Cold mode starts every point from rest; continuation modes walk
/// the grid upward or downward and start each point from the previous point's
/// final state.  A divergent point is flagged and the walk restarts from rest.
DampingSweepResult damping_sweep(const WaveguideConfig& base, const std::vector<double>& grid,
                                 SweepMode mode);

/// Adjacent grid intervals where eta changes by more than kCriticalJump.
std::vector<CriticalBracket> critical_brackets(const std::vector<DampingPoint>& points);

/// Grid values where two sweeps over the same grid disagree by more than
/// kCriticalJump in the given direction.
std::vector<double> disagreements(const DampingSweepResult& a, const DampingSweepResult& b,
                                  Direction dir);

void write_damping_csv(std::ostream& os, const DampingSweepResult& result);

}  // namespace nrgate

#include "nrgate/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>

#include "nrgate/parallel.hpp"

namespace nrgate {

RecordStream::RecordStream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  engine_.seed(seq);
}

double RecordStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RecordStream::uniform(double lo, double hi) {
  if (lo == hi) return lo;
  return std::min(hi, lo + (hi - lo) * uniform());
}

std::uint64_t RecordStream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r < limit) return r % bound;
  }
}

SweepSpec SweepSpec::reduced() {
  SweepSpec s;
  s.n_per_side = 60;
  s.t_total = 800.0;
  return s;
}

WaveguideConfig SweepSpec::config(double a_p_v, double alpha1_v, double alpha2_v, double theta_v,
                                  double d_v) const {
  WaveguideConfig c;
  c.n_per_side = n_per_side;
  c.d = d_v;
  c.alpha1 = alpha1_v;
  c.alpha2 = alpha2_v;
  c.zeta = zeta;
  c.sigma = sigma;
  c.a_p = a_p_v;
  c.theta = theta_v;
  c.p = p;
  c.t_total = t_total;
  c.dt = dt;
  return c;
}

void validate(const SweepSpec& spec) {
  auto check = [](const Interval& iv, const char* name) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi)
      throw DomainError(std::string("sweep range for ") + name + " is not a closed interval");
  };
  check(spec.alpha1, "alpha1");
  check(spec.alpha2, "alpha2");
  check(spec.d, "d");
  check(spec.a_p, "a_p");
  check(spec.theta, "theta");
  if (spec.n_samples == 0) throw DomainError("n_samples must be positive");
  if (!(spec.d.lo > 0.0)) throw DomainError("sweep range for d must be positive");
  if (!(spec.theta.lo > 0.0 && spec.theta.hi < std::numbers::pi))
    throw DomainError("sweep range for theta must lie strictly inside (0, pi)");
  // Corners of the box cover every invariant that depends on the ranges.
  for (double dv : {spec.d.lo, spec.d.hi})
    for (double tv : {spec.theta.lo, spec.theta.hi}) {
      const WaveguideConfig c = spec.config(spec.a_p.lo, spec.alpha1.lo, spec.alpha2.lo, tv, dv);
      const ValidationReport r = nrgate::validate(c);
      if (!r.ok()) throw DomainError("sweep spec yields invalid configs: " + r.to_string());
    }
}

std::string_view to_string(RecordFlag f) {
  switch (f) {
    case RecordFlag::Ok: return "ok";
    case RecordFlag::Degenerate: return "degenerate";
    case RecordFlag::Diverged: return "diverged";
    case RecordFlag::Failed: return "failed";
  }
  return "?";
}

RecordFlag record_flag_from_string(std::string_view s) {
  if (s == "ok") return RecordFlag::Ok;
  if (s == "degenerate") return RecordFlag::Degenerate;
  if (s == "diverged") return RecordFlag::Diverged;
  if (s == "failed") return RecordFlag::Failed;
  throw std::invalid_argument("unknown record flag '" + std::string(s) + "'");
}

SweepRecord draw_record(const SweepSpec& spec, std::size_t index) {
  RecordStream rng(spec.seed, index);
  SweepRecord r;
  r.a_p = rng.uniform(spec.a_p.lo, spec.a_p.hi);
  r.alpha1 = rng.uniform(spec.alpha1.lo, spec.alpha1.hi);
  r.alpha2 = rng.uniform(spec.alpha2.lo, spec.alpha2.hi);
  r.theta = rng.uniform(spec.theta.lo, spec.theta.hi);
  r.d = rng.uniform(spec.d.lo, spec.d.hi);
  r.omega_hat = omega_hat(r.theta, r.d);
  return r;
}

SweepRecord run_record(const SweepSpec& spec, std::size_t index) {
  const auto start = std::chrono::steady_clock::now();
  SweepRecord r = draw_record(spec, index);
  const WaveguideConfig cfg = spec.config(r.a_p, r.alpha1, r.alpha2, r.theta, r.d);

  SimOptions opts;
  opts.output_stride = std::numeric_limits<std::size_t>::max() / 2;
  try {
    const SimOutcome lr = integrate(cfg, Direction::LR, opts);
    const SimOutcome rl = integrate(cfg, Direction::RL, opts);
    if (lr.diverged || rl.diverged) {
      r.flag = RecordFlag::Diverged;
      r.eta_lr = r.eta_rl = r.delta = std::numeric_limits<double>::quiet_NaN();
    } else {
      const MeasurePair m = measures(lr, rl, cfg.t_total);
      r.eta_lr = m.eta_lr;
      r.eta_rl = m.eta_rl;
      r.delta = m.delta;
      r.branch = classify(m);
      r.flag = m.degenerate ? RecordFlag::Degenerate : RecordFlag::Ok;
    }
  } catch (const std::exception&) {
    r.flag = RecordFlag::Failed;
    r.eta_lr = r.eta_rl = r.delta = std::numeric_limits<double>::quiet_NaN();
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<SweepRecord> generate_dataset(const SweepSpec& spec, std::size_t workers,
                                          const ProgressFn& progress) {
  validate(spec);
  std::vector<SweepRecord> out(spec.n_samples);
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  parallel_for(spec.n_samples, workers, [&](std::size_t i) {
    out[i] = run_record(spec, i);
    const std::size_t k = done.fetch_add(1) + 1;
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(k, spec.n_samples);
    }
  });
  return out;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

}  // namespace

void write_dataset_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << kDatasetHeader << '\n';
  for (const SweepRecord& r : records) {
    os << fmt_double(r.a_p) << ',' << fmt_double(r.alpha1) << ',' << fmt_double(r.alpha2) << ','
       << fmt_double(r.omega_hat) << ',' << fmt_double(r.d) << ',' << fmt_double(r.theta) << ','
       << fmt_double(r.eta_lr) << ',' << fmt_double(r.eta_rl) << ',' << fmt_double(r.delta) << ','
       << to_string(r.branch) << ',' << to_string(r.flag) << '\n';
  }
}

std::vector<SweepRecord> read_dataset_csv(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  bool found = false;
  while (!found && std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    found = !line.empty() && line.front() != '#';
  }
  if (!found) throw std::invalid_argument("empty dataset file");
  if (line != kDatasetHeader) throw std::invalid_argument("dataset header mismatch: '" + line + "'");

  std::vector<SweepRecord> out;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto f = split_csv(line);
    if (f.size() != 11)
      throw std::invalid_argument("dataset line " + std::to_string(lineno) + ": expected 11 fields");
    try {
      SweepRecord r;
      r.a_p = parse_double(f[0]);
      r.alpha1 = parse_double(f[1]);
      r.alpha2 = parse_double(f[2]);
      r.omega_hat = parse_double(f[3]);
      r.d = parse_double(f[4]);
      r.theta = parse_double(f[5]);
      r.eta_lr = parse_double(f[6]);
      r.eta_rl = parse_double(f[7]);
      r.delta = parse_double(f[8]);
      r.branch = branch_from_string(f[9]);
      r.flag = record_flag_from_string(f[10]);
      out.push_back(r);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("dataset line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::uint64_t dataset_fingerprint(const std::vector<SweepRecord>& records) {
  std::ostringstream os;
  write_dataset_csv(os, records);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------

std::string_view to_string(SweepMode m) {
  switch (m) {
    case SweepMode::Cold: return "cold";
    case SweepMode::ContinueUp: return "continue_up";
    case SweepMode::ContinueDown: return "continue_down";
  }
  return "?";
}

SweepMode sweep_mode_from_string(std::string_view s) {
  if (s == "cold") return SweepMode::Cold;
  if (s == "continue_up" || s == "up") return SweepMode::ContinueUp;
  if (s == "continue_down" || s == "down") return SweepMode::ContinueDown;
  throw std::invalid_argument("unknown sweep mode '" + std::string(s) +
                              "' (expected cold, continue_up or continue_down)");
}

double relative_gap(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), kEtaFloor});
  return std::abs(a - b) / scale;
}

std::vector<double> zeta_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw DomainError("zeta grid needs step > 0 and hi >= lo");
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  std::vector<double> g(n + 1);
  for (std::size_t k = 0; k <= n; ++k) g[k] = lo + static_cast<double>(k) * step;
  return g;
}

DampingSweepResult damping_sweep(const WaveguideConfig& base, const std::vector<double>& grid,
                                 SweepMode mode) {
  if (grid.empty()) throw DomainError("damping sweep grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= kMaxSweepZeta + 1e-12))
      throw DomainError("damping sweep grid must lie within [0, 0.05]");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw DomainError("damping sweep grid must be strictly increasing");
  }
  require_valid(base);

  DampingSweepResult res;
  res.mode = mode;
  res.points.resize(grid.size());
  std::vector<SimOutcome> lr_runs(grid.size()), rl_runs(grid.size());

  SimOptions opts;
  opts.output_stride = std::numeric_limits<std::size_t>::max() / 2;

  for (Direction dir : {Direction::LR, Direction::RL}) {
    std::optional<LatticeState> carry;
    for (std::size_t step = 0; step < grid.size(); ++step) {
      const std::size_t i = mode == SweepMode::ContinueDown ? grid.size() - 1 - step : step;
      WaveguideConfig cfg = base;
      cfg.zeta = grid[i];
      SimOutcome run = (mode != SweepMode::Cold && carry) ? integrate_from(cfg, dir, *carry, opts)
                                                          : integrate(cfg, dir, opts);
      if (run.diverged)
        carry.reset();
      else
        carry = run.final_state;

      DirectionPoint& pt = dir == Direction::LR ? res.points[i].lr : res.points[i].rl;
      pt.eta = run.eta();
      pt.e_down = run.final_e_down;
      pt.diverged = run.diverged;
      res.points[i].zeta = grid[i];
      (dir == Direction::LR ? lr_runs : rl_runs)[i] = std::move(run);
    }
  }

  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (lr_runs[i].diverged || rl_runs[i].diverged) continue;
    res.points[i].branch = classify(measures(lr_runs[i], rl_runs[i], base.t_total));
  }
  res.critical = critical_brackets(res.points);
  return res;
}

std::vector<CriticalBracket> critical_brackets(const std::vector<DampingPoint>& points) {
  std::vector<CriticalBracket> out;
  for (Direction dir : {Direction::LR, Direction::RL}) {
    for (std::size_t i = 1; i < points.size(); ++i) {
      const DirectionPoint& a = dir == Direction::LR ? points[i - 1].lr : points[i - 1].rl;
      const DirectionPoint& b = dir == Direction::LR ? points[i].lr : points[i].rl;
      if (a.diverged || b.diverged) continue;
      if (relative_gap(a.eta, b.eta) > kCriticalJump)
        out.push_back({dir, points[i - 1].zeta, points[i].zeta});
    }
  }
  return out;
}

std::vector<double> disagreements(const DampingSweepResult& a, const DampingSweepResult& b,
                                  Direction dir) {
  if (a.points.size() != b.points.size())
    throw std::invalid_argument("damping sweeps cover different grids");
  std::vector<double> out;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    if (a.points[i].zeta != b.points[i].zeta)
      throw std::invalid_argument("damping sweeps cover different grids");
    const DirectionPoint& pa = dir == Direction::LR ? a.points[i].lr : a.points[i].rl;
    const DirectionPoint& pb = dir == Direction::LR ? b.points[i].lr : b.points[i].rl;
    if (pa.diverged || pb.diverged) continue;
    if (relative_gap(pa.eta, pb.eta) > kCriticalJump) out.push_back(a.points[i].zeta);
  }
  return out;
}

void write_damping_csv(std::ostream& os, const DampingSweepResult& result) {
  os << "# mode=" << to_string(result.mode) << '\n';
  for (const CriticalBracket& c : result.critical)
    os << "# critical " << to_string(c.direction) << ' ' << fmt_double(c.zeta_lo) << ' '
       << fmt_double(c.zeta_hi) << '\n';
  os << "zeta,eta_lr,e_down_lr,diverged_lr,eta_rl,e_down_rl,diverged_rl,branch\n";
  for (const DampingPoint& p : result.points) {
    os << fmt_double(p.zeta) << ',' << fmt_double(p.lr.eta) << ',' << fmt_double(p.lr.e_down) << ','
       << (p.lr.diverged ? 1 : 0) << ',' << fmt_double(p.rl.eta) << ',' << fmt_double(p.rl.e_down)
       << ',' << (p.rl.diverged ? 1 : 0) << ',' << to_string(p.branch) << '\n';
  }
}

}  // namespace nrgate

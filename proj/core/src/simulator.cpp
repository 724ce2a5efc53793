#include "nrgate/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "nrgate/rk4.hpp"

namespace nrgate {

LatticeState::LatticeState(std::size_t n_per_side)
    : n_(n_per_side), data_(2 * (2 * n_per_side + 3) + 2, 0.0) {}

std::string_view probe_name(Probe p) {
  switch (p) {
    case Probe::X0: return "x0";
    case Probe::Z0: return "z0";
    case Probe::Z1: return "z1";
    case Probe::Z00: return "z00";
    case Probe::Y0: return "y0";
    case Probe::Y1: return "y1";
    case Probe::X1: return "x1";
    case Probe::XP: return "xp";
  }
  return "?";
}

double max_linear_frequency(const WaveguideConfig& cfg) {
  // Gershgorin bound on the linear stiffness matrix.
  const double chain = 1.0 + 4.0 * cfg.d;
  const double gate = std::abs(1.0 + cfg.d * cfg.sigma) + 2.0 * cfg.d;
  return std::sqrt(std::max(chain, gate));
}

namespace {

/// Right-hand side of the normalized equations of motion on the flat layout
/// documented in LatticeState.
struct LatticeKernel {
  std::size_t n;
  double d;
  double two_xi;
  double gate_ground;  // 1 + d*sigma
  double a1, a2;
  double drive;  // 2 d A_p
  double omega;
  std::size_t p;

  LatticeKernel(const WaveguideConfig& cfg, Direction dir)
      : n(cfg.n_per_side),
        d(cfg.d),
        two_xi(2.0 * cfg.xi()),
        gate_ground(1.0 + cfg.d * cfg.sigma),
        drive(2.0 * cfg.d * cfg.a_p),
        omega(cfg.omega()),
        p(cfg.p) {
    std::tie(a1, a2) = gate_coefficients(cfg, dir);
  }

  void operator()(std::span<const double> s, std::span<double> ds, double tau) const {
    const std::size_t m = 2 * n + 3;
    const double* u = s.data();
    const double* v = s.data() + m;
    double* du = ds.data();
    double* dv = ds.data() + m;

    std::copy(v, v + m, du);

    const double* x = u;
    const double* z = u + n;
    const double* y = u + n + 3;
    const double* vx = v;
    const double* vz = v + n;
    const double* vy = v + n + 3;
    double* ax = dv;
    double* az = dv + n;
    double* ay = dv + n + 3;

    const double force = drive * std::cos(omega * tau);

    // Upstream chain.
    {
      const double g = x[0] - z[0];
      ax[0] = -two_xi * vx[0] - gate_ground * x[0] - d * a1 * g * g * g - d * (x[0] - x[1]);
    }
    for (std::size_t i = 1; i + 1 < n; ++i)
      ax[i] = -two_xi * vx[i] - x[i] - d * (2.0 * x[i] - x[i - 1] - x[i + 1]);
    ax[n - 1] = -two_xi * vx[n - 1] - x[n - 1] - d * (x[n - 1] - x[n - 2]);
    ax[p] += force;

    // Gate region.
    {
      const double g1 = z[0] - x[0];
      const double g2 = z[2] - y[0];
      az[0] = -two_xi * vz[0] - gate_ground * z[0] - d * a1 * g1 * g1 * g1 - d * (z[0] - z[1]);
      az[1] = -two_xi * vz[1] - z[1] - d * (z[1] - z[0]) - d * (z[1] - z[2]);
      az[2] = -two_xi * vz[2] - gate_ground * z[2] - d * a2 * g2 * g2 * g2 - d * (z[2] - z[1]);
    }

    // Downstream chain.
    {
      const double g = y[0] - z[2];
      ay[0] = -two_xi * vy[0] - gate_ground * y[0] - d * a2 * g * g * g - d * (y[0] - y[1]);
    }
    for (std::size_t i = 1; i + 1 < n; ++i)
      ay[i] = -two_xi * vy[i] - y[i] - d * (2.0 * y[i] - y[i - 1] - y[i + 1]);
    ay[n - 1] = -two_xi * vy[n - 1] - y[n - 1] - d * (y[n - 1] - y[n - 2]);

    ds[2 * m] = force * vx[p];
    ds[2 * m + 1] = d * (y[0] - y[1]) * vy[0];
  }
};

void record(SimOutcome& out, const LatticeState& st, std::size_t p) {
  out.tau.push_back(st.tau);
  const auto x = st.x();
  const auto z = st.z();
  const auto y = st.y();
  const std::array<double, kProbeCount> values{x[0], z[0], z[1], z[2], y[0], y[1], x[1], x[p]};
  for (std::size_t k = 0; k < kProbeCount; ++k) out.probes[k].push_back(values[k]);
  out.e_input_series.push_back(st.e_input());
  out.e_down_series.push_back(st.e_down());
}

bool blown_up(std::span<const double> displacements, double bound) {
  for (double v : displacements)
    if (!(std::abs(v) <= bound)) return true;
  return false;
}

}  // namespace

LatticeState rhs(const LatticeState& state, const WaveguideConfig& cfg, Direction dir,
                 double tau) {
  if (state.n_per_side() != cfg.n_per_side)
    throw DomainError("state size does not match config n_per_side");
  require_valid(cfg);
  LatticeState out(cfg.n_per_side);
  LatticeKernel{cfg, dir}(state.raw(), out.raw(), tau);
  out.tau = tau;
  return out;
}

SimOutcome integrate(const WaveguideConfig& cfg, Direction dir, const SimOptions& opts) {
  return integrate_from(cfg, dir, LatticeState(cfg.n_per_side), opts);
}

SimOutcome integrate_from(const WaveguideConfig& cfg, Direction dir, const LatticeState& initial,
                          const SimOptions& opts) {
  require_valid(cfg);
  if (initial.n_per_side() != cfg.n_per_side)
    throw DomainError("initial state size does not match config n_per_side");
  if (cfg.dt * max_linear_frequency(cfg) > kMaxPhasePerStep)
    throw StepTooLarge("dt = " + std::to_string(cfg.dt) +
                       " resolves the fastest linear mode with fewer than " +
                       std::to_string(2.0 * std::numbers::pi / kMaxPhasePerStep) +
                       " steps per period");
  if (opts.output_stride == 0) throw DomainError("output_stride must be positive");

  const LatticeKernel kernel(cfg, dir);
  LatticeState st = initial;
  st.e_input() = 0.0;
  st.e_down() = 0.0;

  const double tau0 = st.tau;
  const auto steps = static_cast<std::size_t>(std::llround(cfg.t_total / cfg.dt));
  const std::size_t samples = steps / opts.output_stride + 2;

  SimOutcome out;
  out.tau.reserve(samples);
  for (auto& s : out.probes) s.reserve(samples);
  out.e_input_series.reserve(samples);
  out.e_down_series.reserve(samples);
  record(out, st, cfg.p);

  RungeKutta4 stepper(st.raw().size());
  const std::size_t m = st.oscillators();
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = tau0 + static_cast<double>(k - 1) * cfg.dt;
    stepper.step(kernel, st.raw(), t, cfg.dt);
    st.tau = tau0 + static_cast<double>(k) * cfg.dt;
    if (blown_up(st.raw().first(m), opts.blowup_bound)) {
      out.diverged = true;
      out.divergence_tau = st.tau;
      break;
    }
    if (k % opts.output_stride == 0 || k == steps) record(out, st, cfg.p);
  }

  out.final_e_input = st.e_input();
  out.final_e_down = st.e_down();
  out.final_state = std::move(st);
  return out;
}

RegionEnergies region_energies(const LatticeState& state, const WaveguideConfig& cfg,
                               Direction dir) {
  const std::size_t n = state.n_per_side();
  const auto [a1, a2] = gate_coefficients(cfg, dir);
  const double d = cfg.d;
  const double gate_ground = 1.0 + d * cfg.sigma;

  auto chain = [&](std::span<const double> u, std::span<const double> v) {
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double k = i == 0 ? gate_ground : 1.0;
      e += 0.5 * v[i] * v[i] + 0.5 * k * u[i] * u[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double du = u[i + 1] - u[i];
      e += 0.5 * d * du * du;
    }
    return e;
  };

  RegionEnergies r;
  r.left = chain(state.x(), state.vx());
  r.right = chain(state.y(), state.vy());

  const auto z = state.z();
  const auto vz = state.vz();
  const auto x = state.x();
  const auto y = state.y();
  const std::array<double, 3> ground{gate_ground, 1.0, gate_ground};
  for (std::size_t k = 0; k < 3; ++k) r.center += 0.5 * vz[k] * vz[k] + 0.5 * ground[k] * z[k] * z[k];
  const double g1 = x[0] - z[0];
  const double g2 = z[2] - y[0];
  r.center += 0.25 * d * a1 * g1 * g1 * g1 * g1 + 0.25 * d * a2 * g2 * g2 * g2 * g2;
  const double c1 = z[1] - z[0];
  const double c2 = z[2] - z[1];
  r.center += 0.5 * d * (c1 * c1 + c2 * c2);
  return r;
}

}  // namespace nrgate

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nrgate {

/// Classical fixed-step fourth-order Runge-Kutta stepper with preallocated
/// stage buffers.  `System` is called as sys(state, dstate, t) with spans.
class RungeKutta4 {
public:
  explicit RungeKutta4(std::size_t n) : tmp_(n), k1_(n), k2_(n), k3_(n), k4_(n) {}

  std::size_t size() const { return tmp_.size(); }

  template <typename System>
  void step(System&& sys, std::span<double> x, double t, double dt) {
    const std::size_t n = tmp_.size();
    const double half = 0.5 * dt;

    sys(std::span<const double>(x), std::span<double>(k1_), t);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + half * k1_[i];

    sys(std::span<const double>(tmp_), std::span<double>(k2_), t + half);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + half * k2_[i];

    sys(std::span<const double>(tmp_), std::span<double>(k3_), t + half);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + dt * k3_[i];

    sys(std::span<const double>(tmp_), std::span<double>(k4_), t + dt);
    const double sixth = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i)
      x[i] += sixth * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

private:
  std::vector<double> tmp_, k1_, k2_, k3_, k4_;
};

}  // namespace nrgate

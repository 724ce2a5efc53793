#include "nrgate/kernel.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "nrgate/parallel.hpp"

namespace nrgate {

std::size_t BoolGrid::count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

std::size_t largest_square_cells(const BoolGrid& mask) {
  // side[c] holds the largest square ending at (r, c) for the current row.
  std::vector<std::size_t> prev(mask.cols() + 1, 0), cur(mask.cols() + 1, 0);
  std::size_t best = 0;
  for (std::size_t r = 0; r < mask.rows(); ++r) {
    for (std::size_t c = 0; c < mask.cols(); ++c) {
      cur[c + 1] = mask.at(r, c) ? 1 + std::min({prev[c], prev[c + 1], cur[c]}) : 0;
      best = std::max(best, cur[c + 1]);
    }
    std::swap(prev, cur);
  }
  return best;
}

BoolGrid desirability_mask(const SurrogateModel& model, double d, double a_p, double theta,
                           const AlphaGrid& grid, const DesirabilityThresholds& t) {
  if (grid.points < 2 || !(grid.hi > grid.lo)) throw DomainError("alpha grid needs >= 2 points");
  const double w = omega_hat(theta, d);
  BoolGrid mask(grid.points, grid.points);
  for (std::size_t i = 0; i < grid.points; ++i)
    for (std::size_t j = 0; j < grid.points; ++j) {
      const Prediction p = model.predict(a_p, grid.value(i), grid.value(j), w, d);
      mask.set(i, j, is_desirable(p.eta, p.delta, t));
    }
  return mask;
}

KernelTable robustness_map(const SurrogateModel& model, double d, const std::vector<double>& a_p,
                           const std::vector<double>& theta, const AlphaGrid& grid,
                           const DesirabilityThresholds& t, std::size_t workers) {
  KernelTable table;
  table.d = d;
  table.a_p = a_p;
  table.theta = theta;
  table.kernel.assign(a_p.size() * theta.size(), 0.0);
  parallel_for(table.kernel.size(), workers, [&](std::size_t k) {
    const std::size_t i = k / theta.size();
    const std::size_t j = k % theta.size();
    table.kernel[k] = kernel_size(desirability_mask(model, d, a_p[i], theta[j], grid, t), grid.pitch());
  });
  return table;
}

void write_kernel_csv(std::ostream& os, const KernelTable& table) {
  os << "# d=" << table.d << '\n';
  os << "a_p,theta,theta_over_pi,kernel\n";
  char buf[128];
  for (std::size_t i = 0; i < table.a_p.size(); ++i)
    for (std::size_t j = 0; j < table.theta.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.6g,%.10g,%.6g,%.6g\n", table.a_p[i], table.theta[j],
                    table.theta[j] / std::numbers::pi, table.at(i, j));
      os << buf;
    }
}

}  // namespace nrgate

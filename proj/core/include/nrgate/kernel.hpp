#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "nrgate/analysis.hpp"
#include "nrgate/surrogate.hpp"

namespace nrgate {

/// Row-major boolean grid; rows index alpha1, columns alpha2.
class BoolGrid {
public:
  BoolGrid(std::size_t rows, std::size_t cols, bool fill = false)
      : rows_(rows), cols_(cols), cells_(rows * cols, fill ? 1 : 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool at(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c] != 0; }
  void set(std::size_t r, std::size_t c, bool v) { cells_[r * cols_ + c] = v ? 1 : 0; }
  std::size_t count() const;

private:
  std::size_t rows_, cols_;
  std::vector<unsigned char> cells_;
};

/// Side, in cells, of the largest axis-aligned all-true square.
std::size_t largest_square_cells(const BoolGrid& mask);

/// Side length in parameter units: cells x pitch.
inline double kernel_size(const BoolGrid& mask, double pitch) {
  return static_cast<double>(largest_square_cells(mask)) * pitch;
}

struct AlphaGrid {
  double lo = 0.0;
  double hi = 6.0;
  std::size_t points = 61;

  double pitch() const { return (hi - lo) / static_cast<double>(points - 1); }
  double value(std::size_t i) const { return lo + static_cast<double>(i) * pitch(); }
};

/// Surrogate desirability over the (alpha1, alpha2) grid at fixed (d, A_p, theta).
BoolGrid desirability_mask(const SurrogateModel& model, double d, double a_p, double theta,
                           const AlphaGrid& grid = {},
                           const DesirabilityThresholds& t = kKernelThresholds);

struct KernelTable {
  double d = 0.0;
  std::vector<double> a_p;
  std::vector<double> theta;
  std::vector<double> kernel;  // a_p-major: kernel[i * theta.size() + j]

  double at(std::size_t i, std::size_t j) const { return kernel[i * theta.size() + j]; }
};

/// Kernel size for every (A_p, theta) cell at fixed d.
KernelTable robustness_map(const SurrogateModel& model, double d, const std::vector<double>& a_p,
                           const std::vector<double>& theta, const AlphaGrid& grid = {},
                           const DesirabilityThresholds& t = kKernelThresholds,
                           std::size_t workers = 1);

/// Long-format CSV: a_p,theta,theta_over_pi,kernel.
void write_kernel_csv(std::ostream& os, const KernelTable& table);

}  // namespace nrgate

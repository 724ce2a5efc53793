#include <doctest.h>

#include <random>

#include "nrgate/kernel.hpp"

using namespace nrgate;

namespace {

/// Exhaustive check of every (corner, size) square.
std::size_t brute_force_square(const BoolGrid& g) {
  std::size_t best = 0;
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c)
      for (std::size_t s = 1; r + s <= g.rows() && c + s <= g.cols(); ++s) {
        bool full = true;
        for (std::size_t i = r; i < r + s && full; ++i)
          for (std::size_t j = c; j < c + s && full; ++j) full = g.at(i, j);
        if (full) best = std::max(best, s);
      }
  return best;
}

/// Surrogate whose eta and delta outputs are fixed numbers.
SurrogateModel constant_model(double eta, double delta) {
  SurrogateModel m;
  m.net = Mlp(default_architecture());
  m.in_bounds = {{0.2, 0.0, 0.0, 1.0, 0.2}, {1.0, 6.0, 6.0, 1.85, 0.6}};
  m.out_bounds = {{eta - 1.0, delta - 1.0}, {eta + 1.0, delta + 1.0}};
  return m;
}

}  // namespace

TEST_CASE("kernel size trivial masks") {
  CHECK(kernel_size(BoolGrid(10, 10, true), 0.6) == doctest::Approx(6.0));
  CHECK(kernel_size(BoolGrid(10, 10, false), 0.6) == 0.0);
  CHECK(largest_square_cells(BoolGrid(0, 0)) == 0);
  CHECK(largest_square_cells(BoolGrid(3, 7, true)) == 3);
}

TEST_CASE("kernel size matches brute force") {
  std::mt19937_64 rng(17);
  for (std::size_t n = 1; n <= 30; ++n) {
    for (double density : {0.5, 0.8, 0.95}) {
      std::bernoulli_distribution cell(density);
      BoolGrid g(n, n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) g.set(r, c, cell(rng));
      CHECK(largest_square_cells(g) == brute_force_square(g));
    }
  }
  // non-square grids too
  BoolGrid g(7, 19);
  std::bernoulli_distribution cell(0.85);
  for (std::size_t r = 0; r < 7; ++r)
    for (std::size_t c = 0; c < 19; ++c) g.set(r, c, cell(rng));
  CHECK(largest_square_cells(g) == brute_force_square(g));
}

TEST_CASE("alpha grid") {
  const AlphaGrid g;
  CHECK(g.pitch() == doctest::Approx(0.1));
  CHECK(g.value(60) == doctest::Approx(6.0));
}

TEST_CASE("robustness map reductions") {
  const SurrogateModel none = constant_model(0.1, 9.0);
  const KernelTable empty = robustness_map(none, 0.2, {0.4, 0.6}, {1.0, 1.5}, AlphaGrid{0, 6, 11});
  for (double k : empty.kernel) CHECK(k == 0.0);

  const SurrogateModel all = constant_model(0.3, 9.0);
  const KernelTable full = robustness_map(all, 0.2, {0.4}, {1.0}, AlphaGrid{0, 6, 11}, kKernelThresholds, 2);
  REQUIRE(full.kernel.size() == 1);
  CHECK(full.at(0, 0) == doctest::Approx(kernel_size(desirability_mask(all, 0.2, 0.4, 1.0, AlphaGrid{0, 6, 11}), 0.6)));
  CHECK(full.at(0, 0) == doctest::Approx(6.6));
}

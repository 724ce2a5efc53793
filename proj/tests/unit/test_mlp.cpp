#include <doctest.h>

#include <cmath>
#include <random>

#include "nrgate/mlp.hpp"

using namespace nrgate;

TEST_CASE("normalize") {
  const Bounds b{{0.0, -1.0}, {6.0, 3.0}};
  const std::vector<double> v{4.5, 1.0};
  const Normalized n = normalize(v, b);
  CHECK(n.values[0] == doctest::Approx(0.5));
  CHECK(n.values[1] == doctest::Approx(0.0));
  CHECK_FALSE(n.clamped);

  const std::vector<double> out{7.0, -2.0};
  const Normalized c = normalize(out, b);
  CHECK(c.clamped);
  CHECK(c.values[0] == 1.0);
  CHECK(c.values[1] == -1.0);

  CHECK_THROWS_AS(normalize(v, Bounds{{1.0, 0.0}, {1.0, 1.0}}), DegenerateBounds);
}

TEST_CASE("normalize and denormalize are inverse") {
  const Bounds b{{0.2, 0.0, 0.0, 1.0, 0.2}, {1.0, 6.0, 6.0, 1.84, 0.6}};
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> v(5);
    for (std::size_t i = 0; i < 5; ++i)
      v[i] = std::uniform_real_distribution<double>(b.min[i], b.max[i])(rng);
    const auto back = denormalize(normalize(v, b).values, b);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(back[i] - v[i]) <= 1e-12 * std::abs(v[i]) + 1e-15);
  }
}

TEST_CASE("fit_bounds widens constant columns") {
  const std::vector<double> rows{1.0, 5.0, 3.0, 5.0, 2.0, 5.0};
  const Bounds b = fit_bounds(rows, 2);
  CHECK(b.min[0] == 1.0);
  CHECK(b.max[0] == 3.0);
  CHECK(b.min[1] == doctest::Approx(2.5));
  CHECK(b.max[1] == doctest::Approx(7.5));
}

TEST_CASE("zero network outputs zero") {
  const Mlp net({5, 50, 50, 50, 50, 2});
  const auto y = net.forward(std::vector<double>{0.3, -0.2, 0.9, 0.1, -1.0});
  CHECK(y == std::vector<double>{0.0, 0.0});
  CHECK(net.parameter_count() == 5 * 50 + 50 + 3 * (50 * 50 + 50) + 50 * 2 + 2);
}

TEST_CASE("hand-set sparse network") {
  // One live path: input 1 -> hidden unit 0 of each layer -> both outputs.
  Mlp net({3, 2, 2, 2});
  auto& L = net.layers();
  L[0].weights[0 * 3 + 1] = 2.0;  // h1 = relu(2 x1 - 0.5)
  L[0].biases[0] = -0.5;
  L[1].weights[0 * 2 + 0] = -1.5;  // h2 = relu(-1.5 h1 + 4)
  L[1].biases[0] = 4.0;
  L[2].weights[0 * 2 + 0] = 0.5;  // y0 = 0.5 h2 + 1
  L[2].weights[1 * 2 + 0] = -2.0;  // y1 = -2 h2
  L[2].biases[0] = 1.0;

  auto y = net.forward(std::vector<double>{9.0, 1.0, -7.0});
  // h1 = 1.5, h2 = 1.75
  CHECK(y[0] == doctest::Approx(1.875));
  CHECK(y[1] == doctest::Approx(-3.5));
  y = net.forward(std::vector<double>{0.0, 0.1, 0.0});
  // h1 = relu(-0.3) = 0, h2 = 4
  CHECK(y[0] == doctest::Approx(3.0));
  CHECK(y[1] == doctest::Approx(-8.0));
}

TEST_CASE("parameters round trip") {
  Mlp net = Mlp::random({4, 6, 3}, 11);
  const auto p = net.parameters();
  Mlp other({4, 6, 3});
  other.set_parameters(p);
  CHECK(other == net);
  CHECK(Mlp::random({4, 6, 3}, 11) == net);
  CHECK_FALSE(Mlp::random({4, 6, 3}, 12) == net);
  const double limit = std::sqrt(6.0 / 4.0);
  for (double w : net.layers()[0].weights) CHECK(std::abs(w) <= limit);
}

TEST_CASE("backprop matches finite differences") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Mlp net = Mlp::random({3, 7, 5, 2}, seed);
    // Non-zero biases so every layer's bias gradient is exercised.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& l : net.layers())
      for (double& b : l.biases) b = 0.3 * u(rng);
    std::vector<double> x(6 * 3), t(6 * 2);
    for (double& v : x) v = u(rng);
    for (double& v : t) v = u(rng);

    std::vector<double> grad;
    net.loss(x, t, &grad);
    auto p = net.parameters();
    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double keep = p[k];
      p[k] = keep + h;
      net.set_parameters(p);
      const double up = net.loss(x, t);
      p[k] = keep - h;
      net.set_parameters(p);
      const double down = net.loss(x, t);
      p[k] = keep;
      const double fd = (up - down) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - grad[k]) / std::max(std::abs(fd), 1e-4));
    }
    net.set_parameters(p);
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("jacobian matches forward differences of outputs") {
  Mlp net = Mlp::random({2, 4, 2}, 5);
  const std::vector<double> x{0.3, -0.7, 0.1, 0.4};
  const auto J = net.jacobian(x);
  auto p = net.parameters();
  REQUIRE(J.size() == 4 * p.size());
  const double h = 1e-6;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double keep = p[k];
    p[k] = keep + h;
    net.set_parameters(p);
    const auto a0 = net.forward(std::span(x).subspan(0, 2));
    const auto a1 = net.forward(std::span(x).subspan(2, 2));
    p[k] = keep - h;
    net.set_parameters(p);
    const auto b0 = net.forward(std::span(x).subspan(0, 2));
    const auto b1 = net.forward(std::span(x).subspan(2, 2));
    p[k] = keep;
    const double fd[4] = {(a0[0] - b0[0]) / (2 * h), (a0[1] - b0[1]) / (2 * h),
                          (a1[0] - b1[0]) / (2 * h), (a1[1] - b1[1]) / (2 * h)};
    for (std::size_t r = 0; r < 4; ++r) CHECK(J[r * p.size() + k] == doctest::Approx(fd[r]).epsilon(1e-6));
  }
}

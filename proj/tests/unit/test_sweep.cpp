#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "nrgate/sweep.hpp"

using namespace nrgate;

namespace {

/// Two-sided Kolmogorov-Smirnov statistic of samples against U(0, 1).
double ks_uniform(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max(d, static_cast<double>(i + 1) / n - u[i]);
    d = std::max(d, u[i] - static_cast<double>(i) / n);
  }
  return d;
}

SweepSpec tiny() {
  SweepSpec s;
  s.n_per_side = 12;
  s.t_total = 30.0;
  s.n_samples = 10;
  s.seed = 7;
  return s;
}

std::string csv(const std::vector<SweepRecord>& r) {
  std::ostringstream os;
  write_dataset_csv(os, r);
  return os.str();
}

}  // namespace

TEST_CASE("record streams are reproducible and independent") {
  RecordStream a(1, 5), b(1, 5), c(1, 6), d(2, 5);
  const double va = a.uniform();
  CHECK(va == b.uniform());
  CHECK(va != c.uniform());
  CHECK(va != d.uniform());
  RecordStream e(3, 0);
  for (int i = 0; i < 1000; ++i) {
    const double u = e.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(e.below(7) < 7);
  }
}

TEST_CASE("marginals are uniform") {
  SweepSpec spec;
  spec.n_samples = 10000;
  std::vector<std::vector<double>> cols(5);
  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    const SweepRecord r = draw_record(spec, i);
    cols[0].push_back((r.a_p - spec.a_p.lo) / (spec.a_p.hi - spec.a_p.lo));
    cols[1].push_back((r.alpha1 - spec.alpha1.lo) / (spec.alpha1.hi - spec.alpha1.lo));
    cols[2].push_back((r.alpha2 - spec.alpha2.lo) / (spec.alpha2.hi - spec.alpha2.lo));
    cols[3].push_back((r.theta - spec.theta.lo) / (spec.theta.hi - spec.theta.lo));
    cols[4].push_back((r.d - spec.d.lo) / (spec.d.hi - spec.d.lo));
    CHECK(r.omega_hat == omega_hat(r.theta, r.d));
  }
  for (const auto& c : cols) CHECK(ks_uniform(c) < 0.02);
}

TEST_CASE("spec validation") {
  CHECK_NOTHROW(validate(SweepSpec{}));
  CHECK_NOTHROW(validate(SweepSpec::reduced()));
  SweepSpec s;
  s.theta = {0.0, 1.0};
  CHECK_THROWS_AS(validate(s), DomainError);
  s = SweepSpec{};
  s.d = {0.6, 0.2};
  CHECK_THROWS_AS(validate(s), DomainError);
  s = SweepSpec{};
  s.n_samples = 0;
  CHECK_THROWS_AS(validate(s), DomainError);
  CHECK(SweepSpec::reduced().n_per_side == 60);
  CHECK(SweepSpec::reduced().t_total == 800.0);
}

TEST_CASE("datasets do not depend on parallelism") {
  const SweepSpec spec = tiny();
  const auto serial = generate_dataset(spec, 1);
  const auto threaded = generate_dataset(spec, 4);
  CHECK(csv(serial) == csv(threaded));
  CHECK(dataset_fingerprint(serial) == dataset_fingerprint(threaded));
  // Record i is the same whatever the campaign size.
  SweepSpec more = spec;
  more.n_samples = 12;
  const auto longer = generate_dataset(more, 2);
  CHECK(csv({longer.begin(), longer.begin() + 10}) == csv(serial));
}

TEST_CASE("dataset csv round trip") {
  auto records = generate_dataset(tiny(), 1);
  records[1].flag = RecordFlag::Degenerate;
  records[1].delta = std::numeric_limits<double>::infinity();
  records[2].flag = RecordFlag::Diverged;
  records[2].eta_lr = std::numeric_limits<double>::quiet_NaN();
  const std::string text = csv(records);
  CHECK(text.substr(0, kDatasetHeader.size()) == kDatasetHeader);
  std::istringstream in("# comment\n" + text);
  const auto back = read_dataset_csv(in);
  REQUIRE(back.size() == records.size());
  CHECK(csv(back) == text);
  CHECK(back[0].a_p == records[0].a_p);
  CHECK(back[1].flag == RecordFlag::Degenerate);
  CHECK_FALSE(back[2].usable());
}

TEST_CASE("relative gap") {
  CHECK(relative_gap(0.2, 0.1) == doctest::Approx(0.5));
  CHECK(relative_gap(0.1, 0.2) == relative_gap(0.2, 0.1));
  CHECK(relative_gap(0.0, 0.0) == 0.0);
  CHECK(relative_gap(1e-5, 2e-5) < 0.5);  // below the floor both are "no transmission"
}

TEST_CASE("zeta grid and modes") {
  const auto g = zeta_grid(0.0, 0.05, 0.002);
  CHECK(g.size() == 26);
  CHECK(g.back() == doctest::Approx(0.05));
  CHECK_THROWS_AS(zeta_grid(0.0, 0.05, 0.0), DomainError);
  CHECK(sweep_mode_from_string("up") == SweepMode::ContinueUp);
  CHECK(sweep_mode_from_string(to_string(SweepMode::ContinueDown)) == SweepMode::ContinueDown);
  CHECK_THROWS(sweep_mode_from_string("sideways"));
}

TEST_CASE("critical brackets and disagreements") {
  std::vector<DampingPoint> pts(4);
  const double eta_lr[] = {0.3, 0.29, 0.05, 0.04};
  const double eta_rl[] = {0.1, 0.1, 0.1, 0.1};
  for (int i = 0; i < 4; ++i) {
    pts[i].zeta = 0.01 * i;
    pts[i].lr.eta = eta_lr[i];
    pts[i].rl.eta = eta_rl[i];
  }
  const auto br = critical_brackets(pts);
  REQUIRE(br.size() == 1);
  CHECK(br[0].direction == Direction::LR);
  CHECK(br[0].zeta_lo == doctest::Approx(0.01));
  CHECK(br[0].zeta_hi == doctest::Approx(0.02));

  DampingSweepResult a{SweepMode::Cold, pts, br}, b = a;
  b.points[1].lr.eta = 0.05;
  CHECK(disagreements(a, b, Direction::LR) == std::vector<double>{0.01});
  CHECK(disagreements(a, b, Direction::RL).empty());
}

TEST_CASE("damping sweep runs on a small lattice") {
  WaveguideConfig c = presets::system1();
  c.n_per_side = 12;
  c.t_total = 40.0;
  const auto grid = zeta_grid(0.0, 0.01, 0.005);
  const auto cold = damping_sweep(c, grid, SweepMode::Cold);
  const auto down = damping_sweep(c, grid, SweepMode::ContinueDown);
  REQUIRE(cold.points.size() == 3);
  REQUIRE(down.points.size() == 3);
  CHECK(down.points.front().zeta == doctest::Approx(0.0));
  CHECK(down.points.back().zeta == doctest::Approx(0.01));
  // The first point visited from rest matches the cold run.
  CHECK(down.points.back().lr.eta == cold.points.back().lr.eta);
  CHECK_THROWS_AS(damping_sweep(c, {0.02, 0.01}, SweepMode::Cold), DomainError);
  CHECK_THROWS_AS(damping_sweep(c, {0.01, 0.06}, SweepMode::Cold), DomainError);
}

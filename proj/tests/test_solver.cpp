#include "doctest.h"

#include <random>

#include "chainwave/nonlinear.hpp"
#include "chainwave/solver.hpp"
#include "chainwave/verify.hpp"

using namespace chainwave;

namespace {

const ChainModel kOne({1.0}, {1.0});
const ChainModel kCubic({1.0, 1.0}, {1.0, 1.0}, HigherOrderFamily::cubic, {0.1, 0.1});

Grid grid_for(const ChainModel& m, Index n = 1024) { return Grid(default_half_length(m), n); }

SolveConfig config(double eps) {
  SolveConfig c;
  c.epsilon = eps;
  return c;
}

}  // namespace

TEST_CASE("solve config validation") {
  CHECK_NOTHROW(config(0.1).validate());
  CHECK_THROWS_AS(config(0.0).validate(), Error);
  CHECK_THROWS_AS(config(1.5).validate(), Error);
  SolveConfig c = config(0.1);
  c.damping = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = config(0.1);
  c.tol_fixed_point = -1;
  CHECK_THROWS_AS(c.validate(), Error);
  c = config(0.1);
  c.max_iterations = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("residual pair") {
  const Grid grid = grid_for(kOne);
  const ResidualPair plain = residuals(kOne, grid, 0.2);
  CHECK(sup_norm(plain.S) == 0.0);
  CHECK(is_even(plain.R));
  CHECK_THROWS_AS(residuals(kOne, grid, 0.0), Error);

  const Grid g2 = grid_for(kCubic);
  std::vector<double> norms, r_diffs;
  Profile prev = residuals(kCubic, g2, 0.4).R;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    const ResidualPair p = residuals(kCubic, g2, eps);
    CHECK(is_even(p.S));
    norms.push_back(residual_norm(p));
    if (eps < 0.4) r_diffs.push_back(l2_norm(p.R - prev));
    prev = p.R;
  }
  CHECK(spread(norms) < 2.0);
  // Cauchy: successive limits differ by a shrinking amount.
  CHECK(r_diffs[1] < 0.5 * r_diffs[0]);
  CHECK(r_diffs[2] < 0.5 * r_diffs[1]);
}

TEST_CASE("remainder map N") {
  const Grid grid = grid_for(kCubic);
  const Profile w0 = kdv_profile(kCubic, grid);
  CHECK(sup_norm(apply_N(kCubic, 0.2, Profile::zero(grid), w0)) == 0.0);
  const ChainModel plain({1.0, 1.0}, {1.0, 1.0});
  std::mt19937_64 rng(41);
  const Profile v1 = random_bandlimited(grid, 6, rng, Parity::even);
  const Profile v2 = random_bandlimited(grid, 6, rng, Parity::even);
  CHECK(sup_norm(apply_N(plain, 0.2, v1, w0)) == 0.0);

  // Lipschitz constant of eps^2 N_eps scales like eps^2 (times a further eps^2 from N itself).
  std::vector<double> eps{0.2, 0.1, 0.05}, lip;
  for (double e : eps) {
    const Profile d = (e * e) * (apply_N(kCubic, e, v2, w0) - apply_N(kCubic, e, v1, w0));
    lip.push_back(l2_norm(d) / l2_norm(v2 - v1));
  }
  CHECK(log_log_slope(eps, lip) >= 2.0 - 0.3);
}

TEST_CASE("fixed-point map degenerates to a constant without Q and N") {
  const Grid grid = grid_for(kOne);
  const FixedPointProblem bare(kOne, grid, 0.2, 1e-12, FixedPointTerms{false, false});
  std::mt19937_64 rng(8);
  const Profile a = fixed_point_map(bare, Profile::zero(grid));
  const Profile b = fixed_point_map(bare, random_bandlimited(grid, 20, rng, Parity::even));
  CHECK(l2_norm(a - b) == 0.0);
  const auto& rs = bare.residual_pair();
  CHECK(l2_norm(apply_L(bare.linear_inverse().op(), a) - (rs.R + rs.S)) < 1e-12 * l2_norm(rs.R + rs.S));
}

TEST_CASE("solve_wave: contract, fixed point and diagnostics") {
  const Grid grid = grid_for(kCubic);
  const FixedPointProblem problem(kCubic, grid, 0.2);
  const SolveConfig cfg = config(0.2);
  const WaveSolution sol = solve_wave(problem, cfg);
  const auto& d = sol.diagnostics;

  CHECK(d.iterations <= 50);
  for (std::size_t i = 1; i < d.increments.size(); ++i) CHECK(d.increments[i] < d.increments[i - 1]);
  CHECK(l2_norm(fixed_point_map(problem, sol.V) - sol.V) <= 10 * cfg.tol_fixed_point * std::max(1.0, l2_norm(sol.V)));
  CHECK(sup_norm(sol.W - sol.W0 - (0.04 * sol.V)) <= 1e-15);
  CHECK(d.tw_residual <= 1e-9);
  CHECK(d.tw_residual == tw_residual(kCubic, 0.2, sol.W));
  CHECK(d.min_value >= -1e-10);
  CHECK(d.evenness_defect <= 1e-10);
  CHECK(d.unimodal);
  CHECK(d.corrector_norm == l2_norm(sol.V));
  CHECK(sol.wave_speed_sq == doctest::Approx(5.04));
  CHECK(d.tail_decay_rate > 0.0);
  CHECK_FALSE(d.regime_warning);
  CHECK(eigen_identity_check(sol) <= 1e-6);

  // Determinism and damping: same fixed point either way.
  const WaveSolution again = solve_wave(kCubic, grid, cfg);
  CHECK((again.W.values().array() == sol.W.values().array()).all());
  SolveConfig damped = cfg;
  damped.damping = 0.5;
  const WaveSolution slow = solve_wave(problem, damped);
  CHECK(slow.diagnostics.iterations > d.iterations);
  CHECK(l2_norm(slow.V - sol.V) < 1e-10);
}

TEST_CASE("solve_wave failure modes") {
  const Grid grid = grid_for(kOne);
  SolveConfig c = config(0.2);
  c.max_iterations = 1;
  try {
    solve_wave(kOne, grid, c);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
  c = config(0.2);
  c.residual_tol = 1e-30;
  CHECK_THROWS_AS(solve_wave(kOne, grid, c), Error);
  CHECK_THROWS_AS(solve_wave(kOne, Grid(2.0, 256), config(0.2)), Error);
}

TEST_CASE("corrector error is second order in eps") {
  const Grid grid = grid_for(kOne, 2048);
  const std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  const auto rows = convergence_sweep(kOne, grid, eps, config(0.4));
  REQUIRE(rows.size() == 4);
  CHECK_FALSE(rows[0].order_l2.has_value());
  std::vector<double> v_norms;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK_FALSE(rows[i].error.has_value());
    v_norms.push_back(rows[i].corrector_norm);
    if (i > 0) {
      CHECK(*rows[i].order_l2 == doctest::Approx(2.0).epsilon(0.15));
      CHECK(*rows[i].order_sup == doctest::Approx(2.0).epsilon(0.15));
    }
    CHECK(rows[i].sigma_min >= 0.5 * 0.75);
  }
  CHECK(spread(v_norms) < 2.0);

  const auto single = convergence_sweep(kOne, grid, {0.1}, config(0.1));
  REQUIRE(single.size() == 1);
  CHECK_FALSE(single[0].order_l2.has_value());
  CHECK_FALSE(single[0].order_sup.has_value());
  CHECK_THROWS_AS(convergence_sweep(kOne, grid, {0.1, 0.2}, config(0.1)), Error);
  CHECK_THROWS_AS(convergence_sweep(kOne, grid, {}, config(0.1)), Error);
  CHECK(empirical_order(0.2, 4.0, 0.1, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("eigenvalue identity") {
  const Grid grid = grid_for(kOne);
  const WaveSolution sol = solve_wave(kOne, grid, config(0.1));
  CHECK(eigen_identity_check(sol) <= 1e-6);
  // A loose tolerance leaves a visibly larger defect.
  SolveConfig loose = config(0.1);
  loose.tol_fixed_point = 1e-4;
  loose.residual_tol = 1.0;
  const WaveSolution rough = solve_wave(kOne, grid, loose);
  CHECK(eigen_identity_check(rough) > eigen_identity_check(sol));
  CHECK(eigen_identity_check(kOne, 0.1, 1.01, Profile::zero(grid)) == 0.0);
}

TEST_CASE("tail decay fits") {
  const Grid grid = grid_for(kOne, 4096);
  CHECK(measure_tail_decay(kdv_profile(kOne, grid)) == doctest::Approx(std::sqrt(12.0)).epsilon(0.02));
  const Grid wide(20.0, 4096);
  const Profile e = Profile::sample(wide, [](double x) { return std::exp(-2 * std::abs(x)); }, Parity::even);
  CHECK(measure_tail_decay(e) == doctest::Approx(2.0).epsilon(0.01));
  CHECK_THROWS_AS(measure_tail_decay(Profile::constant(wide, 1.0)), Error);
}

TEST_CASE("unimodality detection") {
  const Grid grid(10.0, 256);
  CHECK(is_unimodal(Profile::sample(grid, [](double x) { return std::exp(-x * x); })));
  CHECK_FALSE(is_unimodal(Profile::sample(grid, [](double x) { return std::exp(-(x - 2) * (x - 2)) + std::exp(-(x + 2) * (x + 2)); })));
}

TEST_CASE("experimental direct iteration") {
  const Grid grid = grid_for(kOne);
  const WaveSolution sol = solve_wave(kOne, grid, config(0.2));
  const auto at_wave = direct_iteration(kOne, 0.2, sol.W, 1);
  CHECK(at_wave.increments[0] < 1e-9);
  const auto at_zero = direct_iteration(kOne, 0.2, Profile::zero(grid), 3);
  CHECK(sup_norm(at_zero.W) == 0.0);
  CHECK_THROWS_AS(direct_iteration(kOne, 0.2, sol.W, -1), Error);
}

#include "doctest.h"

#include <string>

#include "chainwave/nonlinear.hpp"
#include "oracles.hpp"

using namespace chainwave;

namespace {

std::vector<ChainModel> default_models() {
  return {ChainModel({1.0}, {1.0}), ChainModel({1.0, 1.0}, {1.0, 1.0}),
          ChainModel({1.0, 1.0}, {1.0, 1.0}, HigherOrderFamily::cubic, {0.1, 0.1})};
}

}  // namespace

TEST_CASE("model validation") {
  CHECK_THROWS_AS(ChainModel({}, {}), Error);
  CHECK_THROWS_AS(ChainModel({1.0}, {1.0, 2.0}), Error);
  try {
    ChainModel({-1.0}, {1.0});
    FAIL("negative alpha accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
    CHECK(std::string(e.what()).find("assumption") != std::string::npos);
  }
  CHECK_THROWS_AS(ChainModel({1.0}, {0.0}), Error);
  CHECK_NOTHROW(ChainModel::unchecked({1.0}, {0.0}));
  CHECK_THROWS_AS(ChainModel({1.0}, {1.0}, HigherOrderFamily::cubic, {0.1, 0.2}), Error);
  CHECK(parse_family("toda") == HigherOrderFamily::toda_remainder);
  CHECK(parse_family("cubic") == HigherOrderFamily::cubic);
  CHECK_THROWS_AS(parse_family("quartic"), Error);
}

TEST_CASE("KdV constants") {
  const auto one = kdv_constants(ChainModel({1.0}, {1.0}));
  CHECK(one.c0_sq == 1.0);
  CHECK(one.d1 == doctest::Approx(12.0));
  CHECK(one.d2 == doctest::Approx(12.0));
  const auto two = kdv_constants(ChainModel({1.0, 1.0}, {1.0, 1.0}));
  CHECK(two.c0_sq == 5.0);
  CHECK(two.d1 == doctest::Approx(12.0 / 17.0));
  CHECK(two.d2 == doctest::Approx(108.0 / 17.0));
  CHECK(quadratic_weight(ChainModel({1.0, 1.0}, {1.0, 1.0})) == 9.0);
}

TEST_CASE("force law and potentials") {
  const ChainModel plain({1.0}, {1.0});
  const double r = 0.3;
  CHECK(plain.potential(1, r) == doctest::Approx(0.5 * r * r + r * r * r / 3.0));
  CHECK(plain.force(1, r) == doctest::Approx(r + r * r));
  CHECK(plain.stiffness(1, r) == doctest::Approx(1 + 2 * r));
  CHECK(plain.force(1, 0.0) == 0.0);

  const ChainModel cubic({1.0}, {1.0}, HigherOrderFamily::cubic, {0.2});
  CHECK(cubic.psi_prime(1, r) == doctest::Approx(0.2 * r * r * r));
  CHECK(cubic.psi(1, r) == doctest::Approx(0.05 * r * r * r * r));
  CHECK(cubic.psi_second(1, r) == doctest::Approx(0.6 * r * r));

  const ChainModel toda({1.0}, {1.0}, HigherOrderFamily::toda_remainder, {1.0});
  for (double x : {1e-6, 0.05, 0.09, 0.11, 0.7, -0.4}) {
    const long double ref = std::expm1((long double)x) - x - 0.5L * x * x;
    CHECK(toda.psi_prime(1, x) == doctest::Approx(double(ref)).epsilon(1e-12));
  }
  for (const auto& m : default_models()) CHECK(higher_order_bound_ratio(m) <= 1.0 + 1e-12);
  CHECK(higher_order_bound_ratio(toda) <= 1.0 + 1e-12);
  // Potential is the antiderivative of the force.
  const double h = 1e-5;
  for (double x : {-0.5, 0.2, 0.8})
    CHECK((toda.potential(1, x + h) - toda.potential(1, x - h)) / (2 * h) ==
          doctest::Approx(toda.force(1, x)).epsilon(1e-8));
}

TEST_CASE("KdV profile solves its ODE and first integral") {
  for (const auto& m : default_models()) {
    const Grid grid(default_half_length(m), 4096);
    const Profile w0 = kdv_profile(m, grid);
    const auto [c0, d1, d2] = kdv_constants(m);
    const Profile res = derivative(w0, 2) - d1 * w0 + d2 * square(w0);
    CHECK(sup_norm(res) <= 1e-8);
    CHECK(sup_norm(profile_hamiltonian(m, w0)) <= 1e-8);
    CHECK(w0[grid.size() / 2] == doctest::Approx(1.5 * d1 / d2));
    CHECK(evenness_defect(w0) == 0.0);
  }
  const ChainModel one({1.0}, {1.0});
  CHECK_THROWS_AS(kdv_profile(one, Grid(3.0, 256)), Error);
}

TEST_CASE("Q and P terms") {
  const ChainModel cubic({1.0, 1.0}, {1.0, 1.0}, HigherOrderFamily::cubic, {0.1, 0.1});
  const Grid grid(default_half_length(cubic), 2048);
  const Profile w0 = kdv_profile(cubic, grid);

  // Q_eps -> Q_0 at second order.
  const Profile q0 = apply_Q0(cubic, w0);
  const double e1 = l2_norm(apply_Q(cubic, 0.1, w0) - q0), e2 = l2_norm(apply_Q(cubic, 0.05, w0) - q0);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));

  // Cubic family: P_eps[W] = sum_m delta_m m^4 A((AW)^3) for every eps.
  for (double eps : {0.4, 0.05}) {
    const auto ops = averaging_family(cubic, grid, eps);
    Vector<double> ref = Vector<double>::Zero(grid.size());
    for (int m = 1; m <= 2; ++m) {
      const Profile aw = apply(ops[std::size_t(m - 1)], w0);
      const Profile cube = hadamard(aw, square(aw));
      ref += 0.1 * m * m * m * m * apply(ops[std::size_t(m - 1)], cube).values();
    }
    CHECK((apply_P(cubic, eps, w0).values() - ref).norm() <= 1e-12 * ref.norm());
  }

  const ChainModel plain({1.0, 1.0}, {1.0, 1.0});
  CHECK(sup_norm(apply_P(plain, 0.2, w0)) == 0.0);
  CHECK(strain_amplitude(plain, 0.2, w0) < 0.04 * 2 * sup_norm(w0) + 1e-15);

  // tw_residual on W0 is eps^2 ||R + S|| by definition of the residual pair.
  const double eps = 0.2;
  const Profile bw = apply(b_operator(cubic, grid, eps), w0);
  const Profile rs = (1.0 / (eps * eps)) * (apply_Q(cubic, eps, w0) - bw) + apply_P(cubic, eps, w0);
  CHECK(tw_residual(cubic, eps, w0) == doctest::Approx(eps * eps * l2_norm(rs)).epsilon(1e-10));
  CHECK_THROWS_AS(tw_residual(cubic, 0.0, w0), Error);
}

TEST_CASE("dealiased Q agrees with the plain product on resolved profiles") {
  const ChainModel m({1.0}, {1.0});
  const Grid grid(default_half_length(m), 2048);
  const Profile w0 = kdv_profile(m, grid);
  CHECK(l2_norm(apply_Q(m, 0.1, w0, {true}) - apply_Q(m, 0.1, w0)) < 1e-12);
}

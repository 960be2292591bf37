#include "doctest.h"

#include <random>

#include "chainwave/nonlinear.hpp"
#include "chainwave/operators.hpp"
#include "chainwave/verify.hpp"
#include "oracles.hpp"

using namespace chainwave;

namespace {

const ChainModel kOne({1.0}, {1.0});
const ChainModel kTwo({1.0, 1.0}, {1.0, 1.0});

Profile analytic_wave(const ChainModel& model, const Grid& grid) {
  const auto [c0, d1, d2] = kdv_constants(model);
  const auto w = oracle::kdv_wave(d1, d2);
  return Profile::sample(grid, [&](double x) { return double(w(x)); }, Parity::even);
}

}  // namespace

TEST_CASE("sinc and its complement against long-double references") {
  for (double z : {0.0, 1e-9, 1e-5, 3e-3, 0.2, 1.0, 4.0, 40.0}) {
    CHECK(sinc(z) == doctest::Approx(double(oracle::sinc(z))).epsilon(1e-15));
    const long double s = oracle::sinc(z), zz = (long double)z * z;
    // Series below 1e-2, where the long-double difference itself cancels.
    const double ref = double(z < 1e-2 ? zz / 3 - 2 * zz * zz / 45 + zz * zz * zz / 315 : 1.0L - s * s);
    CHECK(one_minus_sinc_sq(z) == doctest::Approx(ref).epsilon(1e-13));
  }
  CHECK(one_minus_sinc_sq(0.0) == 0.0);
  // z^2/3 leading behaviour without cancellation.
  CHECK(one_minus_sinc_sq(1e-7) == doctest::Approx(1e-14 / 3.0).epsilon(1e-10));
}

TEST_CASE("averaging acts on cosines by its symbol") {
  const Grid g(oracle::kPi, 64);
  const double eta = 0.37, k = 5;
  const Profile c = Profile::sample(g, [&](double x) { return std::cos(k * x); }, Parity::even);
  const Profile a = apply(averaging_operator(g, eta), c);
  for (Index i = 0; i < 64; ++i) CHECK(a[i] == doctest::Approx(double(oracle::sinc(eta * k / 2)) * c[i]).scale(1));
  CHECK(averaging_operator(g, eta).symbol_is_even());
  CHECK_THROWS_AS(averaging_operator(g, 0.0), Error);
}

TEST_CASE("averaged KdV wave matches the closed-form tanh difference") {
  for (const ChainModel* model : {&kOne, &kTwo}) {
    const Grid grid(default_half_length(*model), 4096);
    const auto [c0, d1, d2] = kdv_constants(*model);
    const auto w = oracle::kdv_wave(d1, d2);
    const Profile w0 = analytic_wave(*model, grid);
    for (double eta : {0.05, 0.4, 0.8}) {
      const Profile a = apply(averaging_operator(grid, eta), w0);
      const Profile ref = Profile::sample(grid, [&](double x) { return double(w.average(x, eta)); });
      CHECK(l2_norm(a - ref) < 1e-12);
      CHECK(l2_norm(averaging_direct(eta, w0) - ref) < 1e-10);
    }
  }
}

TEST_CASE("direct quadrature route agrees with the symbol route on random band-limited data") {
  const Grid grid(default_half_length(kTwo), 4096);
  std::mt19937_64 rng(3);
  const Profile f = random_bandlimited(grid, 64, rng);
  for (double eta : {0.1, 0.2, 0.4, 0.8}) CHECK(averaging_route_gap(eta, f) < 1e-8);
}

TEST_CASE("averaging consistency orders on W0") {
  const Grid grid(default_half_length(kOne), 4096);
  const auto [p2, p4] = averaging_orders(kdv_profile(kOne, grid), {0.4, 0.2, 0.1, 0.05});
  CHECK(p2 == doctest::Approx(2.0).epsilon(0.1));
  CHECK(p4 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("translation and difference quotients") {
  const Grid g(oracle::kPi, 64);
  const Profile s = Profile::sample(g, [](double x) { return std::sin(2 * x); });
  const Profile t = translate(s, 0.3);
  for (Index i = 0; i < 64; ++i) CHECK(t[i] == doctest::Approx(std::sin(2 * (g.node(i) + 0.3))).scale(1));
  const Profile q = discrete_gradient(s, 0.3);
  for (Index i = 0; i < 64; ++i)
    CHECK(q[i] == doctest::Approx((std::sin(2 * (g.node(i) + 0.3)) - std::sin(2 * g.node(i))) / 0.3).scale(1));
  CHECK_THROWS_AS(discrete_gradient(s, 0.0), Error);
  // Central difference quotient = derivative of the average.
  const Profile central = translate(discrete_gradient(s, 0.3), -0.15);
  const Profile via_average = derivative(apply(averaging_operator(g, 0.3), s), 1);
  CHECK((central.values() - via_average.values()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("b symbol: closed form, lower bound and small-eps limit") {
  const std::vector<double> alpha{1.0, 0.5};
  const ChainModel model(alpha, {1.0, 1.0});
  for (double eps : {0.4, 0.1, 0.01})
    for (double k : {0.0, 0.3, 2.0, 17.0, 400.0}) {
      const double b = b_symbol(model, eps, k);
      CHECK(b == doctest::Approx(double(oracle::b_symbol(alpha, eps, k))).epsilon(1e-12));
      CHECK(b >= 1.0);
    }
  CHECK(b_symbol(model, 0.3, 0.0) == 1.0);
  const double k = 1.5;
  const double gap1 = std::abs(b_symbol(model, 0.02, k) - b0_symbol(model, k));
  const double gap2 = std::abs(b_symbol(model, 0.01, k) - b0_symbol(model, k));
  CHECK(gap1 / gap2 == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("invert_b, cutoff and the von Neumann series") {
  const Grid grid(default_half_length(kOne), 1024);
  const Profile w0 = kdv_profile(kOne, grid);
  const double eps = 0.2;
  const Profile u = invert_b(kOne, grid, eps, w0);
  CHECK(l2_norm(apply(b_operator(kOne, grid, eps), u) - w0) < 1e-13);
  CHECK(l2_norm(invert_b0(kOne, grid, apply(b0_operator(kOne, grid), w0)) - w0) < 1e-12);

  const auto pi = cutoff_operator(grid, eps);
  for (Index j = 0; j < grid.size(); ++j)
    CHECK(pi.symbol()[j] == (std::abs(grid.wavenumber(j)) <= 4.0 / eps ? 1.0 : 0.0));

  const double e10 = l2_norm(von_neumann_inverse(kOne, grid, eps, w0, 10) - u);
  const double e400 = l2_norm(von_neumann_inverse(kOne, grid, eps, w0, 400) - u);
  CHECK(e400 < 1e-6 * e10);
  CHECK_THROWS_AS(von_neumann_inverse(kOne, grid, eps, w0, 0), Error);

  for (double e : {0.4, 0.1}) {
    const double rate = von_neumann_rate(kOne, e, w0);
    CHECK(rate == doctest::Approx(von_neumann_predicted_rate(kOne, e)).epsilon(0.05));
  }
}

TEST_CASE("uniform stability of the B inverse across eps") {
  const Grid grid(default_half_length(kOne), 4096);
  std::vector<double> ratios;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) ratios.push_back(inverse_stability_ratio(kOne, grid, eps, 20, 99));
  CHECK(spread(ratios) < 2.0);
}

TEST_CASE("multiplier composition is the symbol product") {
  const Grid g(2.0, 32);
  const auto a = averaging_operator(g, 0.3), b = averaging_operator(g, 0.5);
  const Profile f = Profile::sample(g, [](double x) { return std::exp(-x * x); });
  CHECK(l2_norm(apply(a * b, f) - apply(a, apply(b, f))) < 1e-14);
}

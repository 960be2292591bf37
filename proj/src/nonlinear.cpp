#include "chainwave/nonlinear.hpp"

#include <cmath>

namespace chainwave {

namespace {

void require_positive(double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
}

Profile even_if(const Profile& in, Parity hint) { return in.with_parity(hint); }

}  // namespace

double default_half_length(const ChainModel& model) { return 30.0 / std::sqrt(kdv_constants(model).d1); }

double kdv_profile_value(const ChainModel& model, double x) {
  const auto [c0_sq, d1, d2] = kdv_constants(model);
  const double s = 1.0 / std::cosh(0.5 * std::sqrt(d1) * x);
  return 1.5 * d1 / d2 * s * s;
}

Profile kdv_profile(const ChainModel& model, const Grid& grid) {
  const double edge = kdv_profile_value(model, grid.half_length());
  if (!(edge < kBoundaryDecay))
    throw Error(ErrorKind::DomainTooSmall, "KdV profile is " + std::to_string(edge) +
                                               " at the boundary; enlarge half_length (default 30/sqrt(d1))");
  // Exactly mirror symmetric; node rounding alone leaves ~1e-15 defects.
  return project_even(Profile::sample(grid, [&](double x) { return kdv_profile_value(model, x); }));
}

Profile profile_hamiltonian(const ChainModel& model, const Profile& w) {
  const auto [c0_sq, d1, d2] = kdv_constants(model);
  const Vector<double> wp = derivative(w, 1).values();
  const auto& v = w.values().array();
  Vector<double> e = (0.5 * wp.array().square() + d2 / 3.0 * v.cube() - 0.5 * d1 * v.square()).matrix();
  return {w.grid(), std::move(e), w.parity()};
}

std::vector<MultiplierOperator<double>> averaging_family(const ChainModel& model, const Grid& grid, double eps) {
  require_positive(eps);
  std::vector<MultiplierOperator<double>> ops;
  ops.reserve(static_cast<std::size_t>(model.range()));
  for (int m = 1; m <= model.range(); ++m) ops.push_back(averaging_operator(grid, m * eps));
  return ops;
}

Profile apply_Q(const ChainModel& model, double eps, const Profile& w, NonlinearOptions options) {
  const auto ops = averaging_family(model, w.grid(), eps);
  Vector<double> acc = Vector<double>::Zero(w.size());
  for (int m = 1; m <= model.range(); ++m) {
    const auto& a = ops[static_cast<std::size_t>(m - 1)];
    const Profile aw = apply(a, w);
    const Profile sq = options.dealias ? dealiased_square(aw) : square(aw);
    acc += model.beta(m) * m * m * m * apply(a, sq).values();
  }
  return even_if(Profile(w.grid(), std::move(acc)), w.parity() == Parity::none ? Parity::none : Parity::even);
}

Profile apply_Q0(const ChainModel& model, const Profile& w) { return quadratic_weight(model) * square(w); }

Profile apply_P(const ChainModel& model, double eps, const Profile& w) {
  const auto ops = averaging_family(model, w.grid(), eps);
  Vector<double> acc = Vector<double>::Zero(w.size());
  if (model.family() == HigherOrderFamily::none) return {w.grid(), std::move(acc), w.parity()};
  const double eps2 = eps * eps;
  const double eps6 = eps2 * eps2 * eps2;
  for (int m = 1; m <= model.range(); ++m) {
    const auto& a = ops[static_cast<std::size_t>(m - 1)];
    Vector<double> strain = apply(a, w).values();
    for (Index i = 0; i < strain.size(); ++i) strain[i] = model.psi_prime(m, m * eps2 * strain[i]);
    acc += (m / eps6) * apply(a, Profile(w.grid(), std::move(strain))).values();
  }
  return {w.grid(), std::move(acc), w.parity()};
}

double strain_amplitude(const ChainModel& model, double eps, const Profile& w) {
  const auto ops = averaging_family(model, w.grid(), eps);
  double worst = 0.0;
  for (int m = 1; m <= model.range(); ++m)
    worst = std::max(worst, m * eps * eps * sup_norm(apply(ops[static_cast<std::size_t>(m - 1)], w)));
  return worst;
}

double tw_residual(const ChainModel& model, double eps, const Profile& w) {
  require_positive(eps);
  const Profile lhs = apply(b_operator(model, w.grid(), eps), w);
  const Profile defect = lhs - apply_Q(model, eps, w) - (eps * eps) * apply_P(model, eps, w);
  return l2_norm(defect);
}

}  // namespace chainwave

#include "chainwave/verify.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "chainwave/linearized.hpp"
#include "chainwave/nonlinear.hpp"
#include "chainwave/operators.hpp"
#include "chainwave/solver.hpp"

namespace chainwave {

namespace {

const std::vector<double> kSweep{0.4, 0.2, 0.1, 0.05};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

double sym_eigen_min_abs(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

}  // namespace

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidArgument, "slope fit needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double spread(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi / *lo;
}

Profile random_bandlimited(const Grid& grid, Index max_mode, std::mt19937_64& rng, Parity parity) {
  max_mode = std::min(max_mode, grid.size() / 2 - 1);
  std::normal_distribution<double> normal;
  Vector<double> v = Vector<double>::Zero(grid.size());
  const Vector<double> x = grid.nodes();
  for (Index n = 0; n <= max_mode; ++n) {
    const double k = detail::pi<double> * double(n) / grid.half_length();
    const double a = normal(rng);
    const double b = (parity == Parity::even || n == 0) ? 0.0 : normal(rng);
    v += (a * (k * x.array()).cos() + b * (k * x.array()).sin()).matrix();
  }
  Profile f(grid, std::move(v), parity == Parity::even ? Parity::even : Parity::none);
  if (parity == Parity::even) f = project_even(f);
  return (1.0 / l2_norm(f)) * f;
}

double kdv_ode_residual(const ChainModel& model, const Grid& grid) {
  const auto [c0_sq, d1, d2] = kdv_constants(model);
  const Profile w0 = kdv_profile(model, grid);
  return sup_norm(derivative(w0, 2) - d1 * w0 + d2 * square(w0));
}

double averaging_route_gap(double eta, const Profile& f) {
  return l2_norm(apply(averaging_operator(f.grid(), eta), f) - averaging_direct(eta, f));
}

std::pair<double, double> averaging_orders(const Profile& w, const std::vector<double>& etas) {
  const Profile w2 = derivative(w, 2);
  std::vector<double> e1, e2;
  for (double eta : etas) {
    const Profile d = apply(averaging_operator(w.grid(), eta), w) - w;
    e1.push_back(l2_norm(d));
    e2.push_back(l2_norm(d - (eta * eta / 24.0) * w2));
  }
  return {log_log_slope(etas, e1), log_log_slope(etas, e2)};
}

double inverse_stability_ratio(const ChainModel& model, const Grid& grid, double eps, int samples,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto pi = cutoff_operator(grid, eps);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Profile g = random_bandlimited(grid, 64, rng, Parity::even);
    const Profile u = invert_b(model, grid, eps, g);
    const Profile low = apply(pi, u);
    const double ratio = (sobolev22_norm(low) + l2_norm(u - low) / (eps * eps)) / l2_norm(g);
    worst = std::max(worst, ratio);
  }
  return worst;
}

double von_neumann_predicted_rate(const ChainModel& model, double eps) {
  const double c0_sq = kdv_constants(model).c0_sq;
  return c0_sq / (eps * eps + c0_sq);
}

double von_neumann_rate(const ChainModel& model, double eps, const Profile& g, int terms, int window) {
  if (window < 1 || window >= terms) throw Error(ErrorKind::InvalidArgument, "window must lie in [1, terms)");
  const auto& grid = g.grid();
  const Profile exact = invert_b(model, grid, eps, g);
  const double first = l2_norm(von_neumann_inverse(model, grid, eps, g, terms - window) - exact);
  const double last = l2_norm(von_neumann_inverse(model, grid, eps, g, terms) - exact);
  return std::pow(last / first, 1.0 / double(window));
}

std::vector<PropertyResult> run_property_suite(const ChainModel& model, const Grid& grid, SuiteOptions options) {
  std::vector<PropertyResult> out;
  auto run = [&](const std::string& name, const std::function<PropertyResult()>& body) {
    PropertyResult r;
    try {
      r = body();
    } catch (const Error& e) {
      r.passed = false;
      r.value = std::nan("");
      r.detail = e.what();
    }
    r.name = name;
    out.push_back(std::move(r));
  };
  run("kdv_profile_ode_residual", [&] {
    const double v = kdv_ode_residual(model, grid);
    return PropertyResult{"", v <= 1e-8, v, "sup residual " + fmt(v) + " (bound 1e-8)"};
  });

  run("kdv_profile_first_integral", [&] {
    const double v = sup_norm(profile_hamiltonian(model, kdv_profile(model, grid)));
    return PropertyResult{"", v <= 1e-8, v, "sup |H| " + fmt(v) + " (bound 1e-8)"};
  });

  run("averaging_symbol_matches_quadrature", [&] {
    std::mt19937_64 rng(options.seed);
    const Profile w0 = kdv_profile(model, grid);
    const Profile rnd = random_bandlimited(grid, 64, rng);
    double worst = 0.0;
    for (double eps : {0.4, 0.1})
      for (int m = 1; m <= model.range(); ++m)
        worst = std::max({worst, averaging_route_gap(m * eps, w0), averaging_route_gap(m * eps, rnd)});
    return PropertyResult{"", worst <= 1e-8, worst, "max l2 gap " + fmt(worst) + " (bound 1e-8)"};
  });

  run("averaging_consistency_orders", [&] {
    const auto [p2, p4] = averaging_orders(kdv_profile(model, grid), kSweep);
    const bool ok = std::abs(p2 - 2.0) <= 0.2 && std::abs(p4 - 4.0) <= 0.2;
    return PropertyResult{"", ok, p4, "slopes " + fmt(p2) + " and " + fmt(p4) + " (expected 2 and 4, +-0.2)"};
  });

  run("inverse_b_uniform_stability", [&] {
    std::vector<double> ratios;
    for (double eps : kSweep)
      ratios.push_back(inverse_stability_ratio(model, grid, eps, options.stability_samples, options.seed));
    const double s = spread(ratios);
    return PropertyResult{"", s < 2.0, s, "max/min stability ratio " + fmt(s) + " (bound 2)"};
  });

  run("von_neumann_geometric_rate", [&] {
    const Profile w0 = kdv_profile(model, grid);
    double worst = 0.0;
    for (double eps : {0.4, 0.1}) {
      const double rel = std::abs(von_neumann_rate(model, eps, w0) / von_neumann_predicted_rate(model, eps) - 1.0);
      worst = std::max(worst, rel);
    }
    return PropertyResult{"", worst <= 0.05, worst, "max relative rate deviation " + fmt(worst) + " (bound 0.05)"};
  });

  run("linearized_symmetry", [&] {
    std::mt19937_64 rng(options.seed + 1);
    const LinearizedOperator op(model, grid, 0.1);
    double worst = 0.0;
    for (int s = 0; s < 4; ++s) {
      const Profile f = random_bandlimited(grid, 64, rng), g = random_bandlimited(grid, 64, rng);
      const Profile lf = apply_L(op, f), lg = apply_L(op, g);
      const double scale = l2_norm(lf) * l2_norm(g) + l2_norm(f) * l2_norm(lg);
      worst = std::max(worst, std::abs(inner_product(lf, g) - inner_product(f, lg)) / scale);
    }
    return PropertyResult{"", worst <= 1e-10, worst, "relative defect " + fmt(worst) + " (bound 1e-10)"};
  });

  run("linearized_parity", [&] {
    const LinearizedOperator op(model, grid, 0.1);
    const Profile v = apply_L(op, kdv_profile(model, grid));
    const double d = evenness_defect(v) / std::max(1.0, sup_norm(v));
    return PropertyResult{"", d <= 1e-12, d, "relative evenness defect " + fmt(d) + " (bound 1e-12)"};
  });

  run("linearized_kernel_direction", [&] {
    const LinearizedOperator op(model, grid, 0.0);
    const Profile wp = derivative(op.kdv_wave(), 1);
    const double r = l2_norm(apply_L(op, wp)) / l2_norm(wp);
    return PropertyResult{"", r <= 1e-7, r, "||L0 W0'|| / ||W0'|| = " + fmt(r) + " (bound 1e-7)"};
  });

  run("linearized_strong_convergence", [&] {
    const LinearizedOperator limit(model, grid, 0.0);
    const Profile& w0 = limit.kdv_wave();
    const Profile m0 = apply_M(limit, w0);
    std::vector<double> errs;
    for (double eps : kSweep) errs.push_back(l2_norm(apply_M(LinearizedOperator(model, grid, eps), w0) - m0));
    const double p = log_log_slope(kSweep, errs);
    return PropertyResult{"", std::abs(p - 2.0) <= 0.3, p, "slope " + fmt(p) + " (expected 2 +- 0.3)"};
  });

  run("residual_boundedness", [&] {
    std::vector<double> norms;
    for (double eps : kSweep) norms.push_back(residual_norm(residuals(model, grid, eps)));
    const double s = spread(norms);
    return PropertyResult{"", s < 2.0, s, "max/min of ||R|| + ||S|| " + fmt(s) + " (bound 2)"};
  });

  if (model.family() == HigherOrderFamily::none) {
    run("remainder_residual_vanishes", [&] {
      double worst = 0.0;
      for (double eps : kSweep) worst = std::max(worst, sup_norm(residuals(model, grid, eps).S));
      return PropertyResult{"", worst == 0.0, worst, "Psi = none: S_eps == 0 on the sweep"};
    });
  }

  run("even_invertibility_uniform", [&] {
    const EvenMatrix limit = assemble_even_matrix(LinearizedOperator(model, grid, 0.0));
    const double s0 = sym_eigen_min_abs(limit.matrix);
    double ratio = 1e300, asym = limit.asymmetry_defect;
    for (double eps : {0.2, 0.1, 0.05}) {
      const EvenMatrix m = assemble_even_matrix(LinearizedOperator(model, grid, eps));
      asym = std::max(asym, m.asymmetry_defect);
      ratio = std::min(ratio, sym_eigen_min_abs(m.matrix) / s0);
    }
    const bool ok = ratio >= 0.5 && asym < 1e-9;
    return PropertyResult{"", ok, ratio,
                          "min sigma(eps)/sigma(0) " + fmt(ratio) + " (bound 0.5), sigma(0) " + fmt(s0) +
                              ", asymmetry " + fmt(asym)};
  });

  return out;
}

}  // namespace chainwave

#include "chainwave/solver.hpp"

#include <cmath>
#include <limits>

#include "chainwave/nonlinear.hpp"
#include "chainwave/operators.hpp"

namespace chainwave {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

}  // namespace

void SolveConfig::validate() const {
  require(epsilon > 0.0 && epsilon <= 1.0, "epsilon must lie in (0, 1]");
  require(tol_fixed_point > 0.0, "tol_fixed_point must be positive");
  require(tol_linear > 0.0, "tol_linear must be positive");
  require(residual_tol > 0.0, "residual_tol must be positive");
  require(max_iterations >= 1, "max_iterations must be at least 1");
  require(damping > 0.0 && damping <= 1.0, "damping must lie in (0, 1]");
}

ResidualPair residuals(const ChainModel& model, const Grid& grid, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  const Profile w0 = kdv_profile(model, grid);
  const Profile bw = apply(b_operator(model, grid, eps), w0);
  // Both terms are even in exact arithmetic; the division by eps^2 amplifies
  // the rounding asymmetry of the FFTs, which the projection removes.
  const Profile r = project_even((1.0 / (eps * eps)) * (apply_Q(model, eps, w0) - bw));
  return {r, project_even(apply_P(model, eps, w0))};
}

double residual_norm(const ResidualPair& pair) { return l2_norm(pair.R) + l2_norm(pair.S); }

Profile apply_N(const ChainModel& model, double eps, const Profile& v, const Profile& w0) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  require_same_grid(v.grid(), w0.grid());
  const Parity hint = detail::combine_sum(v.parity(), w0.parity());
  if (model.family() == HigherOrderFamily::none) return Profile::zero(v.grid()).with_parity(hint);
  const double eps2 = eps * eps;
  const Profile shifted = (w0 + eps2 * v).with_parity(hint);
  return ((1.0 / eps2) * (apply_P(model, eps, shifted) - apply_P(model, eps, w0))).with_parity(hint);
}

FixedPointProblem::FixedPointProblem(const ChainModel& model, const Grid& grid, double eps, double tol_linear,
                                     Terms terms)
    : inverse_(LinearizedOperator(model, grid, eps)),
      residuals_(residuals(model, grid, eps)),
      tol_linear_(tol_linear),
      terms_(terms) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
}

Profile fixed_point_map(const FixedPointProblem& problem, const Profile& v) {
  const double eps = problem.epsilon();
  const double eps2 = eps * eps;
  const auto& model = problem.model();
  const auto& pair = problem.residual_pair();
  Profile rhs = pair.R + pair.S;
  if (problem.terms().quadratic) rhs = rhs + eps2 * apply_Q(model, eps, v);
  if (problem.terms().remainder) rhs = rhs + eps2 * apply_N(model, eps, v, problem.kdv_wave());
  return problem.linear_inverse().solve(project_even(rhs), problem.tol_linear());
}

bool is_unimodal(const Profile& w) {
  const Index n = w.size();
  Index peak = 0;
  w.values().maxCoeff(&peak);
  const double slack = 1e-13 * std::max(1.0, sup_norm(w));
  // Periodic domain: walk away from the peak in both directions to the antipode.
  for (Index s = 1; s <= n / 2; ++s) {
    const Index right = (peak + s) % n, right_prev = (peak + s - 1) % n;
    const Index left = (peak - s + n) % n, left_prev = (peak - s + 1 + n) % n;
    if (w[right] > w[right_prev] + slack || w[left] > w[left_prev] + slack) return false;
  }
  return true;
}

WaveSolution solve_wave(const ChainModel& model, const Grid& grid, const SolveConfig& config) {
  config.validate();
  const FixedPointProblem problem(model, grid, config.epsilon, config.tol_linear);
  return solve_wave(problem, config);
}

WaveSolution solve_wave(const FixedPointProblem& problem, const SolveConfig& config) {
  config.validate();
  if (config.epsilon != problem.epsilon())
    throw Error(ErrorKind::InvalidArgument, "config epsilon does not match the prepared problem");
  const auto& grid = problem.grid();
  const auto& model = problem.model();
  const double eps = problem.epsilon();
  const double eps2 = eps * eps;

  WaveDiagnostics diag;
  Profile v = Profile::zero(grid);
  bool converged = false;
  while (diag.iterations < config.max_iterations) {
    const Profile mapped = fixed_point_map(problem, v);
    Profile next = config.damping == 1.0 ? mapped : ((1.0 - config.damping) * v + config.damping * mapped);
    next = next.with_parity(Parity::even);
    const double increment = l2_norm(next - v);
    v = std::move(next);
    ++diag.iterations;
    diag.increments.push_back(increment);
    diag.final_increment = increment;
    if (increment <= config.tol_fixed_point * std::max(1.0, l2_norm(v))) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw Error(ErrorKind::NoConvergence, "fixed-point iteration did not converge in " +
                                              std::to_string(config.max_iterations) + " iterations (last increment " +
                                              std::to_string(diag.final_increment) + ")");

  const Profile& w0 = problem.kdv_wave();
  Profile w = (w0 + eps2 * v).with_parity(Parity::even);

  diag.tw_residual = tw_residual(model, eps, w);
  if (!(diag.tw_residual <= config.residual_tol))
    throw Error(ErrorKind::NoConvergence,
                "traveling-wave residual " + std::to_string(diag.tw_residual) + " exceeds the configured bound");
  diag.corrector_norm = l2_norm(v);
  diag.sigma_min = problem.linear_inverse().sigma_min();
  diag.residual_norm_RS = residual_norm(problem.residual_pair());
  try {
    diag.tail_decay_rate = measure_tail_decay(w);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EmptyWindow) throw;
    diag.tail_decay_rate = std::numeric_limits<double>::quiet_NaN();
  }
  diag.unimodal = is_unimodal(w);
  diag.evenness_defect = evenness_defect(w);
  diag.min_value = w.values().minCoeff();
  diag.strain_amplitude = strain_amplitude(model, eps, w);
  diag.regime_warning = diag.strain_amplitude > 1.0;

  const double c2 = kdv_constants(model).c0_sq + eps2;
  return WaveSolution{model, grid, eps, c2, w0, std::move(v), std::move(w), std::move(diag)};
}

double eigen_identity_check(const ChainModel& model, double eps, double wave_speed_sq, const Profile& w) {
  const Profile wp = derivative(w, 1);
  const double norm = l2_norm(wp);
  if (norm == 0.0) return 0.0;
  const auto ops = averaging_family(model, w.grid(), eps);
  const double eps2 = eps * eps;
  Vector<double> acc = Vector<double>::Zero(w.size());
  for (int m = 1; m <= model.range(); ++m) {
    const auto& a = ops[static_cast<std::size_t>(m - 1)];
    const Vector<double> aw = apply(a, w).values();
    Vector<double> inner = apply(a, wp).values();
    for (Index i = 0; i < inner.size(); ++i) inner[i] *= model.stiffness(m, m * eps2 * aw[i]);
    acc += double(m * m) * apply(a, Profile(w.grid(), std::move(inner))).values();
  }
  return std::sqrt(w.grid().spacing()) * (acc - wave_speed_sq * wp.values()).norm() / norm;
}

double eigen_identity_check(const WaveSolution& solution) {
  return eigen_identity_check(solution.model, solution.epsilon, solution.wave_speed_sq, solution.W);
}

double measure_tail_decay(const Profile& w) {
  const auto& grid = w.grid();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  Index count = 0;
  for (Index i = 0; i < w.size(); ++i) {
    const double v = w[i];
    if (!(v > 1e-10 && v < 1e-4)) continue;
    const double x = std::abs(grid.node(i));
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  const double n = double(count);
  const double denom = n * sxx - sx * sx;
  if (count < 3 || !(denom > 0.0))
    throw Error(ErrorKind::EmptyWindow, "no samples with 1e-10 < W < 1e-4 to fit a decay rate");
  return -(n * sxy - sx * sy) / denom;
}

double empirical_order(double eps_coarse, double e_coarse, double eps_fine, double e_fine) {
  return std::log(e_coarse / e_fine) / std::log(eps_coarse / eps_fine);
}

std::vector<SweepRow> convergence_sweep(const ChainModel& model, const Grid& grid,
                                        const std::vector<double>& eps_list, const SolveConfig& config) {
  if (eps_list.empty()) throw Error(ErrorKind::InvalidArgument, "epsilon list is empty");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw Error(ErrorKind::InvalidArgument, "epsilon list must be strictly decreasing");

  std::vector<SweepRow> rows;
  rows.reserve(eps_list.size());
  for (double eps : eps_list) {
    SolveConfig cfg = config;
    cfg.epsilon = eps;
    SweepRow row;
    row.epsilon = eps;
    try {
      const WaveSolution sol = solve_wave(model, grid, cfg);
      const auto& d = sol.diagnostics;
      const Profile diff = sol.W - sol.W0;
      row.l2_error = l2_norm(diff);
      row.sup_error = sup_norm(diff);
      row.iterations = d.iterations;
      row.tw_residual = d.tw_residual;
      row.sigma_min = d.sigma_min;
      row.residual_norm_RS = d.residual_norm_RS;
      if (std::isfinite(d.tail_decay_rate)) row.tail_rate = d.tail_decay_rate;
      row.corrector_norm = d.corrector_norm;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NearSingular && e.kind() != ErrorKind::NoConvergence) throw;
      row.error = "error:" + std::string(e.name());
    }
    if (!rows.empty()) {
      const SweepRow& prev = rows.back();
      if (prev.l2_error && row.l2_error) {
        row.order_l2 = empirical_order(prev.epsilon, *prev.l2_error, eps, *row.l2_error);
        row.order_sup = empirical_order(prev.epsilon, *prev.sup_error, eps, *row.sup_error);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

DirectIterationReport direct_iteration(const ChainModel& model, double eps, const Profile& start, int steps) {
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "step count must be non-negative");
  const auto& grid = start.grid();
  const double eps2 = eps * eps;
  Profile w = start;
  std::vector<double> increments;
  for (int s = 0; s < steps; ++s) {
    const Profile rhs = apply_Q(model, eps, w) + eps2 * apply_P(model, eps, w);
    Profile next = invert_b(model, grid, eps, rhs).with_parity(w.parity());
    increments.push_back(l2_norm(next - w));
    w = std::move(next);
  }
  return {std::move(w), std::move(increments)};
}

}  // namespace chainwave

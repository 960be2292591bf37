#include "chainwave/lattice.hpp"

#include <cmath>
#include <vector>

namespace chainwave {

namespace {

void accelerate(const ChainModel& model, const Eigen::VectorXd& u, Eigen::VectorXd& a) {
  const Index n = u.size();
  a.setZero(n);
  for (int m = 1; m <= model.range(); ++m) {
    for (Index j = 0; j + m < n; ++j) {
      const double f = model.force(m, u[j + m] - u[j]);
      a[j] += f;
      a[j + m] -= f;
    }
  }
}

void check_dt(const ChainModel& model, double dt) {
  if (!(dt > 0.0) || dt > max_time_step(model))
    throw Error(ErrorKind::InvalidArgument,
                "time step must lie in (0, 0.1/c0] = (0, " + std::to_string(max_time_step(model)) + "]");
}

double wave_half_width(const WaveSolution& solution) {
  const auto& w = solution.W;
  const double floor = 1e-8 * sup_norm(w);
  double width = 0.0;
  for (Index i = 0; i < w.size(); ++i)
    if (w[i] > floor) width = std::max(width, std::abs(w.grid().node(i)));
  return width;
}

}  // namespace

void validate_state(const ChainModel& model, const LatticeState& state) {
  if (state.u.size() != state.v.size())
    throw Error(ErrorKind::InvalidArgument, "positions and velocities differ in length");
  if (state.size() < 2 * model.range() + 2)
    throw Error(ErrorKind::InvalidArgument, "chain needs at least 2M + 2 particles");
  if (!state.u.allFinite() || !state.v.allFinite() || !std::isfinite(state.t))
    throw Error(ErrorKind::InvalidArgument, "lattice state has non-finite entries");
}

Eigen::VectorXd acceleration(const ChainModel& model, const LatticeState& state) {
  Eigen::VectorXd a;
  accelerate(model, state.u, a);
  return a;
}

double max_time_step(const ChainModel& model) { return 0.1 / std::sqrt(kdv_constants(model).c0_sq); }

LatticeState step(const ChainModel& model, const LatticeState& state, double dt) {
  LatticeState next = state;
  advance(model, next, dt, 1);
  return next;
}

double advance(const ChainModel& model, LatticeState& state, double dt, long steps) {
  check_dt(model, dt);
  validate_state(model, state);
  Eigen::VectorXd a;
  accelerate(model, state.u, a);
  double drift = 0.0;
  double p = state.v.sum();
  const double t0 = state.t;
  for (long s = 0; s < steps; ++s) {
    state.v += 0.5 * dt * a;
    state.u += dt * state.v;
    accelerate(model, state.u, a);
    state.v += 0.5 * dt * a;
    state.t = t0 + double(s + 1) * dt;
    const double q = state.v.sum();
    drift = std::max(drift, std::abs(q - p));
    p = q;
  }
  return drift;
}

double total_energy(const ChainModel& model, const LatticeState& state) {
  double e = 0.5 * state.v.squaredNorm();
  const Index n = state.size();
  for (int m = 1; m <= model.range(); ++m)
    for (Index j = 0; j + m < n; ++j) e += model.potential(m, state.u[j + m] - state.u[j]);
  return e;
}

double total_momentum(const LatticeState& state) { return state.v.sum(); }

Index default_particle_count(const WaveSolution& solution) {
  return 2 * static_cast<Index>(std::floor(0.95 * solution.grid.half_length() / solution.epsilon));
}

LatticeState wave_initial_data(const WaveSolution& solution, Index J) {
  const double eps = solution.epsilon;
  const double l = solution.grid.half_length();
  if (J < 2 * solution.model.range() + 2)
    throw Error(ErrorKind::InvalidArgument, "chain needs at least 2M + 2 particles");
  if (eps * double(J) > 2.0 * l)
    throw Error(ErrorKind::WindowOverflow, "chain of " + std::to_string(J) + " sites spans " +
                                               std::to_string(eps * double(J)) +
                                               ", more than the profile domain " + std::to_string(2.0 * l));
  std::vector<double> x(static_cast<std::size_t>(J));
  for (Index j = 0; j < J; ++j) x[static_cast<std::size_t>(j)] = eps * (double(j) - 0.5 * double(J));
  const double c = std::sqrt(solution.wave_speed_sq);
  LatticeState state;
  state.u = eps * primitive_at(solution.W, std::span<const double>(x));
  state.v = (-eps * eps * c) * interpolate(solution.W, std::span<const double>(x));
  state.t = 0.0;
  return state;
}

double travel_time(const WaveSolution& solution, double sites) { return sites / std::sqrt(solution.wave_speed_sq); }

TransportReport simulate_transport(const WaveSolution& solution, Index J, double T, double dt) {
  const auto& model = solution.model;
  check_dt(model, dt);
  if (!(T >= 0.0) || !std::isfinite(T)) throw Error(ErrorKind::InvalidArgument, "horizon must be non-negative");
  const double eps = solution.epsilon;
  const double c = std::sqrt(solution.wave_speed_sq);

  LatticeState state = wave_initial_data(solution, J);
  const Index buffer = 4 * model.range();
  const double half_sites = std::ceil(wave_half_width(solution) / eps);
  const double centre = 0.5 * double(J);
  if (centre - half_sites < double(buffer) || centre + c * T + half_sites > double(J - 1 - buffer))
    throw Error(ErrorKind::WindowOverflow, "wave travelling " + std::to_string(c * T) +
                                               " sites leaves the interior window of a " + std::to_string(J) +
                                               "-site chain");

  TransportReport report;
  report.particles = J;
  report.horizon = T;
  report.steps = T > 0.0 ? static_cast<long>(std::ceil(T / dt - 1e-12)) : 0;
  report.dt = report.steps > 0 ? T / double(report.steps) : dt;

  const double e0 = total_energy(model, state);
  if (report.steps > 0) report.momentum_drift = advance(model, state, report.dt, report.steps);
  state.t = T;
  report.energy_drift = e0 != 0.0 ? std::abs(total_energy(model, state) - e0) / std::abs(e0) : 0.0;

  std::vector<double> x;
  for (Index j = buffer; j < J - buffer; ++j) x.push_back(eps * (double(j) - centre) - eps * c * T);
  const Eigen::VectorXd w = interpolate(solution.W, std::span<const double>(x));
  const double scale = eps * eps * c * sup_norm(solution.W);
  double worst = 0.0;
  for (Index j = buffer; j < J - buffer; ++j)
    worst = std::max(worst, std::abs(state.v[j] + eps * eps * c * w[j - buffer]));
  report.transport_error = worst / scale;
  return report;
}

double transport_error(const WaveSolution& solution, Index J, double T, double dt) {
  return simulate_transport(solution, J, T, dt).transport_error;
}

}  // namespace chainwave

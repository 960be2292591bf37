#pragma once

// Finite FPU chain with free ends:
//   u_j'' = sum_m Phi'_m(u_{j+m} - u_j) - Phi'_m(u_j - u_{j-m}),
// bonds reaching past either end are dropped.

#include <Eigen/Core>

#include "chainwave/chain_model.hpp"
#include "chainwave/solver.hpp"

namespace chainwave {

struct LatticeState {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  double t = 0.0;

  Index size() const { return u.size(); }
};

/// Throws InvalidArgument unless J >= 2M + 2 and all entries are finite.
void validate_state(const ChainModel& model, const LatticeState& state);

Eigen::VectorXd acceleration(const ChainModel& model, const LatticeState& state);

/// Largest admissible time step, 0.1 / c0.
double max_time_step(const ChainModel& model);

/// One velocity-Verlet step.
LatticeState step(const ChainModel& model, const LatticeState& state, double dt);

/// `steps` velocity-Verlet steps in place, reusing the force evaluation
/// between steps.  Returns the largest per-step change of total momentum.
double advance(const ChainModel& model, LatticeState& state, double dt, long steps);

double total_energy(const ChainModel& model, const LatticeState& state);
double total_momentum(const LatticeState& state);

/// 2 floor(0.95 L / eps): the largest even chain whose window sits inside the profile domain.
Index default_particle_count(const WaveSolution& solution);

/// Wave centred at site J/2: u_j = eps U(x_j), u_j' = -eps^2 c W(x_j) with
/// x_j = eps (j - J/2) and U the primitive of W from the left edge.
/// Throws WindowOverflow when eps J > 2L, InvalidArgument when J < 2M + 2.
LatticeState wave_initial_data(const WaveSolution& solution, Index J);

struct TransportReport {
  Index particles = 0;
  double dt = 0.0;
  double horizon = 0.0;
  long steps = 0;
  double transport_error = 0.0;
  double energy_drift = 0.0;    ///< |E(T) - E(0)| / |E(0)|
  double momentum_drift = 0.0;  ///< max per-step |change of sum u_j'|
};

/// Time needed to travel `sites` lattice sites, sites / c_eps.
double travel_time(const WaveSolution& solution, double sites);

/// Integrates the wave to time T with ceil(T / dt) equal steps and compares
/// interior velocities with the translated profile.
/// Throws WindowOverflow or InvalidArgument (dt guard).
TransportReport simulate_transport(const WaveSolution& solution, Index J, double T, double dt);
double transport_error(const WaveSolution& solution, Index J, double T, double dt);

}  // namespace chainwave

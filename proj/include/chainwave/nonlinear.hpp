#pragma once

// Leading-order KdV profile and the nonlinear terms of the rescaled traveling
// wave equation  B_eps W = Q_eps[W] + eps^2 P_eps[W].

#include <vector>

#include "chainwave/chain_model.hpp"
#include "chainwave/grid.hpp"
#include "chainwave/operators.hpp"

namespace chainwave {

struct NonlinearOptions {
  /// Zero-pad pointwise squares (3/2 rule).  Off by default: the profiles are
  /// smooth and resolution is the primary accuracy control.
  bool dealias = false;
};

/// Largest profile value tolerated at the domain edge.
inline constexpr double kBoundaryDecay = 1e-12;

/// Default half length 30 / sqrt(d1).
double default_half_length(const ChainModel& model);

/// (3 d1 / 2 d2) sech^2(sqrt(d1) x / 2)
double kdv_profile_value(const ChainModel& model, double x);

/// Samples of the KdV wave; throws DomainTooSmall when W0(L) >= kBoundaryDecay.
Profile kdv_profile(const ChainModel& model, const Grid& grid);

/// 1/2 (W')^2 + 1/3 d2 W^3 - 1/2 d1 W^2, constant (zero) along the homoclinic orbit.
Profile profile_hamiltonian(const ChainModel& model, const Profile& w);

/// A_{m eps} for m = 1..M.
std::vector<MultiplierOperator<double>> averaging_family(const ChainModel& model, const Grid& grid, double eps);

/// Q_eps[W] = sum_m beta_m m^3 A_{m eps} (A_{m eps} W)^2
Profile apply_Q(const ChainModel& model, double eps, const Profile& w, NonlinearOptions options = {});

/// Q_0[W] = (sum_m beta_m m^3) W^2
Profile apply_Q0(const ChainModel& model, const Profile& w);

/// P_eps[W] = eps^-6 sum_m m A_{m eps} Psi'_m(m eps^2 A_{m eps} W)
Profile apply_P(const ChainModel& model, double eps, const Profile& w);

/// max_m sup |m eps^2 A_{m eps} W|; the growth bound on Psi'' is only
/// assumed while this stays <= 1.
double strain_amplitude(const ChainModel& model, double eps, const Profile& w);

/// || B_eps W - Q_eps[W] - eps^2 P_eps[W] ||_2, i.e. the traveling-wave defect
/// || eps^2 c_eps^2 W - sum_m m A Phi'_m(m eps^2 A W) ||_2 divided by eps^4.
double tw_residual(const ChainModel& model, double eps, const Profile& w);

}  // namespace chainwave

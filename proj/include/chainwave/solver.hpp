#pragma once

// Corrector iteration for the rescaled traveling wave equation.  With
// W = W0 + eps^2 V and c_eps^2 = c0^2 + eps^2 the equation becomes the fixed
// point problem
//   V = F_eps[V] = L_eps^{-1}(R_eps + S_eps + eps^2 Q_eps[V] + eps^2 N_eps[V]).

#include <optional>
#include <string>
#include <vector>

#include "chainwave/chain_model.hpp"
#include "chainwave/grid.hpp"
#include "chainwave/linearized.hpp"

namespace chainwave {

struct SolveConfig {
  double epsilon = 0.1;
  double tol_fixed_point = 1e-12;
  double tol_linear = 1e-12;
  int max_iterations = 200;
  double damping = 1.0;
  /// Bound on tw_residual checked before a solve is reported as successful.
  double residual_tol = 1e-9;

  /// Throws InvalidArgument.
  void validate() const;
};

struct ResidualPair {
  Profile R;  ///< (Q_eps[W0] - B_eps W0) / eps^2
  Profile S;  ///< P_eps[W0]
};

ResidualPair residuals(const ChainModel& model, const Grid& grid, double eps);
double residual_norm(const ResidualPair& pair);

/// N_eps[V] = (P_eps[W0 + eps^2 V] - P_eps[W0]) / eps^2
Profile apply_N(const ChainModel& model, double eps, const Profile& v, const Profile& w0);

/// Switches for the V-dependent terms of F_eps (test hooks).
struct FixedPointTerms {
  bool quadratic = true;  ///< eps^2 Q_eps[V]
  bool remainder = true;  ///< eps^2 N_eps[V]
};

/// Everything F_eps needs, factorized once.
class FixedPointProblem {
 public:
  using Terms = FixedPointTerms;

  FixedPointProblem(const ChainModel& model, const Grid& grid, double eps, double tol_linear = 1e-12,
                    Terms terms = {});

  const ChainModel& model() const { return inverse_.op().model(); }
  const Grid& grid() const { return inverse_.op().grid(); }
  double epsilon() const { return inverse_.op().epsilon(); }
  double tol_linear() const { return tol_linear_; }
  const Profile& kdv_wave() const { return inverse_.op().kdv_wave(); }
  const ResidualPair& residual_pair() const { return residuals_; }
  const EvenInverse& linear_inverse() const { return inverse_; }
  Terms terms() const { return terms_; }

 private:
  EvenInverse inverse_;
  ResidualPair residuals_;
  double tol_linear_;
  Terms terms_;
};

/// One application of F_eps to an even corrector.
Profile fixed_point_map(const FixedPointProblem& problem, const Profile& v);

struct WaveDiagnostics {
  int iterations = 0;
  double final_increment = 0.0;
  std::vector<double> increments;
  double tw_residual = 0.0;
  double corrector_norm = 0.0;
  double sigma_min = 0.0;
  /// NaN when the fit window is empty.
  double tail_decay_rate = 0.0;
  double residual_norm_RS = 0.0;
  bool unimodal = false;
  double evenness_defect = 0.0;
  double min_value = 0.0;
  /// max_m sup |m eps^2 A_{m eps} W|; above 1 the higher-order bounds are outside their range.
  double strain_amplitude = 0.0;
  bool regime_warning = false;
};

struct WaveSolution {
  ChainModel model;
  Grid grid;
  double epsilon;
  double wave_speed_sq;
  Profile W0;
  Profile V;
  Profile W;
  WaveDiagnostics diagnostics;
};

/// Iterates from V = 0.  Throws NoConvergence, NearSingular, DomainTooSmall.
WaveSolution solve_wave(const ChainModel& model, const Grid& grid, const SolveConfig& config);
WaveSolution solve_wave(const FixedPointProblem& problem, const SolveConfig& config);

/// || Lin[W'] - c_eps^2 W' ||_2 / || W' ||_2 with
/// Lin[V] = sum_m m^2 A_{m eps} Phi''_m(m eps^2 A_{m eps} W) A_{m eps} V.
double eigen_identity_check(const ChainModel& model, double eps, double wave_speed_sq, const Profile& w);
double eigen_identity_check(const WaveSolution& solution);

/// Decay rate lambda of W ~ exp(-lambda |x|), fitted where 1e-10 < W < 1e-4.
/// Throws EmptyWindow.
double measure_tail_decay(const Profile& w);

/// Monotone away from the peak up to a small relative slack.
bool is_unimodal(const Profile& w);

struct SweepRow {
  double epsilon = 0.0;
  std::optional<double> l2_error;
  std::optional<double> sup_error;
  std::optional<double> order_l2;
  std::optional<double> order_sup;
  int iterations = 0;
  double tw_residual = 0.0;
  double sigma_min = 0.0;
  double residual_norm_RS = 0.0;
  std::optional<double> tail_rate;
  double corrector_norm = 0.0;
  /// "error:<Name>" when the row's solve failed.
  std::optional<std::string> error;
};

/// Rows in input order; NearSingular / NoConvergence become row markers.
std::vector<SweepRow> convergence_sweep(const ChainModel& model, const Grid& grid,
                                        const std::vector<double>& eps_list, const SolveConfig& config);

/// log(e_coarse / e_fine) / log(eps_coarse / eps_fine)
double empirical_order(double eps_coarse, double e_coarse, double eps_fine, double e_fine);

struct DirectIterationReport {
  Profile W;
  std::vector<double> increments;
};

/// Experimental: W <- B_eps^{-1}(Q_eps[W] + eps^2 P_eps[W]) for a fixed number
/// of steps.  No convergence is claimed; W = 0 and the traveling wave are
/// both fixed points.
DirectIterationReport direct_iteration(const ChainModel& model, double eps, const Profile& start, int steps);

}  // namespace chainwave

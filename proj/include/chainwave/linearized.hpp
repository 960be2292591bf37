#pragma once

// Linearization of the rescaled traveling wave equation around the KdV wave:
//   L_eps V = B_eps V - M_eps V,
//   M_eps V = 2 sum_m beta_m m^3 A_{m eps}((A_{m eps} W0)(A_{m eps} V)),
// with eps = 0 standing for the limit L_0 = B_0 - 2 (sum beta_m m^3) W0.
//
// L_eps is symmetric but indefinite (one negative even direction), so it is
// inverted on the even subspace by dense factorization in the orthonormal
// cosine basis e_0..e_{N/2}.

#include <Eigen/Dense>

#include <vector>

#include "chainwave/chain_model.hpp"
#include "chainwave/grid.hpp"
#include "chainwave/operators.hpp"

namespace chainwave {

/// Singular-value floor below which the even-subspace solve is refused.
inline constexpr double kNearSingularThreshold = 1e-8;

class LinearizedOperator {
 public:
  /// `disabled` zeroes M_eps (test hook), leaving the diagonal B_eps.
  enum class Coupling { full, disabled };

  /// eps == 0 builds the limit pair L_0 / M_0.
  LinearizedOperator(ChainModel model, Grid grid, double eps, Coupling coupling = Coupling::full);

  const ChainModel& model() const { return model_; }
  const Grid& grid() const { return grid_; }
  double epsilon() const { return eps_; }
  bool is_limit() const { return eps_ == 0.0; }
  Coupling coupling() const { return coupling_; }

  const Profile& kdv_wave() const { return w0_; }
  /// A_{m eps} W0 for m = 1..M (W0 itself in the limit).
  const std::vector<Profile>& averaged_profiles() const { return averaged_; }
  const std::vector<MultiplierOperator<double>>& averages() const { return averages_; }
  const MultiplierOperator<double>& b() const { return b_; }

 private:
  ChainModel model_;
  Grid grid_;
  double eps_;
  Coupling coupling_;
  Profile w0_;
  std::vector<MultiplierOperator<double>> averages_;
  std::vector<Profile> averaged_;
  MultiplierOperator<double> b_;
};

Profile apply_M(const LinearizedOperator& op, const Profile& v);
Profile apply_L(const LinearizedOperator& op, const Profile& v);

// Orthonormal cosine basis of the even subspace.
Index even_dimension(const Grid& grid);
Profile even_basis_function(const Grid& grid, Index n);
Vector<double> even_coefficients(const Profile& f);
Profile from_even_coefficients(const Grid& grid, const Vector<double>& coefficients);

struct EvenMatrix {
  Eigen::MatrixXd matrix;   ///< symmetrized representation of L_eps on the even subspace
  double asymmetry_defect;  ///< max |A - A^T| before symmetrization
};

EvenMatrix assemble_even_matrix(const LinearizedOperator& op);

/// Factorized L_eps restricted to even functions.  Built once per
/// (model, grid, eps) and reused across solves.
class EvenInverse {
 public:
  explicit EvenInverse(LinearizedOperator op);

  const LinearizedOperator& op() const { return op_; }
  const EvenMatrix& assembled() const { return matrix_; }
  /// min |lambda| of the symmetric even-subspace matrix.
  double sigma_min() const { return sigma_min_; }

  /// V even with ||L V - G||_2 <= tol max(1, ||G||_2).
  /// Throws NotEven, NearSingular or NoConvergence.
  Profile solve(const Profile& g, double tol) const;

 private:
  LinearizedOperator op_;
  EvenMatrix matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double sigma_min_;
};

Profile solve_L(const LinearizedOperator& op, const Profile& g, double tol);
double smallest_singular_value(const LinearizedOperator& op);

}  // namespace chainwave

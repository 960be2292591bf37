#include "chainwave/linearized.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "chainwave/nonlinear.hpp"

namespace chainwave {

namespace {

MultiplierOperator<double> linear_part(const ChainModel& model, const Grid& grid, double eps) {
  return eps == 0.0 ? b0_operator(model, grid) : b_operator(model, grid, eps);
}

double basis_weight(const Grid& grid, Index n) {
  const double l = grid.half_length();
  return (n == 0 || n == grid.size() / 2) ? 1.0 / std::sqrt(2.0 * l) : 1.0 / std::sqrt(l);
}

}  // namespace

LinearizedOperator::LinearizedOperator(ChainModel model, Grid grid, double eps, Coupling coupling)
    : model_(std::move(model)),
      grid_(std::move(grid)),
      eps_(eps),
      coupling_(coupling),
      w0_(kdv_profile(model_, grid_)),
      b_(MultiplierOperator<double>::identity(grid_)) {
  if (eps < 0.0 || !std::isfinite(eps)) throw Error(ErrorKind::InvalidArgument, "epsilon must be non-negative");
  b_ = linear_part(model_, grid_, eps_);
  if (eps_ > 0.0) {
    averages_ = averaging_family(model_, grid_, eps_);
    for (const auto& a : averages_) averaged_.push_back(apply(a, w0_).with_parity(Parity::even));
  } else {
    averaged_.assign(static_cast<std::size_t>(model_.range()), w0_);
  }
}

Profile apply_M(const LinearizedOperator& op, const Profile& v) {
  require_same_grid(op.grid(), v.grid());
  const auto& model = op.model();
  const Parity hint = v.parity();
  if (op.coupling() == LinearizedOperator::Coupling::disabled) return Profile::zero(op.grid()).with_parity(hint);
  if (op.is_limit()) return (2.0 * quadratic_weight(model)) * hadamard(op.kdv_wave(), v).with_parity(hint);
  Vector<double> acc = Vector<double>::Zero(v.size());
  for (int m = 1; m <= model.range(); ++m) {
    const auto idx = static_cast<std::size_t>(m - 1);
    const auto& a = op.averages()[idx];
    const Profile product = hadamard(op.averaged_profiles()[idx], apply(a, v));
    acc += 2.0 * model.beta(m) * m * m * m * apply(a, product).values();
  }
  return {op.grid(), std::move(acc), hint};
}

Profile apply_L(const LinearizedOperator& op, const Profile& v) {
  return (apply(op.b(), v) - apply_M(op, v)).with_parity(v.parity());
}

Index even_dimension(const Grid& grid) { return grid.size() / 2 + 1; }

Profile even_basis_function(const Grid& grid, Index n) {
  if (n < 0 || n >= even_dimension(grid)) throw Error(ErrorKind::InvalidArgument, "even basis index out of range");
  const double w = basis_weight(grid, n);
  Vector<double> v(grid.size());
  // Integer phase keeps the samples exactly even: k x_i = pi n (i - N/2) / (N/2).
  const Index half = grid.size() / 2;
  for (Index i = 0; i < grid.size(); ++i) {
    const Index p = ((n * (i - half)) % (2 * half) + 2 * half) % (2 * half);
    v[i] = w * std::cos(detail::pi<double> * double(p) / double(half));
  }
  return {grid, std::move(v), Parity::even};
}

Vector<double> even_coefficients(const Profile& f) {
  const auto& grid = f.grid();
  const Spectrum<double> s = forward(f);
  const Index dim = even_dimension(grid);
  Vector<double> c(dim);
  for (Index n = 0; n < dim; ++n) c[n] = basis_weight(grid, n) * s[n].real();
  return c;
}

Profile from_even_coefficients(const Grid& grid, const Vector<double>& coefficients) {
  const Index dim = even_dimension(grid);
  if (coefficients.size() != dim) throw Error(ErrorKind::GridMismatch, "even coefficient count does not match grid");
  const Index n = grid.size();
  const double l = grid.half_length();
  ComplexVector<double> c = ComplexVector<double>::Zero(n);
  c[0] = 2.0 * l * basis_weight(grid, 0) * coefficients[0];
  c[n / 2] = 2.0 * l * basis_weight(grid, n / 2) * coefficients[n / 2];
  for (Index j = 1; j < n / 2; ++j) {
    const double v = l * basis_weight(grid, j) * coefficients[j];
    c[j] = v;
    c[n - j] = v;
  }
  return inverse(Spectrum<double>(grid, std::move(c)), Parity::even);
}

EvenMatrix assemble_even_matrix(const LinearizedOperator& op) {
  const auto& grid = op.grid();
  const Index dim = even_dimension(grid);
  Eigen::MatrixXd a(dim, dim);
  for (Index n = 0; n < dim; ++n) {
    const Profile e = even_basis_function(grid, n);
    a.col(n) = -even_coefficients(apply_M(op, e));
    a(n, n) += op.b().symbol()[n];
  }
  const double defect = (a - a.transpose()).cwiseAbs().maxCoeff();
  Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  return {std::move(sym), defect};
}

EvenInverse::EvenInverse(LinearizedOperator op)
    : op_(std::move(op)), matrix_(assemble_even_matrix(op_)), lu_(matrix_.matrix) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix_.matrix, Eigen::EigenvaluesOnly);
  sigma_min_ = es.eigenvalues().cwiseAbs().minCoeff();
}

Profile EvenInverse::solve(const Profile& g, double tol) const {
  require_same_grid(op_.grid(), g.grid());
  if (!is_even(g)) throw Error(ErrorKind::NotEven, "right-hand side is not even (defect " +
                                                       std::to_string(evenness_defect(g)) + ")");
  if (sigma_min_ < kNearSingularThreshold)
    throw Error(ErrorKind::NearSingular,
                "smallest singular value " + std::to_string(sigma_min_) + " of the even-subspace operator");
  const Vector<double> rhs = even_coefficients(g);
  Vector<double> x = lu_.solve(rhs);
  for (int sweep = 0; sweep < 2; ++sweep) x += lu_.solve(rhs - matrix_.matrix * x);
  Profile v = from_even_coefficients(op_.grid(), x);
  const double residual = l2_norm(apply_L(op_, v) - g);
  if (!(residual <= tol * std::max(1.0, l2_norm(g))))
    throw Error(ErrorKind::NoConvergence, "linear residual " + std::to_string(residual) + " exceeds tolerance");
  return v;
}

Profile solve_L(const LinearizedOperator& op, const Profile& g, double tol) { return EvenInverse(op).solve(g, tol); }

double smallest_singular_value(const LinearizedOperator& op) {
  const EvenMatrix m = assemble_even_matrix(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

}  // namespace chainwave

#pragma once

// Fourier-multiplier operators acting on grid functions: the interval average
// A_eta, spectral translations and difference quotients, the auxiliary operator
// B_eps with its limit B_0, the band cut-off Pi_eps and the von Neumann series
// for B_eps^{-1}.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <utility>

#include "chainwave/chain_model.hpp"
#include "chainwave/grid.hpp"

namespace chainwave {

/// sin(z) / z with the removable singularity resolved by its series.
template <typename Scalar>
Scalar sinc(Scalar z) {
  if (std::abs(z) < Scalar(1e-4)) {
    const Scalar z2 = z * z;
    return Scalar(1) - z2 / Scalar(6) + z2 * z2 / Scalar(120);
  }
  return std::sin(z) / z;
}

/// 1 - sinc(z)^2, accurate for small z where the direct form cancels.
template <typename Scalar>
Scalar one_minus_sinc_sq(Scalar z) {
  if (std::abs(z) < Scalar(1e-2)) {
    // 1 - sinc^2 = z^2/3 - 2 z^4/45 + z^6/315 - ...
    const Scalar z2 = z * z;
    return z2 * (Scalar(1) / Scalar(3) - z2 * (Scalar(2) / Scalar(45) - z2 * (Scalar(1) / Scalar(315) - z2 * Scalar(2) / Scalar(14175))));
  }
  const Scalar s = sinc(z);
  return (Scalar(1) - s) * (Scalar(1) + s);
}

template <typename Scalar>
class MultiplierOperator {
 public:
  MultiplierOperator(SpectralGrid<Scalar> grid, Vector<Scalar> symbol, std::string name)
      : grid_(std::move(grid)), symbol_(std::move(symbol)), name_(std::move(name)) {
    if (symbol_.size() != grid_.size()) throw Error(ErrorKind::GridMismatch, "symbol length does not match the grid");
    if (!symbol_.allFinite()) throw Error(ErrorKind::InvalidArgument, "symbol has non-finite values");
  }

  template <typename F>
  static MultiplierOperator from_symbol(const SpectralGrid<Scalar>& grid, F&& symbol, std::string name) {
    Vector<Scalar> s(grid.size());
    for (Index j = 0; j < grid.size(); ++j) s[j] = symbol(grid.wavenumber(j));
    return MultiplierOperator(grid, std::move(s), std::move(name));
  }

  static MultiplierOperator identity(const SpectralGrid<Scalar>& grid) {
    return MultiplierOperator(grid, Vector<Scalar>::Ones(grid.size()), "id");
  }

  const SpectralGrid<Scalar>& grid() const { return grid_; }
  const Vector<Scalar>& symbol() const { return symbol_; }
  const std::string& name() const { return name_; }

  /// True when s(k) = s(-k) on every paired slot.
  bool symbol_is_even() const {
    const Index n = grid_.size();
    for (Index j = 1; j < n / 2; ++j)
      if (symbol_[j] != symbol_[n - j]) return false;
    return true;
  }

 private:
  SpectralGrid<Scalar> grid_;
  Vector<Scalar> symbol_;
  std::string name_;
};

template <typename Scalar>
GridFunction<Scalar> apply(const MultiplierOperator<Scalar>& op, const GridFunction<Scalar>& f) {
  require_same_grid(op.grid(), f.grid());
  const Parity hint = op.symbol_is_even() ? f.parity() : Parity::none;
  return detail::filter(f, [&](Index j) { return std::complex<Scalar>(op.symbol()[j]); }, hint);
}

/// Diagonal composition: symbol product.
template <typename Scalar>
MultiplierOperator<Scalar> operator*(const MultiplierOperator<Scalar>& a, const MultiplierOperator<Scalar>& b) {
  require_same_grid(a.grid(), b.grid());
  return {a.grid(), a.symbol().cwiseProduct(b.symbol()), a.name() + "*" + b.name()};
}

/// A_eta: average over [x - eta/2, x + eta/2], symbol sinc(eta k / 2).
template <typename Scalar>
MultiplierOperator<Scalar> averaging_operator(const SpectralGrid<Scalar>& grid, Scalar eta) {
  if (!(eta > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "averaging width must be positive");
  return MultiplierOperator<Scalar>::from_symbol(
      grid, [eta](Scalar k) { return sinc(eta * k / Scalar(2)); }, "A(" + std::to_string(double(eta)) + ")");
}

/// f(x + shift) for the band-limited interpolant of f.
template <typename Scalar>
GridFunction<Scalar> translate(const GridFunction<Scalar>& f, Scalar shift) {
  const auto& grid = f.grid();
  return detail::filter(
      f,
      [&](Index j) -> std::complex<Scalar> {
        const Scalar k = grid.wavenumber(j);
        // The unpaired Nyquist mode keeps only its cosine part so the output stays real.
        if (j == grid.nyquist_slot()) return std::complex<Scalar>(std::cos(k * shift));
        return std::polar(Scalar(1), k * shift);
      },
      Parity::none);
}

/// Gauss-Legendre rule on [-1, 1] via the Golub-Welsch eigenproblem.
template <typename Scalar>
std::pair<Vector<Scalar>, Vector<Scalar>> gauss_legendre(int points) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix jacobi = Matrix::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    const Scalar b = Scalar(k) / std::sqrt(Scalar(4 * k * k - 1));
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(jacobi);
  Vector<Scalar> nodes = es.eigenvalues();
  Vector<Scalar> weights = (Scalar(2) * es.eigenvectors().row(0).array().square()).matrix().transpose();
  return {nodes, weights};
}

/// Direct evaluation of (1/eta) int_{x-eta/2}^{x+eta/2} f by Gauss-Legendre
/// quadrature, sampling f through band-limited translation.  Independent of
/// the sinc symbol; accurate while eta times the band limit of f stays well
/// below the number of quadrature points.
template <typename Scalar>
GridFunction<Scalar> averaging_direct(Scalar eta, const GridFunction<Scalar>& f, int points = 64) {
  if (!(eta > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "averaging width must be positive");
  const auto [nodes, weights] = gauss_legendre<Scalar>(points);
  Vector<Scalar> acc = Vector<Scalar>::Zero(f.size());
  for (int q = 0; q < points; ++q) acc += (weights[q] / Scalar(2)) * translate(f, nodes[q] * eta / Scalar(2)).values();
  return {f.grid(), std::move(acc), f.parity()};
}

/// (f(x + shift) - f(x)) / shift; a negative shift gives the backward quotient.
template <typename Scalar>
GridFunction<Scalar> discrete_gradient(const GridFunction<Scalar>& f, Scalar shift) {
  if (shift == Scalar(0)) throw Error(ErrorKind::InvalidArgument, "difference quotient needs a non-zero shift");
  return (Scalar(1) / shift) * (translate(f, shift) - f);
}

// --- B_eps and B_0 ---------------------------------------------------------

/// b_eps(k) = 1 + sum_m alpha_m m^2 (1 - sinc^2(m k eps / 2)) / eps^2
template <typename Scalar>
Scalar b_symbol(const ChainModel& model, Scalar eps, Scalar k) {
  Scalar acc = 1;
  for (int m = 1; m <= model.range(); ++m) {
    const Scalar mm = m;
    acc += Scalar(model.alpha(m)) * mm * mm * one_minus_sinc_sq(mm * k * eps / Scalar(2)) / (eps * eps);
  }
  return acc;
}

/// b_0(k) = 1 + (sum_m alpha_m m^4 / 12) k^2
template <typename Scalar>
Scalar b0_symbol(const ChainModel& model, Scalar k) {
  Scalar s4 = 0;
  for (int m = 1; m <= model.range(); ++m) s4 += Scalar(model.alpha(m)) * Scalar(m * m * m * m);
  return Scalar(1) + s4 / Scalar(12) * k * k;
}

template <typename Scalar>
MultiplierOperator<Scalar> b_operator(const ChainModel& model, const SpectralGrid<Scalar>& grid, Scalar eps) {
  if (!(eps > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  return MultiplierOperator<Scalar>::from_symbol(grid, [&](Scalar k) { return b_symbol(model, eps, k); }, "B_eps");
}

template <typename Scalar>
MultiplierOperator<Scalar> b0_operator(const ChainModel& model, const SpectralGrid<Scalar>& grid) {
  return MultiplierOperator<Scalar>::from_symbol(grid, [&](Scalar k) { return b0_symbol(model, k); }, "B_0");
}

/// Symbol inverse; b_eps >= 1 so the division is always safe.
template <typename Scalar>
GridFunction<Scalar> invert_b(const ChainModel& model, const SpectralGrid<Scalar>& grid, Scalar eps,
                              const GridFunction<Scalar>& g) {
  const auto b = b_operator(model, grid, eps);
  return apply(MultiplierOperator<Scalar>(grid, b.symbol().cwiseInverse(), "B_eps^-1"), g);
}

template <typename Scalar>
GridFunction<Scalar> invert_b0(const ChainModel& model, const SpectralGrid<Scalar>& grid,
                               const GridFunction<Scalar>& g) {
  const auto b = b0_operator(model, grid);
  return apply(MultiplierOperator<Scalar>(grid, b.symbol().cwiseInverse(), "B_0^-1"), g);
}

/// Pi_eps: keeps |k| <= 4 / eps (closed band edge).
template <typename Scalar>
MultiplierOperator<Scalar> cutoff_operator(const SpectralGrid<Scalar>& grid, Scalar eps) {
  if (!(eps > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  const Scalar edge = Scalar(4) / eps;
  return MultiplierOperator<Scalar>::from_symbol(
      grid, [edge](Scalar k) { return std::abs(k) <= edge ? Scalar(1) : Scalar(0); }, "Pi_eps");
}

template <typename Scalar>
GridFunction<Scalar> cutoff(const SpectralGrid<Scalar>& grid, Scalar eps, const GridFunction<Scalar>& f) {
  return apply(cutoff_operator(grid, eps), f);
}

/// Partial sum eps^2 sum_{i<terms} I^i / (eps^2 + c0^2)^{i+1} f of the von
/// Neumann series, with I = sum_m alpha_m m^2 A_{m eps}^2 applied term by term.
template <typename Scalar>
GridFunction<Scalar> von_neumann_inverse(const ChainModel& model, const SpectralGrid<Scalar>& grid, Scalar eps,
                                         const GridFunction<Scalar>& f, int terms) {
  if (!(eps > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  if (terms < 1) throw Error(ErrorKind::InvalidArgument, "von Neumann series needs at least one term");
  require_same_grid(grid, f.grid());
  std::vector<MultiplierOperator<Scalar>> averages;
  Scalar c0_sq = 0;
  for (int m = 1; m <= model.range(); ++m) {
    averages.push_back(averaging_operator(grid, Scalar(m) * eps));
    c0_sq += Scalar(model.alpha(m)) * Scalar(m * m);
  }
  const Scalar denom = eps * eps + c0_sq;
  GridFunction<Scalar> term = (Scalar(1) / denom) * f;
  GridFunction<Scalar> sum = term;
  for (int i = 1; i < terms; ++i) {
    Vector<Scalar> next = Vector<Scalar>::Zero(f.size());
    for (int m = 1; m <= model.range(); ++m) {
      const auto& a = averages[static_cast<std::size_t>(m - 1)];
      next += Scalar(model.alpha(m)) * Scalar(m * m) * apply(a, apply(a, term)).values();
    }
    term = GridFunction<Scalar>(grid, next / denom, f.parity());
    sum = sum + term;
  }
  return (eps * eps) * sum;
}

}  // namespace chainwave

#pragma once

// Periodic spectral grid on [-L, L), sampled profiles and their transforms.
//
// Conventions
//   nodes        x_i = -L + i h,           h = 2L / N,  i = 0..N-1
//   wavenumbers  k_n = pi n / L,           n = -N/2..N/2-1
//   forward      c_n = h sum_i f_i exp(-i k_n x_i)      (approximates the
//                continuum Fourier integral)
//   inverse      f_i = (1 / 2L) sum_n c_n exp(i k_n x_i)
//
// Spectra are stored in FFT order: storage slot j holds n = j for j < N/2 and
// n = j - N otherwise.  The Nyquist slot j = N/2 has no partner; real-valued
// results treat it through its cosine part.

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "chainwave/error.hpp"

namespace chainwave {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

enum class Parity { none, even, odd };

namespace detail {

template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine() {
  // The engine caches twiddle tables; one per thread keeps transforms reentrant.
  thread_local Eigen::FFT<Scalar> engine;
  return engine;
}

template <typename Scalar>
inline constexpr Scalar pi = std::numbers::pi_v<Scalar>;

}  // namespace detail

template <typename Scalar>
class SpectralGrid {
 public:
  SpectralGrid(Scalar half_length, Index num_points) : half_length_(half_length), size_(num_points) {
    if (!(half_length > Scalar(0)) || !std::isfinite(half_length))
      throw Error(ErrorKind::InvalidArgument, "grid half_length must be positive");
    if (num_points < 16 || num_points % 2 != 0)
      throw Error(ErrorKind::InvalidArgument, "grid num_points must be even and at least 16");
  }

  Scalar half_length() const { return half_length_; }
  Index size() const { return size_; }
  Scalar spacing() const { return Scalar(2) * half_length_ / Scalar(size_); }
  Scalar length() const { return Scalar(2) * half_length_; }

  Scalar node(Index i) const { return -half_length_ + Scalar(i) * spacing(); }

  Vector<Scalar> nodes() const {
    Vector<Scalar> x(size_);
    for (Index i = 0; i < size_; ++i) x[i] = node(i);
    return x;
  }

  /// Signed mode number n stored in FFT slot j.
  Index mode_index(Index j) const { return j < size_ / 2 ? j : j - size_; }

  Scalar wavenumber(Index j) const { return detail::pi<Scalar> * Scalar(mode_index(j)) / half_length_; }

  Vector<Scalar> wavenumbers() const {
    Vector<Scalar> k(size_);
    for (Index j = 0; j < size_; ++j) k[j] = wavenumber(j);
    return k;
  }

  Scalar max_wavenumber() const { return detail::pi<Scalar> * Scalar(size_ / 2) / half_length_; }

  Index nyquist_slot() const { return size_ / 2; }

  /// Index of the node mirrored through x = 0.
  Index mirror(Index i) const { return (size_ - i) % size_; }

  bool operator==(const SpectralGrid& other) const = default;

 private:
  Scalar half_length_;
  Index size_;
};

template <typename Scalar>
SpectralGrid<Scalar> make_grid(Scalar half_length, Index num_points) {
  return SpectralGrid<Scalar>(half_length, num_points);
}

template <typename Scalar>
class GridFunction {
 public:
  GridFunction(SpectralGrid<Scalar> grid, Vector<Scalar> values, Parity hint = Parity::none)
      : grid_(std::move(grid)), values_(std::move(values)), parity_(hint) {
    if (values_.size() != grid_.size())
      throw Error(ErrorKind::GridMismatch, "sample count does not match the grid");
    if (!values_.allFinite()) throw Error(ErrorKind::InvalidArgument, "grid function has non-finite samples");
  }

  static GridFunction zero(const SpectralGrid<Scalar>& grid) {
    return GridFunction(grid, Vector<Scalar>::Zero(grid.size()), Parity::even);
  }

  static GridFunction constant(const SpectralGrid<Scalar>& grid, Scalar value) {
    return GridFunction(grid, Vector<Scalar>::Constant(grid.size(), value), Parity::even);
  }

  template <typename F>
  static GridFunction sample(const SpectralGrid<Scalar>& grid, F&& f, Parity hint = Parity::none) {
    Vector<Scalar> v(grid.size());
    for (Index i = 0; i < grid.size(); ++i) v[i] = f(grid.node(i));
    return GridFunction(grid, std::move(v), hint);
  }

  const SpectralGrid<Scalar>& grid() const { return grid_; }
  const Vector<Scalar>& values() const { return values_; }
  Index size() const { return values_.size(); }
  Scalar operator[](Index i) const { return values_[i]; }
  Parity parity() const { return parity_; }

  GridFunction with_parity(Parity hint) const { return GridFunction(grid_, values_, hint); }

 private:
  SpectralGrid<Scalar> grid_;
  Vector<Scalar> values_;
  Parity parity_;
};

template <typename Scalar>
void require_same_grid(const SpectralGrid<Scalar>& a, const SpectralGrid<Scalar>& b) {
  if (!(a == b)) throw Error(ErrorKind::GridMismatch, "operands live on different grids");
}

namespace detail {

inline Parity combine_sum(Parity a, Parity b) { return a == b ? a : Parity::none; }

inline Parity combine_product(Parity a, Parity b) {
  if (a == Parity::none || b == Parity::none) return Parity::none;
  return a == b ? Parity::even : Parity::odd;
}

}  // namespace detail

template <typename Scalar>
GridFunction<Scalar> operator+(const GridFunction<Scalar>& a, const GridFunction<Scalar>& b) {
  require_same_grid(a.grid(), b.grid());
  return {a.grid(), a.values() + b.values(), detail::combine_sum(a.parity(), b.parity())};
}

template <typename Scalar>
GridFunction<Scalar> operator-(const GridFunction<Scalar>& a, const GridFunction<Scalar>& b) {
  require_same_grid(a.grid(), b.grid());
  return {a.grid(), a.values() - b.values(), detail::combine_sum(a.parity(), b.parity())};
}

template <typename Scalar>
GridFunction<Scalar> operator-(const GridFunction<Scalar>& a) {
  return {a.grid(), -a.values(), a.parity()};
}

template <typename Scalar>
GridFunction<Scalar> operator*(Scalar s, const GridFunction<Scalar>& a) {
  return {a.grid(), s * a.values(), a.parity()};
}

template <typename Scalar>
GridFunction<Scalar> operator*(const GridFunction<Scalar>& a, Scalar s) {
  return s * a;
}

/// Pointwise product.
template <typename Scalar>
GridFunction<Scalar> hadamard(const GridFunction<Scalar>& a, const GridFunction<Scalar>& b) {
  require_same_grid(a.grid(), b.grid());
  return {a.grid(), a.values().cwiseProduct(b.values()), detail::combine_product(a.parity(), b.parity())};
}

template <typename Scalar>
GridFunction<Scalar> square(const GridFunction<Scalar>& a) {
  return {a.grid(), a.values().array().square().matrix(), a.parity() == Parity::none ? Parity::none : Parity::even};
}

template <typename Scalar>
class Spectrum {
 public:
  Spectrum(SpectralGrid<Scalar> grid, ComplexVector<Scalar> coefficients)
      : grid_(std::move(grid)), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != grid_.size())
      throw Error(ErrorKind::GridMismatch, "coefficient count does not match the grid");
  }

  const SpectralGrid<Scalar>& grid() const { return grid_; }
  const ComplexVector<Scalar>& coefficients() const { return coefficients_; }
  std::complex<Scalar> operator[](Index j) const { return coefficients_[j]; }

 private:
  SpectralGrid<Scalar> grid_;
  ComplexVector<Scalar> coefficients_;
};

template <typename Scalar>
Spectrum<Scalar> forward(const GridFunction<Scalar>& f) {
  const auto& grid = f.grid();
  const Index n = grid.size();
  ComplexVector<Scalar> c(n);
  detail::fft_engine<Scalar>().fwd(c, f.values());
  // exp(-i k_n x_i) = (-1)^n exp(-2 pi i n i / N) because x_0 = -L.
  const Scalar h = grid.spacing();
  for (Index j = 0; j < n; ++j) c[j] *= (j % 2 == 0 ? h : -h);
  return {grid, std::move(c)};
}

template <typename Scalar>
GridFunction<Scalar> inverse(const Spectrum<Scalar>& s, Parity hint = Parity::none) {
  const auto& grid = s.grid();
  const Index n = grid.size();
  ComplexVector<Scalar> c = s.coefficients();
  const Scalar inv_h = Scalar(1) / grid.spacing();
  for (Index j = 0; j < n; ++j) c[j] *= (j % 2 == 0 ? inv_h : -inv_h);
  ComplexVector<Scalar> out(n);
  detail::fft_engine<Scalar>().inv(out, c);
  return {grid, out.real(), hint};
}

namespace detail {

/// Multiplies every coefficient by symbol(j) and transforms back.
template <typename Scalar, typename Symbol>
GridFunction<Scalar> filter(const GridFunction<Scalar>& f, Symbol&& symbol, Parity hint) {
  Spectrum<Scalar> s = forward(f);
  ComplexVector<Scalar> c = s.coefficients();
  for (Index j = 0; j < c.size(); ++j) c[j] *= symbol(j);
  return inverse(Spectrum<Scalar>(f.grid(), std::move(c)), hint);
}

}  // namespace detail

template <typename Scalar>
Scalar inner_product(const GridFunction<Scalar>& f, const GridFunction<Scalar>& g) {
  require_same_grid(f.grid(), g.grid());
  return f.grid().spacing() * f.values().dot(g.values());
}

/// Rectangle-rule approximation of the L2(R) norm.
template <typename Scalar>
Scalar l2_norm(const GridFunction<Scalar>& f) {
  return std::sqrt(f.grid().spacing()) * f.values().norm();
}

template <typename Scalar>
Scalar sup_norm(const GridFunction<Scalar>& f) {
  return f.values().cwiseAbs().maxCoeff();
}

/// Spectral W^{2,2} norm with weight 1 + k^2 + k^4.
template <typename Scalar>
Scalar sobolev22_norm(const GridFunction<Scalar>& f) {
  const Spectrum<Scalar> s = forward(f);
  const auto& grid = f.grid();
  Scalar acc = 0;
  for (Index j = 0; j < grid.size(); ++j) {
    const Scalar k2 = grid.wavenumber(j) * grid.wavenumber(j);
    acc += (Scalar(1) + k2 + k2 * k2) * std::norm(s[j]);
  }
  return std::sqrt(acc / grid.length());
}

/// max_i |f[i] - f[mirror(i)]|
template <typename Scalar>
Scalar evenness_defect(const GridFunction<Scalar>& f) {
  const auto& grid = f.grid();
  Scalar defect = 0;
  for (Index i = 0; i < grid.size(); ++i) defect = std::max(defect, std::abs(f[i] - f[grid.mirror(i)]));
  return defect;
}

/// Numerical evenness test used wherever evenness is a precondition.
template <typename Scalar>
bool is_even(const GridFunction<Scalar>& f, Scalar rel_tol = Scalar(1e-12)) {
  return evenness_defect(f) <= rel_tol * std::max(Scalar(1), sup_norm(f));
}

template <typename Scalar>
GridFunction<Scalar> project_even(const GridFunction<Scalar>& f) {
  const auto& grid = f.grid();
  Vector<Scalar> g(grid.size());
  for (Index i = 0; i < grid.size(); ++i) g[i] = Scalar(0.5) * (f[i] + f[grid.mirror(i)]);
  return {grid, std::move(g), Parity::even};
}

/// Spectral derivative of order 1..4; the Nyquist mode is dropped for odd orders.
template <typename Scalar>
GridFunction<Scalar> derivative(const GridFunction<Scalar>& f, int order) {
  if (order < 1 || order > 4) throw Error(ErrorKind::InvalidArgument, "derivative order must be in 1..4");
  const auto& grid = f.grid();
  using C = std::complex<Scalar>;
  Parity hint = Parity::none;
  if (f.parity() != Parity::none) {
    const bool flips = order % 2 == 1;
    hint = flips ? (f.parity() == Parity::even ? Parity::odd : Parity::even) : f.parity();
  }
  return detail::filter(
      f,
      [&](Index j) -> C {
        if (order % 2 == 1 && j == grid.nyquist_slot()) return C(0);
        C ik(0, grid.wavenumber(j));
        C out(1);
        for (int p = 0; p < order; ++p) out *= ik;
        return out;
      },
      hint);
}

/// Cumulative trapezoid integral from x_0 = -L.  The result is generally not
/// periodic and must not be fed back into spectral operations.
template <typename Scalar>
GridFunction<Scalar> antiderivative(const GridFunction<Scalar>& f) {
  const auto& grid = f.grid();
  const Scalar h = grid.spacing();
  Vector<Scalar> out(grid.size());
  out[0] = 0;
  for (Index i = 1; i < grid.size(); ++i) out[i] = out[i - 1] + Scalar(0.5) * h * (f[i - 1] + f[i]);
  return {grid, std::move(out), Parity::none};
}

/// Band-limited (trigonometric) interpolation of f at arbitrary points.
template <typename Scalar>
Vector<Scalar> interpolate(const GridFunction<Scalar>& f, std::span<const Scalar> points) {
  const auto& grid = f.grid();
  const Spectrum<Scalar> s = forward(f);
  const Index n = grid.size();
  const Scalar scale = Scalar(1) / grid.length();
  Vector<Scalar> out(static_cast<Index>(points.size()));
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Scalar x = points[p];
    Scalar acc = s[0].real();
    for (Index j = 1; j < n / 2; ++j) acc += Scalar(2) * (s[j] * std::polar(Scalar(1), grid.wavenumber(j) * x)).real();
    acc += s[n / 2].real() * std::cos(grid.max_wavenumber() * x);
    out[static_cast<Index>(p)] = scale * acc;
  }
  return out;
}

/// Exact primitive U(x) = int_{-L}^{x} f of the band-limited interpolant.  The
/// mean mode contributes a linear ramp, so U is evaluated pointwise rather than
/// returned as a (periodic) grid function.
template <typename Scalar>
Vector<Scalar> primitive_at(const GridFunction<Scalar>& f, std::span<const Scalar> points) {
  const auto& grid = f.grid();
  const Spectrum<Scalar> s = forward(f);
  const Index n = grid.size();
  const Scalar scale = Scalar(1) / grid.length();
  const Scalar left = -grid.half_length();
  Vector<Scalar> out(static_cast<Index>(points.size()));
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Scalar x = points[p];
    Scalar acc = s[0].real() * (x - left);
    for (Index j = 1; j < n / 2; ++j) {
      const Scalar k = grid.wavenumber(j);
      const std::complex<Scalar> diff = std::polar(Scalar(1), k * x) - std::polar(Scalar(1), k * left);
      acc += Scalar(2) * (s[j] * diff / std::complex<Scalar>(0, k)).real();
    }
    out[static_cast<Index>(p)] = scale * acc;
  }
  return out;
}

/// Zero-padded (3/2-rule) square, free of aliasing for band-limited input.
template <typename Scalar>
GridFunction<Scalar> dealiased_square(const GridFunction<Scalar>& f) {
  const auto& grid = f.grid();
  const Index n = grid.size();
  const Index m = 3 * n / 2;
  auto& fft = detail::fft_engine<Scalar>();
  ComplexVector<Scalar> c(n);
  fft.fwd(c, f.values());
  ComplexVector<Scalar> padded = ComplexVector<Scalar>::Zero(m);
  for (Index j = 0; j < n / 2; ++j) padded[j] = c[j];
  for (Index j = n / 2 + 1; j < n; ++j) padded[j + (m - n)] = c[j];
  ComplexVector<Scalar> fine(m);
  fft.inv(fine, padded);
  // fine holds (n/m) times the interpolant on the padded grid.
  Vector<Scalar> sq = (fine.real() * (Scalar(m) / Scalar(n))).array().square().matrix();
  ComplexVector<Scalar> cs(m);
  fft.fwd(cs, sq);
  ComplexVector<Scalar> back = ComplexVector<Scalar>::Zero(n);
  const Scalar shrink = Scalar(n) / Scalar(m);
  for (Index j = 0; j < n / 2; ++j) back[j] = cs[j] * shrink;
  for (Index j = n / 2 + 1; j < n; ++j) back[j] = cs[j + (m - n)] * shrink;
  ComplexVector<Scalar> out(n);
  fft.inv(out, back);
  const Parity hint = f.parity() == Parity::none ? Parity::none : Parity::even;
  return {grid, out.real().eval(), hint};
}

using Grid = SpectralGrid<double>;
using Profile = GridFunction<double>;

}  // namespace chainwave

#pragma once

// Atomic chain with interactions up to M neighbours.  Each bond force splits as
//   Phi'_m(r) = alpha_m r + beta_m r^2 + Psi'_m(r),   Psi'_m(r) = O(r^3).

#include <string>
#include <string_view>
#include <vector>

namespace chainwave {

enum class HigherOrderFamily {
  none,            ///< Psi'_m = 0
  cubic,           ///< Psi'_m(r) = delta_m r^3
  toda_remainder,  ///< Psi'_m(r) = s_m (e^r - 1 - r - r^2/2)
};

std::string_view family_name(HigherOrderFamily family);
HigherOrderFamily parse_family(std::string_view name);

class ChainModel {
 public:
  /// Validates positivity of alpha and beta and the higher-order parameters.
  /// For `toda_remainder` an empty parameter list means unit scale.
  ChainModel(std::vector<double> alpha, std::vector<double> beta,
             HigherOrderFamily family = HigherOrderFamily::none, std::vector<double> psi_params = {});

  /// Test hook: skips the positivity checks so that linear chains (beta = 0)
  /// can be built for dispersion tests.
  static ChainModel unchecked(std::vector<double> alpha, std::vector<double> beta,
                              HigherOrderFamily family = HigherOrderFamily::none,
                              std::vector<double> psi_params = {});

  int range() const { return static_cast<int>(alpha_.size()); }

  // Coefficient accessors are 1-based in the neighbour distance m.
  double alpha(int m) const { return alpha_.at(static_cast<std::size_t>(m - 1)); }
  double beta(int m) const { return beta_.at(static_cast<std::size_t>(m - 1)); }
  double psi_param(int m) const;
  const std::vector<double>& alphas() const { return alpha_; }
  const std::vector<double>& betas() const { return beta_; }
  const std::vector<double>& psi_params() const { return psi_params_; }
  HigherOrderFamily family() const { return family_; }

  /// Constant in |Psi''_m(r)| <= gamma_m r^2 for |r| <= 1.
  double gamma(int m) const;

  double psi(int m, double r) const;
  double psi_prime(int m, double r) const;
  double psi_second(int m, double r) const;

  /// Phi'_m(r)
  double force(int m, double r) const;
  /// Phi''_m(r)
  double stiffness(int m, double r) const;
  /// Phi_m(r), normalised to Phi_m(0) = 0.
  double potential(int m, double r) const;

  bool operator==(const ChainModel&) const = default;

 private:
  ChainModel() = default;
  void check_index(int m) const;

  std::vector<double> alpha_;
  std::vector<double> beta_;
  HigherOrderFamily family_ = HigherOrderFamily::none;
  std::vector<double> psi_params_;
};

double force(const ChainModel& model, int m, double r);

struct KdvConstants {
  double c0_sq;  ///< squared sound speed, sum alpha_m m^2
  double d1;     ///< 12 / sum alpha_m m^4
  double d2;     ///< 12 sum beta_m m^3 / sum alpha_m m^4
};

KdvConstants kdv_constants(const ChainModel& model);

/// sum_m beta_m m^3
double quadratic_weight(const ChainModel& model);

/// Largest sampled ratio |Psi''_m(r)| / (gamma_m r^2) over r in [-1, 1] and all m.
/// Values <= 1 confirm the growth bound used in the fixed-point estimates.
double higher_order_bound_ratio(const ChainModel& model, int samples = 2001);

}  // namespace chainwave

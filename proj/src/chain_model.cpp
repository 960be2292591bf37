#include "chainwave/chain_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chainwave/error.hpp"

namespace chainwave {

namespace {

// e^r - 1 - r - r^2/2 and relatives lose all digits for the tiny strains of
// near-sonic waves, so small arguments go through the Taylor tail.
double exp_tail(double r, int from_order) {
  if (std::abs(r) < 0.1) {
    double term = 1.0;
    for (int k = 1; k <= from_order; ++k) term *= r / k;
    double sum = 0.0;
    for (int k = from_order; k < from_order + 30; ++k) {
      sum += term;
      term *= r / (k + 1);
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  double value = std::expm1(r);
  double term = r;
  for (int k = 1; k < from_order; ++k) {
    value -= term;
    term *= r / (k + 1);
  }
  return value;
}

}  // namespace

std::string_view family_name(HigherOrderFamily family) {
  switch (family) {
    case HigherOrderFamily::none: return "none";
    case HigherOrderFamily::cubic: return "cubic";
    case HigherOrderFamily::toda_remainder: return "toda";
  }
  return "none";
}

HigherOrderFamily parse_family(std::string_view name) {
  if (name == "none") return HigherOrderFamily::none;
  if (name == "cubic") return HigherOrderFamily::cubic;
  if (name == "toda" || name == "toda-remainder") return HigherOrderFamily::toda_remainder;
  throw Error(ErrorKind::InvalidArgument, "unknown higher-order force family '" + std::string(name) + "'");
}

ChainModel ChainModel::unchecked(std::vector<double> alpha, std::vector<double> beta, HigherOrderFamily family,
                                 std::vector<double> psi_params) {
  ChainModel model;
  model.alpha_ = std::move(alpha);
  model.beta_ = std::move(beta);
  model.family_ = family;
  model.psi_params_ = std::move(psi_params);
  if (model.alpha_.empty() || model.alpha_.size() != model.beta_.size())
    throw Error(ErrorKind::InvalidArgument, "alpha and beta must be non-empty and of equal length");
  if (family == HigherOrderFamily::toda_remainder && model.psi_params_.empty())
    model.psi_params_.assign(model.alpha_.size(), 1.0);
  if (family != HigherOrderFamily::none && model.psi_params_.size() != model.alpha_.size())
    throw Error(ErrorKind::InvalidArgument, "higher-order parameters must have one entry per neighbour distance");
  if (family == HigherOrderFamily::none && !model.psi_params_.empty())
    throw Error(ErrorKind::InvalidArgument, "family 'none' takes no parameters");
  return model;
}

ChainModel::ChainModel(std::vector<double> alpha, std::vector<double> beta, HigherOrderFamily family,
                       std::vector<double> psi_params) {
  *this = unchecked(std::move(alpha), std::move(beta), family, std::move(psi_params));
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    if (!(alpha_[i] > 0.0) || !std::isfinite(alpha_[i]))
      throw Error(ErrorKind::InvalidArgument,
                  "alpha_" + std::to_string(i + 1) + " must be positive (standing assumption violated)");
    if (!(beta_[i] > 0.0) || !std::isfinite(beta_[i]))
      throw Error(ErrorKind::InvalidArgument,
                  "beta_" + std::to_string(i + 1) + " must be positive (standing assumption violated)");
  }
  for (double p : psi_params_)
    if (!std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "higher-order parameters must be finite");
}

void ChainModel::check_index(int m) const {
  if (m < 1 || m > range())
    throw Error(ErrorKind::InvalidArgument, "neighbour index " + std::to_string(m) + " out of range");
}

double ChainModel::psi_param(int m) const {
  check_index(m);
  return family_ == HigherOrderFamily::none ? 0.0 : psi_params_[static_cast<std::size_t>(m - 1)];
}

double ChainModel::gamma(int m) const {
  const double p = psi_param(m);
  switch (family_) {
    case HigherOrderFamily::none: return 0.0;
    case HigherOrderFamily::cubic: return 3.0 * std::abs(p);
    case HigherOrderFamily::toda_remainder: return (std::numbers::e - 2.0) * std::abs(p);
  }
  return 0.0;
}

double ChainModel::psi(int m, double r) const {
  const double p = psi_param(m);
  switch (family_) {
    case HigherOrderFamily::none: return 0.0;
    case HigherOrderFamily::cubic: return 0.25 * p * r * r * r * r;
    case HigherOrderFamily::toda_remainder: return p * exp_tail(r, 4);
  }
  return 0.0;
}

double ChainModel::psi_prime(int m, double r) const {
  const double p = psi_param(m);
  switch (family_) {
    case HigherOrderFamily::none: return 0.0;
    case HigherOrderFamily::cubic: return p * r * r * r;
    case HigherOrderFamily::toda_remainder: return p * exp_tail(r, 3);
  }
  return 0.0;
}

double ChainModel::psi_second(int m, double r) const {
  const double p = psi_param(m);
  switch (family_) {
    case HigherOrderFamily::none: return 0.0;
    case HigherOrderFamily::cubic: return 3.0 * p * r * r;
    case HigherOrderFamily::toda_remainder: return p * exp_tail(r, 2);
  }
  return 0.0;
}

double ChainModel::force(int m, double r) const {
  check_index(m);
  return alpha(m) * r + beta(m) * r * r + psi_prime(m, r);
}

double ChainModel::stiffness(int m, double r) const {
  check_index(m);
  return alpha(m) + 2.0 * beta(m) * r + psi_second(m, r);
}

double ChainModel::potential(int m, double r) const {
  check_index(m);
  return 0.5 * alpha(m) * r * r + beta(m) * r * r * r / 3.0 + psi(m, r);
}

double force(const ChainModel& model, int m, double r) { return model.force(m, r); }

KdvConstants kdv_constants(const ChainModel& model) {
  double s2 = 0.0, s4 = 0.0, b3 = 0.0;
  for (int m = 1; m <= model.range(); ++m) {
    const double mm = m;
    s2 += model.alpha(m) * mm * mm;
    s4 += model.alpha(m) * mm * mm * mm * mm;
    b3 += model.beta(m) * mm * mm * mm;
  }
  return {s2, 12.0 / s4, 12.0 * b3 / s4};
}

double quadratic_weight(const ChainModel& model) {
  double b3 = 0.0;
  for (int m = 1; m <= model.range(); ++m) b3 += model.beta(m) * m * m * m;
  return b3;
}

double higher_order_bound_ratio(const ChainModel& model, int samples) {
  double worst = 0.0;
  for (int m = 1; m <= model.range(); ++m) {
    const double g = model.gamma(m);
    for (int s = 0; s < samples; ++s) {
      const double r = -1.0 + 2.0 * s / (samples - 1);
      if (r == 0.0) continue;
      const double lhs = std::abs(model.psi_second(m, r));
      if (lhs == 0.0) continue;
      worst = std::max(worst, lhs / (g * r * r));
    }
  }
  return worst;
}

}  // namespace chainwave

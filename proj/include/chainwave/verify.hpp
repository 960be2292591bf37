#pragma once

// Named numerical properties of the model, operators and linearization, plus
// the measurement helpers they are built from.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "chainwave/chain_model.hpp"
#include "chainwave/grid.hpp"

namespace chainwave {

struct PropertyResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string detail;
};

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// max / min of positive samples.
double spread(const std::vector<double>& values);

/// sum_{|n| <= max_mode} of Gaussian-weighted Fourier modes, normalized to unit l2 norm.
/// Even output uses cosines only.
Profile random_bandlimited(const Grid& grid, Index max_mode, std::mt19937_64& rng, Parity parity = Parity::none);

/// sup |W0'' - d1 W0 + d2 W0^2| with spectral derivatives.
double kdv_ode_residual(const ChainModel& model, const Grid& grid);

/// || A_eta f (symbol) - A_eta f (quadrature) ||_2
double averaging_route_gap(double eta, const Profile& f);

/// Slopes of ||A W - W||_2 and ||A W - W - eta^2/24 W''||_2 against eta.
std::pair<double, double> averaging_orders(const Profile& w, const std::vector<double>& etas);

/// max over `samples` random even G of
/// (||Pi B^-1 G||_{2,2} + eps^-2 ||(1 - Pi) B^-1 G||_2) / ||G||_2.
double inverse_stability_ratio(const ChainModel& model, const Grid& grid, double eps, int samples,
                               std::uint64_t seed);

/// Geometric decay rate of the von Neumann partial-sum error against the
/// exact symbol inverse applied to g, averaged over the last `window` terms.
double von_neumann_rate(const ChainModel& model, double eps, const Profile& g, int terms = 60, int window = 10);

/// c0^2 / (eps^2 + c0^2)
double von_neumann_predicted_rate(const ChainModel& model, double eps);

struct SuiteOptions {
  std::uint64_t seed = 1234567;
  int stability_samples = 20;
};

/// Runs every property on (model, grid); order and names are fixed.
std::vector<PropertyResult> run_property_suite(const ChainModel& model, const Grid& grid, SuiteOptions options = {});

}  // namespace chainwave

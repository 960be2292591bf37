#pragma once

// Run configuration.  JSON with a closed schema: unknown keys, wrong types and
// violated positivity constraints are ConfigError.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chainwave/chain_model.hpp"
#include "chainwave/grid.hpp"
#include "chainwave/solver.hpp"

namespace chainwave {

enum class OutputFormat { csv, json };

struct ModelConfig {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::string psi_family = "none";
  std::vector<double> psi_params;
};

struct GridConfig {
  std::optional<double> half_length;
  Index num_points = 4096;
};

struct SolverConfig {
  std::optional<double> epsilon;
  std::vector<double> epsilon_list;
  std::optional<double> tol;
  std::optional<double> tol_linear;
  std::optional<int> max_iter;
  std::optional<double> damping;
  std::optional<double> residual_tol;
};

struct SimConfig {
  std::optional<Index> particles;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<double> threshold;
};

struct OutputConfig {
  std::optional<std::string> path;
  std::optional<OutputFormat> format;
};

struct RunConfig {
  ModelConfig model;
  GridConfig grid;
  SolverConfig solver;
  std::optional<SimConfig> sim;
  OutputConfig output;
};

/// Throws ConfigError.
RunConfig parse_config(const std::string& text);
/// Throws IoError (unreadable) or ConfigError.
RunConfig load_config(const std::filesystem::path& path);
/// Canonical JSON; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

ChainModel build_model(const RunConfig& config);
/// half_length defaults to 30 / sqrt(d1).
Grid build_grid(const RunConfig& config, const ChainModel& model);
/// Solver controls with `epsilon` as the single epsilon (not validated here).
SolveConfig build_solve_config(const RunConfig& config, double epsilon);

std::string_view format_name(OutputFormat format);
OutputFormat parse_format(std::string_view name);

}  // namespace chainwave

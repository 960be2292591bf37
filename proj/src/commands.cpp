#include "chainwave/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "chainwave/lattice.hpp"
#include "chainwave/verify.hpp"

namespace chainwave {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

OutputFormat effective_format(const RunConfig& config, const CommandOptions& options) {
  if (options.format) return *options.format;
  return config.output.format.value_or(OutputFormat::csv);
}

std::optional<std::string> effective_path(const RunConfig& config, const CommandOptions& options) {
  if (options.output) return options.output;
  return config.output.path;
}

/// Opens the destination up front so an unwritable path fails before any work.
class Sink {
 public:
  Sink(const std::optional<std::string>& path, std::ostream& fallback) : fallback_(fallback) {
    if (path) {
      file_.open(*path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error(ErrorKind::IoError, "cannot open output file '" + *path + "'");
      path_ = *path;
    }
  }

  void write(const std::string& text) {
    std::ostream& os = file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_;
    os << text;
    os.flush();
    if (!os) throw Error(ErrorKind::IoError, "write failed for '" + (path_.empty() ? "<stdout>" : path_) + "'");
  }

  const std::string& path() const { return path_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
  std::string path_;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  if (!f) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolverError;
  }
}

double single_epsilon(const RunConfig& config, const CommandOptions& options) {
  if (options.epsilon) {
    if (!(*options.epsilon > 0.0 && *options.epsilon <= 1.0))
      throw Error(ErrorKind::ConfigError, "--epsilon must lie in (0, 1]");
    return *options.epsilon;
  }
  if (!config.solver.epsilon) throw Error(ErrorKind::ConfigError, "solver.epsilon is required (or pass --epsilon)");
  return *config.solver.epsilon;
}

void warn_regime(const WaveSolution& s, const CommandOptions& options, std::ostream& err) {
  if (s.diagnostics.regime_warning && !options.quiet)
    err << "warning: strain amplitude " << format_number(s.diagnostics.strain_amplitude)
        << " exceeds 1; higher-order force bounds are outside their assumed range\n";
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidArgument: return kExitConfigError;
    case ErrorKind::IoError: return kExitIoError;
    case ErrorKind::WindowOverflow: return kExitWindowError;
    default: return kExitSolverError;
  }
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out(kSweepHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_number(r.epsilon);
    if (r.error) {
      out += "," + *r.error + ",,,,,,,,\n";
      continue;
    }
    out += "," + cell(r.l2_error) + "," + cell(r.sup_error) + "," + cell(r.order_l2) + "," + cell(r.order_sup);
    out += "," + std::to_string(r.iterations) + "," + format_number(r.tw_residual) + "," + format_number(r.sigma_min);
    out += "," + format_number(r.residual_norm_RS) + "," + cell(r.tail_rate) + "\n";
  }
  return out;
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json o;
    o["epsilon"] = r.epsilon;
    o["l2_error"] = optional_number(r.l2_error);
    o["sup_error"] = optional_number(r.sup_error);
    o["order_l2"] = optional_number(r.order_l2);
    o["order_sup"] = optional_number(r.order_sup);
    o["iterations"] = r.error ? json(nullptr) : json(r.iterations);
    o["tw_residual"] = r.error ? json(nullptr) : json(r.tw_residual);
    o["sigma_min"] = r.error ? json(nullptr) : json(r.sigma_min);
    o["residual_norm_RS"] = r.error ? json(nullptr) : json(r.residual_norm_RS);
    o["tail_rate"] = optional_number(r.tail_rate);
    o["corrector_norm"] = r.error ? json(nullptr) : json(r.corrector_norm);
    o["error"] = r.error ? json(*r.error) : json(nullptr);
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::string profile_csv(const WaveSolution& s) {
  std::string out(kProfileHeader);
  out += '\n';
  for (Index i = 0; i < s.grid.size(); ++i) {
    out += format_number(s.grid.node(i)) + "," + format_number(s.W0[i]) + "," + format_number(s.W[i]) + "," +
           format_number(s.V[i]) + "\n";
  }
  return out;
}

std::string solution_json(const WaveSolution& s, bool with_profiles) {
  const auto& d = s.diagnostics;
  json j;
  j["epsilon"] = s.epsilon;
  j["wave_speed_sq"] = s.wave_speed_sq;
  j["grid"] = {{"half_length", s.grid.half_length()}, {"num_points", s.grid.size()}};
  j["diagnostics"] = {
      {"iterations", d.iterations},
      {"final_increment", d.final_increment},
      {"increments", d.increments},
      {"tw_residual", d.tw_residual},
      {"corrector_norm", d.corrector_norm},
      {"sigma_min", d.sigma_min},
      {"tail_decay_rate", finite_or_null(d.tail_decay_rate)},
      {"residual_norm_RS", d.residual_norm_RS},
      {"unimodal", d.unimodal},
      {"evenness_defect", d.evenness_defect},
      {"min_value", d.min_value},
      {"strain_amplitude", d.strain_amplitude},
      {"regime_warning", d.regime_warning},
      {"l2_error", l2_norm(s.W - s.W0)},
      {"sup_error", sup_norm(s.W - s.W0)},
  };
  if (with_profiles) {
    std::vector<double> x(static_cast<std::size_t>(s.grid.size()));
    for (Index i = 0; i < s.grid.size(); ++i) x[static_cast<std::size_t>(i)] = s.grid.node(i);
    auto as_vec = [](const Profile& p) { return std::vector<double>(p.values().begin(), p.values().end()); };
    j["profile"] = {{"x", x}, {"W0", as_vec(s.W0)}, {"W_eps", as_vec(s.W)}, {"V_eps", as_vec(s.V)}};
  }
  return j.dump(2) + "\n";
}

int cmd_solve(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const double eps = single_epsilon(config, options);
    const ChainModel model = build_model(config);
    const Grid grid = build_grid(config, model);
    const SolveConfig sc = build_solve_config(config, eps);
    sc.validate();
    const auto path = effective_path(config, options);
    Sink sink(path, out);
    const WaveSolution sol = solve_wave(model, grid, sc);
    warn_regime(sol, options, err);
    if (effective_format(config, options) == OutputFormat::json) {
      sink.write(solution_json(sol, true));
    } else {
      sink.write(profile_csv(sol));
      if (path)
        write_file(*path + ".diagnostics.json", solution_json(sol, false));
      else if (!options.quiet)
        err << solution_json(sol, false);
    }
    return int(kExitOk);
  });
}

int cmd_sweep(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (options.epsilon) throw Error(ErrorKind::ConfigError, "--epsilon does not apply to sweep");
    const auto& list = config.solver.epsilon_list;
    if (list.size() < 2) throw Error(ErrorKind::ConfigError, "sweep needs solver.epsilon_list with at least 2 entries");
    for (std::size_t i = 1; i < list.size(); ++i)
      if (!(list[i] < list[i - 1])) throw Error(ErrorKind::ConfigError, "solver.epsilon_list must be strictly decreasing");
    const ChainModel model = build_model(config);
    const Grid grid = build_grid(config, model);
    SolveConfig sc = build_solve_config(config, list.front());
    sc.validate();
    Sink sink(effective_path(config, options), out);
    const auto rows = convergence_sweep(model, grid, list, sc);
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.error ? 1 : 0;
    if (failed > 0 && !options.quiet)
      err << "warning: " << failed << " of " << rows.size() << " sweep rows failed and are marked in the table\n";
    sink.write(effective_format(config, options) == OutputFormat::json ? sweep_json(rows) : sweep_csv(rows));
    return int(kExitOk);
  });
}

int cmd_simulate(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!config.sim) throw Error(ErrorKind::ConfigError, "simulate requires a 'sim' block");
    const double eps = single_epsilon(config, options);
    const ChainModel model = build_model(config);
    const Grid grid = build_grid(config, model);
    const SolveConfig sc = build_solve_config(config, eps);
    sc.validate();
    Sink sink(effective_path(config, options), out);
    const WaveSolution sol = solve_wave(model, grid, sc);
    warn_regime(sol, options, err);
    const auto& sim = *config.sim;
    const Index J = sim.particles.value_or(default_particle_count(sol));
    const double dt = sim.dt.value_or(0.02 / std::sqrt(kdv_constants(model).c0_sq));
    const double T = sim.horizon.value_or(travel_time(sol, 5.0));
    const double threshold = sim.threshold.value_or(0.02);
    const TransportReport rep = simulate_transport(sol, J, T, dt);
    const bool passed = rep.transport_error <= threshold;
    if (effective_format(config, options) == OutputFormat::json) {
      json j{{"J", rep.particles},
             {"dt", rep.dt},
             {"T", rep.horizon},
             {"steps", rep.steps},
             {"transport_error", rep.transport_error},
             {"energy_drift", rep.energy_drift},
             {"momentum_drift", rep.momentum_drift},
             {"threshold", threshold},
             {"passed", passed}};
      sink.write(j.dump(2) + "\n");
    } else {
      sink.write(std::string(kTransportHeader) + "\n" + std::to_string(rep.particles) + "," + format_number(rep.dt) +
                 "," + format_number(rep.horizon) + "," + format_number(rep.transport_error) + "," +
                 format_number(rep.energy_drift) + "," + format_number(rep.momentum_drift) + "\n");
    }
    if (!passed) {
      err << "transport error " << format_number(rep.transport_error) << " exceeds threshold "
          << format_number(threshold) << "\n";
      return int(kExitPropertyFailure);
    }
    return int(kExitOk);
  });
}

int cmd_verify(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ChainModel model = build_model(config);
    const Grid grid = build_grid(config, model);
    Sink sink(effective_path(config, options), out);
    const auto results = run_property_suite(model, grid);
    std::vector<std::string> failing;
    for (const auto& r : results)
      if (!r.passed) failing.push_back(r.name);
    if (effective_format(config, options) == OutputFormat::json) {
      json arr = json::array();
      for (const auto& r : results)
        arr.push_back({{"name", r.name}, {"passed", r.passed}, {"value", finite_or_null(r.value)}, {"detail", r.detail}});
      sink.write(json{{"properties", arr}, {"failing", failing}}.dump(2) + "\n");
    } else {
      std::ostringstream s;
      for (const auto& r : results) s << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
      s << (results.size() - failing.size()) << "/" << results.size() << " properties passed\n";
      sink.write(s.str());
    }
    if (!failing.empty()) {
      err << "failing properties:";
      for (const auto& n : failing) err << " " << n;
      err << "\n";
      return int(kExitPropertyFailure);
    }
    return int(kExitOk);
  });
}

int run_command(std::string_view command, const std::filesystem::path& config_path, const CommandOptions& options,
                std::ostream& out, std::ostream& err) {
  RunConfig config;
  const int loaded = guarded(err, [&] {
    config = load_config(config_path);
    return int(kExitOk);
  });
  if (loaded != kExitOk) return loaded;
  if (command == "solve") return cmd_solve(config, options, out, err);
  if (command == "sweep") return cmd_sweep(config, options, out, err);
  if (command == "simulate") return cmd_simulate(config, options, out, err);
  if (command == "verify") return cmd_verify(config, options, out, err);
  err << "error: unknown command '" << command << "'\n";
  return kExitConfigError;
}

}  // namespace chainwave

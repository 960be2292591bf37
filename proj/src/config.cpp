#include "chainwave/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "json.hpp"

#include "chainwave/lattice.hpp"
#include "chainwave/nonlinear.hpp"

namespace chainwave {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

void require_object(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) fail("unknown key '" + where + "." + key + "'");
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where + " must be finite");
  return v;
}

long long get_integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where + " must be an integer");
  return j.get<long long>();
}

std::vector<double> get_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where + " must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

double positive(double v, const std::string& where) {
  if (!(v > 0.0)) fail(where + " must be positive");
  return v;
}

ModelConfig parse_model(const json& j) {
  require_object(j, "model", {"alpha", "beta", "psi"});
  if (!j.contains("alpha") || !j.contains("beta")) fail("model requires 'alpha' and 'beta'");
  ModelConfig m;
  m.alpha = get_list(j["alpha"], "model.alpha");
  m.beta = get_list(j["beta"], "model.beta");
  if (j.contains("psi")) {
    const json& p = j["psi"];
    require_object(p, "model.psi", {"family", "params"});
    if (!p.contains("family") || !p["family"].is_string()) fail("model.psi.family must be a string");
    m.psi_family = p["family"].get<std::string>();
    if (p.contains("params")) m.psi_params = get_list(p["params"], "model.psi.params");
  }
  return m;
}

GridConfig parse_grid(const json& j) {
  require_object(j, "grid", {"half_length", "num_points"});
  GridConfig g;
  if (j.contains("half_length")) g.half_length = positive(get_number(j["half_length"], "grid.half_length"), "grid.half_length");
  if (j.contains("num_points")) g.num_points = static_cast<Index>(get_integer(j["num_points"], "grid.num_points"));
  return g;
}

SolverConfig parse_solver(const json& j) {
  require_object(j, "solver", {"epsilon", "epsilon_list", "tol", "tol_linear", "max_iter", "damping", "residual_tol"});
  SolverConfig s;
  if (j.contains("epsilon")) s.epsilon = get_number(j["epsilon"], "solver.epsilon");
  if (j.contains("epsilon_list")) s.epsilon_list = get_list(j["epsilon_list"], "solver.epsilon_list");
  if (j.contains("tol")) s.tol = positive(get_number(j["tol"], "solver.tol"), "solver.tol");
  if (j.contains("tol_linear")) s.tol_linear = positive(get_number(j["tol_linear"], "solver.tol_linear"), "solver.tol_linear");
  if (j.contains("max_iter")) {
    const long long it = get_integer(j["max_iter"], "solver.max_iter");
    if (it < 1 || it > 1000000) fail("solver.max_iter must lie in [1, 1e6]");
    s.max_iter = static_cast<int>(it);
  }
  if (j.contains("damping")) s.damping = get_number(j["damping"], "solver.damping");
  if (j.contains("residual_tol"))
    s.residual_tol = positive(get_number(j["residual_tol"], "solver.residual_tol"), "solver.residual_tol");
  auto check_eps = [](double e, const std::string& where) {
    if (!(e > 0.0 && e <= 1.0)) fail(where + " must lie in (0, 1]");
  };
  if (s.epsilon) check_eps(*s.epsilon, "solver.epsilon");
  for (std::size_t i = 0; i < s.epsilon_list.size(); ++i)
    check_eps(s.epsilon_list[i], "solver.epsilon_list[" + std::to_string(i) + "]");
  if (s.damping && !(*s.damping > 0.0 && *s.damping <= 1.0)) fail("solver.damping must lie in (0, 1]");
  return s;
}

SimConfig parse_sim(const json& j) {
  require_object(j, "sim", {"particles", "dt", "horizon", "threshold"});
  SimConfig s;
  if (j.contains("particles")) s.particles = static_cast<Index>(get_integer(j["particles"], "sim.particles"));
  if (j.contains("dt")) s.dt = positive(get_number(j["dt"], "sim.dt"), "sim.dt");
  if (j.contains("horizon")) {
    const double t = get_number(j["horizon"], "sim.horizon");
    if (t < 0.0) fail("sim.horizon must be non-negative");
    s.horizon = t;
  }
  if (j.contains("threshold")) s.threshold = positive(get_number(j["threshold"], "sim.threshold"), "sim.threshold");
  return s;
}

OutputConfig parse_output(const json& j) {
  require_object(j, "output", {"path", "format"});
  OutputConfig o;
  if (j.contains("path")) {
    if (!j["path"].is_string()) fail("output.path must be a string");
    o.path = j["path"].get<std::string>();
  }
  if (j.contains("format")) {
    if (!j["format"].is_string()) fail("output.format must be a string");
    o.format = parse_format(j["format"].get<std::string>());
  }
  return o;
}

// Cross-field checks that need the model.
void validate(const RunConfig& c) {
  const ChainModel model = build_model(c);
  const Grid grid = build_grid(c, model);
  (void)grid;
  if (c.sim) {
    if (c.sim->particles && *c.sim->particles < 2 * model.range() + 2)
      fail("sim.particles must be at least 2M + 2 = " + std::to_string(2 * model.range() + 2));
    if (c.sim->dt && *c.sim->dt > max_time_step(model))
      fail("sim.dt exceeds the stability guard 0.1/c0 = " + std::to_string(max_time_step(model)));
  }
}

}  // namespace

std::string_view format_name(OutputFormat format) { return format == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  fail("output format must be 'csv' or 'json', got '" + std::string(name) + "'");
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  require_object(j, "config", {"model", "grid", "solver", "sim", "output"});
  if (!j.contains("model")) fail("config requires a 'model' block");
  RunConfig c;
  c.model = parse_model(j["model"]);
  if (j.contains("grid")) c.grid = parse_grid(j["grid"]);
  if (j.contains("solver")) c.solver = parse_solver(j["solver"]);
  if (j.contains("sim")) c.sim = parse_sim(j["sim"]);
  if (j.contains("output")) c.output = parse_output(j["output"]);
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  json j;
  j["model"]["alpha"] = c.model.alpha;
  j["model"]["beta"] = c.model.beta;
  j["model"]["psi"]["family"] = c.model.psi_family;
  j["model"]["psi"]["params"] = c.model.psi_params;
  if (c.grid.half_length) j["grid"]["half_length"] = *c.grid.half_length;
  j["grid"]["num_points"] = c.grid.num_points;
  json s = json::object();
  if (c.solver.epsilon) s["epsilon"] = *c.solver.epsilon;
  if (!c.solver.epsilon_list.empty()) s["epsilon_list"] = c.solver.epsilon_list;
  if (c.solver.tol) s["tol"] = *c.solver.tol;
  if (c.solver.tol_linear) s["tol_linear"] = *c.solver.tol_linear;
  if (c.solver.max_iter) s["max_iter"] = *c.solver.max_iter;
  if (c.solver.damping) s["damping"] = *c.solver.damping;
  if (c.solver.residual_tol) s["residual_tol"] = *c.solver.residual_tol;
  j["solver"] = s;
  if (c.sim) {
    json m = json::object();
    if (c.sim->particles) m["particles"] = *c.sim->particles;
    if (c.sim->dt) m["dt"] = *c.sim->dt;
    if (c.sim->horizon) m["horizon"] = *c.sim->horizon;
    if (c.sim->threshold) m["threshold"] = *c.sim->threshold;
    j["sim"] = m;
  }
  json o = json::object();
  if (c.output.path) o["path"] = *c.output.path;
  if (c.output.format) o["format"] = std::string(format_name(*c.output.format));
  j["output"] = o;
  return j.dump(2) + "\n";
}

ChainModel build_model(const RunConfig& config) {
  try {
    return ChainModel(config.model.alpha, config.model.beta, parse_family(config.model.psi_family),
                      config.model.psi_params);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    throw Error(ErrorKind::ConfigError, std::string("model: ") + e.what());
  }
}

Grid build_grid(const RunConfig& config, const ChainModel& model) {
  try {
    return Grid(config.grid.half_length.value_or(default_half_length(model)), config.grid.num_points);
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, std::string("grid: ") + e.what());
  }
}

SolveConfig build_solve_config(const RunConfig& config, double epsilon) {
  SolveConfig s;
  s.epsilon = epsilon;
  const auto& c = config.solver;
  if (c.tol) s.tol_fixed_point = *c.tol;
  if (c.tol_linear) s.tol_linear = *c.tol_linear;
  if (c.max_iter) s.max_iterations = *c.max_iter;
  if (c.damping) s.damping = *c.damping;
  if (c.residual_tol) s.residual_tol = *c.residual_tol;
  return s;
}

}  // namespace chainwave

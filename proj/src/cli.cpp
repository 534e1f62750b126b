#include "dph/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "dph/acceptance.hpp"
#include "dph/closed_form.hpp"
#include "dph/mixed_state.hpp"
#include "dph/model.hpp"

namespace dph::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw config_error(msg); }

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) fail(where + ": unknown key '" + it.key() + "'");
  }
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + ": expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where + ": expected an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where + ": expected a string");
  return v.get<std::string>();
}

Complex as_amplitude(const json& v, const std::string& where) {
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return Complex(v[0].get<double>(), v[1].get<double>());
  }
  fail(where + ": expected a number or [re, im]");
}

Range as_range(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where + ": expected an object {from, to, points}");
  check_keys(v, where, {"from", "to", "points"});
  if (!v.contains("from") || !v.contains("to") || !v.contains("points")) {
    fail(where + ": needs from, to and points");
  }
  Range r;
  r.from = as_number(v["from"], where + ".from");
  r.to = as_number(v["to"], where + ".to");
  r.points = as_int(v["points"], where + ".points");
  if (!std::isfinite(r.from) || !std::isfinite(r.to)) fail(where + ": bounds must be finite");
  if (r.points < 2) fail(where + ".points: must be >= 2");
  return r;
}

std::string format_number(double v, int precision) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows, int precision) {
  std::ostringstream os;
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const std::vector<double>& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << format_number(row[i], precision);
    }
    os << "\n";
  }
  return os.str();
}

std::vector<double> grid(const Range& r) {
  std::vector<double> g(r.points);
  for (int i = 0; i < r.points; ++i) {
    g[i] = r.from + (r.to - r.from) * static_cast<double>(i) / (r.points - 1.0);
  }
  return g;
}

// Modes the command will actually use: explicit list, or the midpoint
// discretization of an ohmic spectrum (which then needs num_modes), scaled
// by lambda_scale.
std::vector<BathMode> scaled_modes(const RunConfig& cfg, bool required) {
  std::vector<BathMode> modes;
  if (cfg.has_discrete) {
    modes = cfg.modes;
  } else if (cfg.has_ohmic) {
    if (cfg.ohmic_modes < 1) {
      fail("bath.num_modes: this command needs explicit modes; set num_modes >= 1");
    }
    modes = discretize_ohmic(cfg.spectrum, cfg.ohmic_modes);
  } else if (required) {
    fail("bath: required for this command");
  }
  if (cfg.lambda_scale != 1.0) {
    for (BathMode& m : modes) m.lambda *= cfg.lambda_scale;
  }
  return modes;
}

std::vector<double> loop_times(const RunConfig& cfg) {
  if (cfg.has_T) return {cfg.T};
  if (cfg.has_T_range) return grid(cfg.T_range);
  fail("task: " + cfg.command + " needs T or T_range");
}

CommandOutput cmd_pure_phase(const RunConfig& cfg) {
  const std::vector<double> ts = loop_times(cfg);
  std::vector<std::vector<double>> rows;
  rows.reserve(ts.size());
  if (cfg.has_ohmic && cfg.ohmic_modes == 0) {
    OhmicSpectrum spectrum = cfg.spectrum;  // continuum closed form
    spectrum.epsilon *= cfg.lambda_scale * cfg.lambda_scale;
    for (double T : ts) {
      const PhaseResult r = pure_phase_ohmic(cfg.system, spectrum, cfg.branch, T);
      rows.push_back({T, r.total, r.berry_part, r.env_dynamical_part, r.env_arg_part});
    }
  } else {
    const std::vector<BathMode> modes = scaled_modes(cfg, true);
    for (double T : ts) {
      const PhaseResult r = pure_phase_discrete(cfg.system, modes, cfg.branch, T);
      rows.push_back({T, r.total, r.berry_part, r.env_dynamical_part, r.env_arg_part});
    }
  }
  CommandOutput out;
  out.csv = format_csv({"T", "total", "berry_part", "env_dynamical_part", "env_arg_part"}, rows,
                       cfg.output.precision);
  return out;
}

CommandOutput cmd_mixed_phase(const RunConfig& cfg) {
  if (!cfg.has_init) fail("task: mixed-phase needs c_plus and c_minus");
  const std::vector<double> ts = loop_times(cfg);
  const std::vector<BathMode> modes = scaled_modes(cfg, true);

  std::vector<MixedPhaseDetail> details;
  details.reserve(ts.size());
  for (double T : ts) {
    details.push_back(mixed_phase_detail(cfg.system, modes, cfg.init, T, cfg.steps));
  }

  // Each phase arrives as a principal value; across a sweep, keep the column
  // continuous and report how often a 2 pi correction was needed.
  int corrections = 0;
  std::vector<double> phase(details.size());
  for (size_t i = 0; i < details.size(); ++i) {
    double p = details[i].phase;
    if (i > 0) {
      const double k = std::round((phase[i - 1] - p) / (2.0 * M_PI));
      if (k != 0.0) {
        p += 2.0 * M_PI * k;
        ++corrections;
      }
    }
    phase[i] = p;
  }

  std::vector<std::vector<double>> rows;
  rows.reserve(details.size());
  for (size_t i = 0; i < details.size(); ++i) {
    rows.push_back({ts[i], phase[i], details[i].abs_coherence, details[i].eps_plus,
                    details[i].eps_minus, static_cast<double>(details[i].bridged_samples)});
  }
  CommandOutput out;
  out.csv = format_csv({"T", "phase", "abs_F", "eps_plus", "eps_minus", "bridged_samples"}, rows,
                       cfg.output.precision);
  if (ts.size() > 1) {
    out.note = "unwrap: " + std::to_string(corrections) + " corrections across the sweep\n";
  }
  return out;
}

CommandOutput cmd_decoherence(const RunConfig& cfg) {
  if (!cfg.has_t_grid) fail("task.t_grid: decoherence needs a time grid");
  if (cfg.t_grid.from < 0.0) fail("task.t_grid.from: must be >= 0");
  const std::vector<BathMode> modes = scaled_modes(cfg, true);
  std::vector<std::vector<double>> rows;
  for (double t : grid(cfg.t_grid)) {
    const DecoherenceFactor f = decoherence_factor(cfg.system, modes, t);
    rows.push_back({t, std::exp(-f.exponent_sum), -f.dynamical_angle, f.exponent_sum});
  }
  CommandOutput out;
  out.csv = format_csv({"t", "abs_F", "arg_F_unwrapped", "eta_sum"}, rows, cfg.output.precision);
  return out;
}

CommandOutput cmd_validate(const RunConfig& cfg) {
  AcceptanceOptions opts;
  opts.full = false;
  opts.lambda_scale = cfg.lambda_scale;
  opts.tol_scale = cfg.tol;
  const std::vector<CheckResult> results = run_acceptance(opts);

  std::ostringstream note;
  int passed = 0;
  for (const CheckResult& r : results) {
    char secs[32];
    std::snprintf(secs, sizeof(secs), "%.2f", r.seconds);
    note << r.id << (r.passed ? " PASS " : " FAIL ") << "(" << secs << "s) " << r.label << " -- "
         << r.detail << "\n";
    passed += r.passed ? 1 : 0;
  }
  note << passed << "/" << results.size() << " checks passed\n";

  CommandOutput out;
  out.note = note.str();
  out.exit_code = all_passed(results) ? 0 : 1;
  return out;
}

int thread_count() {
  const char* env = std::getenv("DPH_THREADS");
  if (!env || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 256) {
    fail("DPH_THREADS: must be an integer in [1, 256]");
  }
  return static_cast<int>(v);
}

double evaluate_sweep_point(const RunConfig& cfg, const std::vector<BathMode>& base, double v) {
  SystemParams params = cfg.system;
  std::vector<BathMode> modes = base;
  double T = cfg.has_T ? cfg.T : 0.0;
  if (cfg.parameter == "g") {
    params.g = v;
  } else if (cfg.parameter == "omega") {
    params.omega = v;
  } else if (cfg.parameter == "T") {
    T = v;
  } else {  // "lambda_scale"
    for (BathMode& m : modes) m.lambda *= v;
  }
  if (cfg.quantity == "pure_phase") return pure_phase_discrete(params, modes, cfg.branch, T).total;
  if (cfg.quantity == "mixed_phase") {
    return mixed_geometric_phase(params, modes, cfg.init, T, cfg.steps);
  }
  if (cfg.quantity == "abs_coherence") return std::exp(-eta_sum(modes, params.n, T));
  return long_time_phase(params, modes, cfg.init, T);  // "long_time_phase"
}

CommandOutput cmd_sweep(const RunConfig& cfg) {
  static const std::set<std::string> kParameters = {"g", "omega", "T", "lambda_scale"};
  static const std::set<std::string> kQuantities = {"pure_phase", "mixed_phase", "abs_coherence",
                                                    "long_time_phase"};
  if (!kParameters.count(cfg.parameter)) {
    fail("task.parameter: must be one of g, omega, T, lambda_scale");
  }
  if (!kQuantities.count(cfg.quantity)) {
    fail("task.quantity: must be one of pure_phase, mixed_phase, abs_coherence, long_time_phase");
  }
  if (!cfg.has_sweep_range) fail("task: sweep needs from, to and points");
  if (cfg.parameter != "T" && !cfg.has_T) fail("task.T: needed when the swept parameter is not T");
  if ((cfg.quantity == "mixed_phase" || cfg.quantity == "long_time_phase") && !cfg.has_init) {
    fail("task: c_plus and c_minus needed for quantity '" + cfg.quantity + "'");
  }

  const std::vector<BathMode> base = scaled_modes(cfg, true);
  const std::vector<double> values = grid(cfg.sweep_range);
  std::vector<double> results(values.size());

  const int threads = std::min<int>(thread_count(), static_cast<int>(values.size()));
  if (threads <= 1) {
    for (size_t i = 0; i < values.size(); ++i) {
      results[i] = evaluate_sweep_point(cfg, base, values[i]);
    }
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (size_t i = w; i < values.size(); i += threads) {
            results[i] = evaluate_sweep_point(cfg, base, values[i]);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::vector<std::vector<double>> rows;
  rows.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) rows.push_back({values[i], results[i]});
  CommandOutput out;
  out.csv = format_csv({cfg.parameter, cfg.quantity}, rows, cfg.output.precision);
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("config: top level must be an object");
  check_keys(root, "config", {"system", "bath", "task", "output"});

  RunConfig cfg;

  if (root.contains("system")) {
    const json& sys = root["system"];
    if (!sys.is_object()) fail("system: expected an object");
    check_keys(sys, "system", {"omega", "g", "n"});
    if (sys.contains("omega")) cfg.system.omega = as_number(sys["omega"], "system.omega");
    if (sys.contains("g")) cfg.system.g = as_number(sys["g"], "system.g");
    if (sys.contains("n")) cfg.system.n = as_int(sys["n"], "system.n");
    try {
      cfg.system.validate();
    } catch (const std::invalid_argument& e) {
      fail(std::string("system: ") + e.what());
    }
  }

  if (root.contains("bath")) {
    const json& bath = root["bath"];
    if (!bath.is_object()) fail("bath: expected an object");
    if (!bath.contains("type")) fail("bath.type: required");
    const std::string type = as_string(bath["type"], "bath.type");
    if (type == "discrete") {
      check_keys(bath, "bath", {"type", "modes"});
      if (!bath.contains("modes") || !bath["modes"].is_array()) {
        fail("bath.modes: expected an array");
      }
      int idx = 0;
      for (const json& m : bath["modes"]) {
        const std::string where = "bath.modes[" + std::to_string(idx) + "]";
        if (!m.is_object()) fail(where + ": expected an object");
        check_keys(m, where, {"omega", "lambda"});
        if (!m.contains("omega") || !m.contains("lambda")) {
          fail(where + ": needs omega and lambda");
        }
        cfg.modes.push_back(
            {as_number(m["omega"], where + ".omega"), as_number(m["lambda"], where + ".lambda")});
        ++idx;
      }
      try {
        validate_bath(cfg.modes);
      } catch (const std::invalid_argument& e) {
        fail(std::string("bath.modes: ") + e.what());
      }
      cfg.has_discrete = true;
    } else if (type == "ohmic") {
      check_keys(bath, "bath", {"type", "epsilon", "omega_c", "num_modes"});
      if (!bath.contains("epsilon") || !bath.contains("omega_c")) {
        fail("bath: ohmic needs epsilon and omega_c");
      }
      cfg.spectrum.epsilon = as_number(bath["epsilon"], "bath.epsilon");
      cfg.spectrum.omega_c = as_number(bath["omega_c"], "bath.omega_c");
      if (bath.contains("num_modes")) {
        cfg.ohmic_modes = as_int(bath["num_modes"], "bath.num_modes");
        if (cfg.ohmic_modes < 0) fail("bath.num_modes: must be >= 0");
      }
      try {
        cfg.spectrum.validate();
      } catch (const std::invalid_argument& e) {
        fail(std::string("bath: ") + e.what());
      }
      cfg.has_ohmic = true;
    } else {
      fail("bath.type: must be 'discrete' or 'ohmic'");
    }
  }

  if (!root.contains("task")) fail("task: required");
  const json& task = root["task"];
  if (!task.is_object()) fail("task: expected an object");
  check_keys(task, "task",
             {"command", "branch", "T", "T_range", "c_plus", "c_minus", "steps", "tol", "t_grid",
              "lambda_scale", "quantity", "parameter", "from", "to", "points"});
  if (!task.contains("command")) fail("task.command: required");
  cfg.command = as_string(task["command"], "task.command");
  static const std::set<std::string> kCommands = {"pure-phase", "mixed-phase", "decoherence",
                                                  "validate", "sweep"};
  if (!kCommands.count(cfg.command)) fail("task.command: unknown command '" + cfg.command + "'");

  if (task.contains("branch")) {
    const std::string b = as_string(task["branch"], "task.branch");
    if (b == "plus") {
      cfg.branch = Branch::plus;
    } else if (b == "minus") {
      cfg.branch = Branch::minus;
    } else {
      fail("task.branch: must be 'plus' or 'minus'");
    }
  }
  if (task.contains("T")) {
    cfg.T = as_number(task["T"], "task.T");
    cfg.has_T = true;
  }
  if (task.contains("T_range")) {
    cfg.T_range = as_range(task["T_range"], "task.T_range");
    cfg.has_T_range = true;
  }
  if (cfg.has_T && cfg.has_T_range) fail("task: give either T or T_range, not both");

  if (task.contains("c_plus") != task.contains("c_minus")) {
    fail("task: c_plus and c_minus must be given together");
  }
  if (task.contains("c_plus")) {
    cfg.init.c_plus = as_amplitude(task["c_plus"], "task.c_plus");
    cfg.init.c_minus = as_amplitude(task["c_minus"], "task.c_minus");
    try {
      cfg.init.validate();
    } catch (const std::invalid_argument&) {
      fail("task: |c_plus|^2 + |c_minus|^2 must be 1 (within 1e-12)");
    }
    cfg.has_init = true;
  }
  if (task.contains("steps")) {
    cfg.steps = as_int(task["steps"], "task.steps");
    if (cfg.steps < 1 || cfg.steps > 10000000) fail("task.steps: must be in [1, 1e7]");
  }
  if (task.contains("tol")) {
    cfg.tol = as_number(task["tol"], "task.tol");
    if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) fail("task.tol: must be finite and > 0");
  }
  if (task.contains("t_grid")) {
    cfg.t_grid = as_range(task["t_grid"], "task.t_grid");
    cfg.has_t_grid = true;
  }
  if (task.contains("lambda_scale")) {
    cfg.lambda_scale = as_number(task["lambda_scale"], "task.lambda_scale");
    if (!std::isfinite(cfg.lambda_scale) || cfg.lambda_scale < 0.0) {
      fail("task.lambda_scale: must be finite and >= 0");
    }
  }
  if (task.contains("quantity")) cfg.quantity = as_string(task["quantity"], "task.quantity");
  if (task.contains("parameter")) cfg.parameter = as_string(task["parameter"], "task.parameter");
  const bool any_sweep = task.contains("from") || task.contains("to") || task.contains("points");
  if (any_sweep) {
    if (!(task.contains("from") && task.contains("to") && task.contains("points"))) {
      fail("task: from, to and points must be given together");
    }
    cfg.sweep_range.from = as_number(task["from"], "task.from");
    cfg.sweep_range.to = as_number(task["to"], "task.to");
    cfg.sweep_range.points = as_int(task["points"], "task.points");
    if (!std::isfinite(cfg.sweep_range.from) || !std::isfinite(cfg.sweep_range.to)) {
      fail("task: sweep bounds must be finite");
    }
    if (cfg.sweep_range.points < 2) fail("task.points: must be >= 2");
    cfg.has_sweep_range = true;
  }

  if (root.contains("output")) {
    const json& out = root["output"];
    if (!out.is_object()) fail("output: expected an object");
    check_keys(out, "output", {"path", "precision"});
    if (out.contains("path")) cfg.output.path = as_string(out["path"], "output.path");
    if (out.contains("precision")) {
      cfg.output.precision = as_int(out["precision"], "output.precision");
      if (cfg.output.precision < 6 || cfg.output.precision > 17) {
        fail("output.precision: must be in [6, 17]");
      }
    }
  }
  return cfg;
}

std::string dump_config(const RunConfig& cfg) {
  json root;
  root["system"] = {{"omega", cfg.system.omega}, {"g", cfg.system.g}, {"n", cfg.system.n}};
  if (cfg.has_discrete) {
    json modes = json::array();
    for (const BathMode& m : cfg.modes) {
      modes.push_back({{"omega", m.omega}, {"lambda", m.lambda}});
    }
    root["bath"] = {{"type", "discrete"}, {"modes", modes}};
  } else if (cfg.has_ohmic) {
    root["bath"] = {{"type", "ohmic"},
                    {"epsilon", cfg.spectrum.epsilon},
                    {"omega_c", cfg.spectrum.omega_c},
                    {"num_modes", cfg.ohmic_modes}};
  }
  json task;
  task["command"] = cfg.command;
  task["branch"] = cfg.branch == Branch::plus ? "plus" : "minus";
  if (cfg.has_T) task["T"] = cfg.T;
  if (cfg.has_T_range) {
    task["T_range"] = {
        {"from", cfg.T_range.from}, {"to", cfg.T_range.to}, {"points", cfg.T_range.points}};
  }
  if (cfg.has_init) {
    task["c_plus"] = {cfg.init.c_plus.real(), cfg.init.c_plus.imag()};
    task["c_minus"] = {cfg.init.c_minus.real(), cfg.init.c_minus.imag()};
  }
  task["steps"] = cfg.steps;
  task["tol"] = cfg.tol;
  if (cfg.has_t_grid) {
    task["t_grid"] = {
        {"from", cfg.t_grid.from}, {"to", cfg.t_grid.to}, {"points", cfg.t_grid.points}};
  }
  task["lambda_scale"] = cfg.lambda_scale;
  if (!cfg.quantity.empty()) task["quantity"] = cfg.quantity;
  if (!cfg.parameter.empty()) task["parameter"] = cfg.parameter;
  if (cfg.has_sweep_range) {
    task["from"] = cfg.sweep_range.from;
    task["to"] = cfg.sweep_range.to;
    task["points"] = cfg.sweep_range.points;
  }
  root["task"] = task;
  json out;
  if (!cfg.output.path.empty()) out["path"] = cfg.output.path;
  out["precision"] = cfg.output.precision;
  root["output"] = out;
  return root.dump(2) + "\n";
}

CommandOutput execute(const RunConfig& cfg) {
  if (cfg.command == "pure-phase") return cmd_pure_phase(cfg);
  if (cfg.command == "mixed-phase") return cmd_mixed_phase(cfg);
  if (cfg.command == "decoherence") return cmd_decoherence(cfg);
  if (cfg.command == "validate") return cmd_validate(cfg);
  if (cfg.command == "sweep") return cmd_sweep(cfg);
  fail("task.command: unknown command '" + cfg.command + "'");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"loop phases of a dephasing dressed pair: closed forms, mixed-state phase, "
               "numeric reference"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  int steps_override = 0;
  double tol_override = 0.0;
  bool dump = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"pure-phase", "branch loop phase (closed form), one T or a T sweep"},
      {"mixed-phase", "kinematic phase of the decohering superposition"},
      {"decoherence", "off-diagonal factor F(t) on a time grid"},
      {"validate", "run the built-in acceptance checks"},
      {"sweep", "scan one parameter, one quantity per row"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_override, "output CSV path (overrides output.path)");
    sub->add_option("--steps", steps_override, "path samples (overrides task.steps)");
    sub->add_option("--tol", tol_override, "tolerance knob (overrides task.tol)");
    sub->add_flag("--dump-config", dump, "print the effective config as JSON and exit");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();

  try {
    std::string text;
    if (config_path.empty()) {
      if (command != "validate") throw config_error("--config is required for " + command);
      text = R"({"task": {"command": "validate"}})";
    } else {
      std::ifstream in(config_path);
      if (!in) throw config_error("cannot open config file: " + config_path);
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }

    RunConfig cfg = parse_config(text);
    if (cfg.command != command) {
      throw config_error("task.command is '" + cfg.command + "' but the subcommand is '" +
                         command + "'");
    }
    if (!out_override.empty()) cfg.output.path = out_override;
    if (steps_override > 0) cfg.steps = steps_override;
    if (tol_override > 0.0) cfg.tol = tol_override;

    if (dump) {
      std::cout << dump_config(cfg);
      return 0;
    }

    const CommandOutput result = execute(cfg);
    if (!result.csv.empty()) {
      if (cfg.output.path.empty()) {
        std::cout << result.csv;
      } else {
        std::ofstream out(cfg.output.path, std::ios::binary);
        if (!out) throw config_error("cannot open output file: " + cfg.output.path);
        out << result.csv;
        if (!out.good()) throw config_error("failed while writing: " + cfg.output.path);
      }
    }
    if (!result.note.empty()) std::cout << result.note;
    return result.exit_code;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const degeneracy_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const convergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace dph::cli

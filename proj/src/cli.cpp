// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#include "modred/cli.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "modred/error.hpp"

namespace modred
{

namespace fs = std::filesystem;

namespace
{

[[noreturn]] void bad_config(const std::string &what) { throw Error("bad-config", what); }

void check_keys(const Json &obj, const std::string &where, std::initializer_list<const char *> keys)
{
  if (!obj.is_object()) {
    bad_config(where + " must be an object");
  }
  const std::set<std::string> known(keys.begin(), keys.end());
  for (const auto &item : obj.items()) {
    if (!known.count(item.key())) {
      bad_config("unknown key " + where + "." + item.key());
    }
  }
}

double get_number(const Json &obj, const char *key, const std::string &where, double fallback)
{
  if (!obj.contains(key)) {
    return fallback;
  }
  if (!obj[key].is_number()) {
    bad_config(where + "." + key + " must be a number");
  }
  return obj[key].get<double>();
}

long long get_integer(const Json &obj, const char *key, const std::string &where,
                      long long fallback)
{
  if (!obj.contains(key)) {
    return fallback;
  }
  if (!obj[key].is_number_integer()) {
    bad_config(where + "." + key + " must be an integer");
  }
  return obj[key].get<long long>();
}

// [a, b] with 1-based entries.
std::pair<Index, Index> get_pair(const Json &obj, const char *key, const std::string &where)
{
  const Json &v = obj[key];
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    bad_config(where + "." + key + " must be a pair of 1-based integers");
  }
  return {v[0].get<Index>(), v[1].get<Index>()};
}

fs::path resolve(const fs::path &p, const fs::path &base)
{
  return p.is_relative() && !base.empty() ? base / p : p;
}

std::ofstream open_output(const fs::path &dir, const char *name)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(dir / name);
  if (!out) {
    throw Error("io-error", "cannot write " + (dir / name).string());
  }
  return out;
}

void write_header(std::ostream &out, const std::vector<std::string> &names)
{
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << (i ? "," : "") << names[i];
  }
  out << '\n';
}

Json number_json(double v) { return std::isfinite(v) ? Json(round15(v)) : Json(nullptr); }

Json eigen_json(const std::vector<Complex> &values)
{
  Json arr = Json::array();
  for (Complex z : values) {
    arr.push_back(Json::array({number_json(z.real()), number_json(z.imag())}));
  }
  return arr;
}

void write_json(const fs::path &dir, const char *name, const Json &doc)
{
  std::ofstream out = open_output(dir, name);
  out << doc.dump(2) << '\n';
}

void write_mode_table(const fs::path &dir, const std::vector<ModeErrorRow> &rows)
{
  std::ofstream out = open_output(dir, "mode_table.csv");
  out << "f_full_hz,f_red_hz,re_full,re_red,freq_err_pct\n";
  for (const auto &row : rows) {
    write_csv_row(out, {row.f_full, row.f_reduced, row.re_full, row.re_reduced, row.error_pct});
  }
}

Json scenario_json(const RunConfig &config)
{
  if (!config.scenario) {
    return nullptr;
  }
  return {{"faulted_bus", config.scenario->faulted_bus},
          {"t_on", round15(config.scenario->t_on)},
          {"t_clear", round15(config.scenario->t_clear)}};
}

// Angle rows of a trajectory shifted back to absolute (or relative) values.
struct AngleTable
{
  std::vector<std::string> names;
  Matrix values;  // rows = columns of the file, samples along columns
  double dt = 0.0;
};

void write_table(const fs::path &dir, const char *name, const AngleTable &table,
                 std::optional<double> diverged_at)
{
  std::ofstream out = open_output(dir, name);
  std::vector<std::string> header{"t"};
  header.insert(header.end(), table.names.begin(), table.names.end());
  write_header(out, header);
  std::vector<double> row(static_cast<std::size_t>(table.values.rows()) + 1);
  for (Index k = 0; k < table.values.cols(); ++k) {
    row[0] = static_cast<double>(k) * table.dt;
    for (Index i = 0; i < table.values.rows(); ++i) {
      row[static_cast<std::size_t>(i) + 1] = table.values(i, k);
    }
    write_csv_row(out, row);
  }
  if (diverged_at) {
    out << "# diverged at t=" << format_number(*diverged_at) << '\n';
  }
}

std::vector<std::string> machine_names(const char *prefix, Index n)
{
  std::vector<std::string> names;
  for (Index i = 0; i < n; ++i) {
    names.push_back(prefix + std::to_string(i + 1));
  }
  return names;
}

// Linear runs of the full and reduced models under the fault-equivalent input.
struct LinearStudy
{
  LinearRun full;     // full-model outputs on the compared entries
  LinearRun reduced;
  std::vector<std::string> output_names;
  Vector offsets;     // equilibrium value of each compared output
};

LinearStudy run_linear_study(const Study &study, const ReductionOutcome &red,
                             const RunConfig &config)
{
  const Matrix u = fault_equivalent_input(study.system, config.scenario, config.sim);
  const Vector d0 = study.system.delta0();
  const Index ng = study.system.n_gen();
  LinearStudy ls;
  if (red.reduced.method != ReductionMethod::SvdKrylov) {
    ls.full = run_linear(red.full, u, Vector::Zero(red.full.order()), config.sim.dt,
                         config.sim.horizon);
    ls.reduced = run_linear(red.reduced.model, u, Vector::Zero(red.reduced.model.order()),
                            config.sim.dt, config.sim.horizon);
    ls.output_names = machine_names("delta_", ng);
    ls.offsets = d0;
    return ls;
  }
  const Channel ch = red.full_entry;
  const StateSpaceModel siso = select_channel(red.full, ch);
  const Matrix u_ch = u.row(ch.input);
  ls.full = run_linear(siso, u_ch, Vector::Zero(siso.order()), config.sim.dt, config.sim.horizon);
  ls.reduced = run_linear(red.reduced.model, u_ch, Vector::Zero(red.reduced.model.order()),
                          config.sim.dt, config.sim.horizon);
  ls.output_names = {"delta_" + std::to_string(ch.output + 2) + "-delta_1"};
  ls.offsets = Vector::Constant(1, d0(ch.output + 1) - d0(0));
  return ls;
}

Index checked_entry(Index one_based, Index limit, const char *what)
{
  if (one_based < 1 || one_based > limit) {
    throw Error("bad-entry", std::string(what) + " index " + std::to_string(one_based) +
                               " is outside 1.." + std::to_string(limit));
  }
  return one_based - 1;
}

}  // namespace

RunConfig config_from_json(const Json &doc, const fs::path &base_dir)
{
  check_keys(doc, "$", {"network", "output_dir", "scenario", "sim", "reduction", "sweep"});
  RunConfig config;
  if (doc.contains("network")) {
    if (!doc["network"].is_string()) {
      bad_config("$.network must be a path string");
    }
    config.network_path = resolve(doc["network"].get<std::string>(), base_dir);
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) {
      bad_config("$.output_dir must be a path string");
    }
    config.output_dir = resolve(doc["output_dir"].get<std::string>(), base_dir);
  }
  if (doc.contains("scenario")) {
    const Json &s = doc["scenario"];
    if (s.is_null()) {
      config.scenario.reset();
    }
    else {
      check_keys(s, "$.scenario", {"faulted_bus", "t_on", "t_clear"});
      FaultScenario sc;
      sc.faulted_bus = static_cast<int>(get_integer(s, "faulted_bus", "$.scenario", sc.faulted_bus));
      sc.t_on = get_number(s, "t_on", "$.scenario", sc.t_on);
      sc.t_clear = get_number(s, "t_clear", "$.scenario", sc.t_clear);
      config.scenario = sc;
    }
  }
  if (doc.contains("sim")) {
    const Json &s = doc["sim"];
    check_keys(s, "$.sim", {"dt", "horizon"});
    config.sim.dt = get_number(s, "dt", "$.sim", config.sim.dt);
    config.sim.horizon = get_number(s, "horizon", "$.sim", config.sim.horizon);
  }
  if (doc.contains("reduction")) {
    const Json &s = doc["reduction"];
    check_keys(s, "$.reduction",
               {"method", "r", "criterion", "channel", "tol", "max_iter", "orthogonalize"});
    ReductionConfig &rc = config.reduction;
    if (s.contains("method")) {
      if (!s["method"].is_string()) {
        bad_config("$.reduction.method must be a string");
      }
      rc.method = parse_reduction_method(s["method"].get<std::string>());
    }
    rc.r = static_cast<Index>(get_integer(s, "r", "$.reduction", rc.r));
    if (s.contains("criterion")) {
      if (!s["criterion"].is_string()) {
        bad_config("$.reduction.criterion must be a string");
      }
      rc.criterion = parse_mode_ordering(s["criterion"].get<std::string>());
    }
    if (s.contains("channel")) {
      const auto [in, out] = get_pair(s, "channel", "$.reduction");
      rc.channel = {in - 1, out - 1};
    }
    rc.tol = get_number(s, "tol", "$.reduction", rc.tol);
    rc.max_iter = static_cast<int>(get_integer(s, "max_iter", "$.reduction", rc.max_iter));
    if (s.contains("orthogonalize")) {
      if (!s["orthogonalize"].is_boolean()) {
        bad_config("$.reduction.orthogonalize must be a boolean");
      }
      rc.orthogonalize = s["orthogonalize"].get<bool>();
    }
  }
  if (doc.contains("sweep")) {
    const Json &s = doc["sweep"];
    check_keys(s, "$.sweep", {"w_lo", "w_hi", "n_points", "entry"});
    config.sweep.w_lo = get_number(s, "w_lo", "$.sweep", config.sweep.w_lo);
    config.sweep.w_hi = get_number(s, "w_hi", "$.sweep", config.sweep.w_hi);
    config.sweep.n_points =
      static_cast<Index>(get_integer(s, "n_points", "$.sweep", config.sweep.n_points));
    if (s.contains("entry")) {
      const auto [out, in] = get_pair(s, "entry", "$.sweep");
      config.sweep.entry = Channel{in - 1, out - 1};
    }
  }
  return config;
}

RunConfig load_run_config(const fs::path &path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error("file-not-found", path.string());
  }
  Json doc;
  try {
    doc = Json::parse(in);
  }
  catch (const Json::parse_error &e) {
    throw Error("parse-error", path.string() + ": " + e.what());
  }
  return config_from_json(doc, path.parent_path());
}

Study build_study(const RunConfig &config)
{
  if (config.network_path.empty()) {
    throw Error("bad-config", "no network given (config \"network\" or --network)");
  }
  Study study;
  study.system = build_classical_system(load_network(config.network_path));
  if (study.system.n_gen() < 2) {
    throw Error("validation-error", "dynamic studies need at least two generators");
  }
  study.absolute =
    linearize_swing(study.system.gens, study.system.yred, study.system.omega_s());
  study.relative = relative_angle_model(study.absolute, study.system.n_gen());
  return study;
}

ReductionOutcome run_reduction(const Study &study, const ReductionConfig &config)
{
  ReductionOutcome out;
  const bool svd = config.method == ReductionMethod::SvdKrylov;
  out.full = svd ? study.relative : study.absolute;
  const Index n = out.full.order();
  if (config.r >= n) {
    throw Error("order-too-large",
                "r = " + std::to_string(config.r) + " must be below the model order " +
                  std::to_string(n),
                double(n));
  }
  if (config.r < 1) {
    throw Error("bad-order", "r must be at least 1");
  }
  if (!svd) {
    out.reduced = modal_reduce(out.full, config.r, config.method, config.criterion);
    return out;
  }
  const Channel ch = config.channel;
  checked_entry(ch.input + 1, out.full.inputs(), "channel input");
  checked_entry(ch.output + 1, out.full.outputs(), "channel output");
  SvdKrylovOptions opts;
  opts.r = config.r;
  opts.channel = ch;
  opts.tol = config.tol;
  opts.max_iter = config.max_iter;
  opts.orthogonalize = config.orthogonalize;
  out.svd = svd_krylov_reduce(out.full, opts);
  out.reduced = out.svd->reduced;
  out.full_entry = ch;
  out.reduced_entry = {0, 0};
  return out;
}

Json reduced_model_to_json(const ReducedModel &reduced)
{
  Json doc = model_to_json(reduced.model);
  Json meta;
  meta["method"] = std::string(to_string(reduced.method));
  meta["r"] = reduced.model.order();
  meta["requested_r"] = reduced.requested_r;
  meta["full_order"] = reduced.full_order;
  meta["criterion"] = reduced.criterion.empty() ? Json(nullptr) : Json(reduced.criterion);
  meta["retained_eigenvalues"] = eigen_json(reduced.retained_eigenvalues);
  if (reduced.channel) {
    meta["channel"] = {reduced.channel->input + 1, reduced.channel->output + 1};
  }
  else {
    meta["channel"] = nullptr;
  }
  doc["meta"] = meta;
  return doc;
}

void cmd_pf(const RunConfig &config, std::ostream &log)
{
  const Network net = load_network(config.network_path);
  const PowerFlowSolution pf = solve_power_flow(net);
  std::ofstream out = open_output(config.output_dir, "pf.csv");
  out << "bus,kind,v_mag,v_ang_rad,p_inj,q_inj\n";
  for (std::size_t i = 0; i < net.buses.size(); ++i) {
    const Index k = static_cast<Index>(i);
    out << net.buses[i].id << ',' << to_string(net.buses[i].kind) << ','
        << format_number(pf.v_mag(k)) << ',' << format_number(pf.v_ang(k)) << ','
        << format_number(pf.injection(k).real()) << ',' << format_number(pf.injection(k).imag())
        << '\n';
  }
  log << "power flow converged in " << pf.iterations << " iterations (max mismatch "
      << format_number(pf.max_mismatch) << "); slack output "
      << format_number(pf.slack_power.real()) << " + j" << format_number(pf.slack_power.imag())
      << " pu\n";
}

void cmd_reduce(const RunConfig &config, std::ostream &log)
{
  const Study study = build_study(config);
  const ReductionOutcome red = run_reduction(study, config.reduction);
  write_json(config.output_dir, "full_model.json", model_to_json(red.full));
  Json doc = reduced_model_to_json(red.reduced);
  if (red.svd) {
    doc["meta"]["converged"] = red.svd->converged;
    doc["meta"]["iterations"] = red.svd->iterations;
    Json shifts = Json::array();
    for (Complex s : red.svd->final_shifts.values) {
      shifts.push_back(Json::array({number_json(s.real()), number_json(s.imag())}));
    }
    doc["meta"]["final_shifts"] = shifts;
  }
  write_json(config.output_dir, "reduced_model.json", doc);
  write_mode_table(config.output_dir, mode_error_table(red.full, red.reduced.model));
  if (red.svd) {
    std::ofstream out = open_output(config.output_dir, "convergence.csv");
    out << "iter,max_rel_shift_change,max_interp_error\n";
    for (const auto &rec : red.svd->trace) {
      write_csv_row(out, {double(rec.iteration), rec.max_rel_shift_change, rec.max_interp_error});
    }
  }
  log << to_string(red.reduced.method) << ": order " << red.full.order() << " -> "
      << red.reduced.model.order();
  if (red.svd) {
    log << (red.svd->converged ? ", converged" : ", NOT converged") << " after "
        << red.svd->iterations << " iterations";
  }
  log << '\n';
}

void cmd_simulate(const RunConfig &config, std::ostream &log)
{
  const Study study = build_study(config);
  const ReductionOutcome red = run_reduction(study, config.reduction);
  const FaultSimulation nl = run_fault_simulation(study.system, config.scenario, config.sim);
  const LinearStudy lin = run_linear_study(study, red, config);
  const Index ng = study.system.n_gen();
  const double dt = config.sim.dt;

  std::vector<std::string> state_names = machine_names("delta_", ng);
  const std::vector<std::string> omega_names = machine_names("omega_", ng);
  state_names.insert(state_names.end(), omega_names.begin(), omega_names.end());

  write_table(config.output_dir, "traj_nonlinear.csv",
              {state_names, nl.trajectory.states, dt}, nl.diverged_at);

  // Full linear model: absolute angles and speed deviations.
  LinearRun full_abs = run_linear(study.absolute,
                                  fault_equivalent_input(study.system, config.scenario, config.sim),
                                  Vector::Zero(study.absolute.order()), dt, config.sim.horizon);
  Matrix full_states = full_abs.trajectory.states;
  full_states.topRows(ng).colwise() += study.system.delta0();
  write_table(config.output_dir, "traj_full_lin.csv", {state_names, full_states, dt},
              full_abs.diverged_at);

  Matrix reduced_angles = lin.reduced.trajectory.outputs;
  reduced_angles.colwise() += lin.offsets;
  write_table(config.output_dir, "traj_reduced.csv", {lin.output_names, reduced_angles, dt},
              lin.reduced.diverged_at);

  std::optional<double> first;
  for (const auto &t : {nl.diverged_at, full_abs.diverged_at, lin.reduced.diverged_at}) {
    if (t && (!first || *t < *first)) {
      first = t;
    }
  }
  if (first) {
    throw Error("diverged", "simulation blew up", *first);
  }
  log << "simulated " << format_number(config.sim.horizon) << " s at dt = " << format_number(dt)
      << " (" << nl.trajectory.samples() << " samples); synchronism "
      << (nl.synchronism_lost ? "LOST at t = " + format_number(*nl.loss_of_synchronism_time)
                              : std::string("kept"))
      << '\n';
}

void cmd_compare(const RunConfig &config, std::ostream &log)
{
  const Study study = build_study(config);
  const ReductionOutcome red = run_reduction(study, config.reduction);
  write_mode_table(config.output_dir, mode_error_table(red.full, red.reduced.model));

  Channel full_entry{};
  Channel reduced_entry{};
  if (red.svd) {
    if (config.sweep.entry && (config.sweep.entry->input != red.full_entry.input ||
                               config.sweep.entry->output != red.full_entry.output)) {
      throw Error("bad-entry", "an svd-krylov model only answers for its reduction channel");
    }
    full_entry = red.full_entry;
    reduced_entry = red.reduced_entry;
  }
  else {
    const Channel e = config.sweep.entry.value_or(Channel{});
    full_entry = {checked_entry(e.input + 1, red.full.inputs(), "sweep entry input"),
                  checked_entry(e.output + 1, red.full.outputs(), "sweep entry output")};
    reduced_entry = full_entry;
  }
  const SweepResult sweep = freq_sweep(red.full, full_entry, red.reduced.model, reduced_entry,
                                       config.sweep.w_lo, config.sweep.w_hi,
                                       config.sweep.n_points);
  {
    std::ofstream out = open_output(config.output_dir, "sweep.csv");
    out << "omega_rad_s,mag_full_db,mag_red_db,phase_full,phase_red\n";
    for (std::size_t k = 0; k < sweep.omega.size(); ++k) {
      write_csv_row(out, {sweep.omega[k], sweep.mag_full_db[k], sweep.mag_red_db[k],
                          sweep.phase_full[k], sweep.phase_red[k]});
    }
  }

  const LinearStudy lin = run_linear_study(study, red, config);
  if (lin.full.diverged_at || lin.reduced.diverged_at) {
    throw Error("diverged", "linear simulation blew up",
                lin.full.diverged_at.value_or(*lin.reduced.diverged_at));
  }
  Json reduced_rows = Json::array();
  for (Index i = 0; i < static_cast<Index>(lin.output_names.size()); ++i) {
    const TrajectoryError e = traj_error(lin.full.trajectory, lin.reduced.trajectory, i);
    const double ref = rms_deviation(lin.full.trajectory, i);
    reduced_rows.push_back({{"output", lin.output_names[static_cast<std::size_t>(i)]},
                            {"rms", round15(e.rms)},
                            {"max_abs", round15(e.max_abs)},
                            {"time_of_max", round15(e.time_of_max)},
                            {"reference_rms", round15(ref)},
                            {"relative_rms", number_json(ref > 0.0 ? e.rms / ref : 0.0)}});
  }

  // Nonlinear against full linear, per machine, on angle deviations.
  const FaultSimulation nl = run_fault_simulation(study.system, config.scenario, config.sim);
  Json nonlinear_rows = Json::array();
  if (!nl.diverged_at) {
    Trajectory nl_dev = nl.trajectory;
    nl_dev.outputs.colwise() -= study.system.delta0();
    const LinearRun full_abs =
      run_linear(study.absolute, fault_equivalent_input(study.system, config.scenario, config.sim),
                 Vector::Zero(study.absolute.order()), config.sim.dt, config.sim.horizon);
    if (!full_abs.diverged_at) {
      for (Index i = 0; i < study.system.n_gen(); ++i) {
        const TrajectoryError e = traj_error(nl_dev, full_abs.trajectory, i);
        nonlinear_rows.push_back({{"output", "delta_" + std::to_string(i + 1)},
                                  {"rms", round15(e.rms)},
                                  {"max_abs", round15(e.max_abs)},
                                  {"time_of_max", round15(e.time_of_max)}});
      }
    }
  }

  Json summary;
  summary["method"] = std::string(to_string(red.reduced.method));
  summary["r"] = red.reduced.model.order();
  summary["full_order"] = red.full.order();
  summary["dt"] = round15(config.sim.dt);
  summary["horizon"] = round15(config.sim.horizon);
  summary["scenario"] = scenario_json(config);
  summary["sweep_entry"] = {full_entry.output + 1, full_entry.input + 1};
  summary["sweep_max_mag_gap_db"] = number_json(sweep.max_mag_gap_db());
  summary["reduced_vs_full_linear"] = reduced_rows;
  summary["full_linear_vs_nonlinear"] = nonlinear_rows;
  summary["synchronism_lost"] = nl.synchronism_lost;
  write_json(config.output_dir, "traj_error.json", summary);

  log << to_string(red.reduced.method) << " r = " << red.reduced.model.order()
      << ": max sweep gap " << format_number(sweep.max_mag_gap_db()) << " dB; "
      << lin.output_names.front() << " relative rms error "
      << reduced_rows.front()["relative_rms"].dump() << '\n';
}

int exit_code_for(const std::string &code)
{
  static const std::set<std::string> usage{
    "usage",       "bad-config",  "file-not-found", "parse-error", "validation-error",
    "io-error",    "bad-method",  "bad-criterion",  "bad-scenario", "bad-step",
    "bad-sweep"};
  if (usage.count(code)) {
    return 2;
  }
  if (code == "pf-diverged") {
    return 3;
  }
  if (code == "diverged") {
    return 5;
  }
  return 4;
}

namespace
{

// Command-line overrides; an option only applies when it was given.
struct Overrides
{
  std::string config;
  std::string network;
  std::string output_dir;
  int faulted_bus = 0;
  double t_on = 0.0;
  double t_clear = 0.0;
  bool no_fault = false;
  double dt = 0.0;
  double horizon = 0.0;
  std::string method;
  long long r = 0;
  std::string criterion;
  std::vector<Index> channel;
  double tol = 0.0;
  int max_iter = 0;
  bool orthogonalize = true;
  double w_lo = 0.0;
  double w_hi = 0.0;
  long long n_points = 0;
  std::vector<Index> entry;
};

void add_options(CLI::App &sub, Overrides &o)
{
  sub.add_option("--config", o.config, "JSON run configuration");
  sub.add_option("--network,--network_path", o.network, "network JSON file");
  sub.add_option("--output-dir,--output_dir", o.output_dir, "directory for result files");
  sub.add_option("--faulted-bus,--faulted_bus", o.faulted_bus, "bus id of the bolted fault");
  sub.add_option("--t-on,--t_on", o.t_on, "fault start [s]");
  sub.add_option("--t-clear,--t_clear", o.t_clear, "fault clearing time [s]");
  sub.add_flag("--no-fault,--no_fault", o.no_fault, "run without a disturbance");
  sub.add_option("--dt", o.dt, "integration step [s]");
  sub.add_option("--horizon", o.horizon, "simulated time [s]");
  sub.add_option("--method", o.method,
                 "modal-residualization | modal-truncation | svd-krylov");
  sub.add_option("--r", o.r, "reduced order");
  sub.add_option("--criterion", o.criterion, "mode ordering: modulus | re");
  sub.add_option("--channel", o.channel, "svd-krylov channel: input output (1-based)")
    ->expected(2);
  sub.add_option("--tol", o.tol, "shift convergence tolerance");
  sub.add_option("--max-iter,--max_iter", o.max_iter, "iteration cap");
  sub.add_option("--orthogonalize", o.orthogonalize, "orthonormalize the Krylov basis");
  sub.add_option("--w-lo,--w_lo", o.w_lo, "sweep start [rad/s]");
  sub.add_option("--w-hi,--w_hi", o.w_hi, "sweep end [rad/s]");
  sub.add_option("--n-points,--n_points", o.n_points, "sweep points");
  sub.add_option("--entry", o.entry, "sweep entry: output input (1-based)")->expected(2);
}

bool given(const CLI::App &sub, const char *name) { return sub.get_option(name)->count() > 0; }

RunConfig merge(const CLI::App &sub, const Overrides &o)
{
  RunConfig c = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  if (given(sub, "--network")) {
    c.network_path = o.network;
  }
  if (given(sub, "--output-dir")) {
    c.output_dir = o.output_dir;
  }
  if (o.no_fault) {
    c.scenario.reset();
  }
  else if (given(sub, "--faulted-bus") || given(sub, "--t-on") || given(sub, "--t-clear")) {
    FaultScenario s = c.scenario.value_or(FaultScenario{});
    if (given(sub, "--faulted-bus")) {
      s.faulted_bus = o.faulted_bus;
    }
    if (given(sub, "--t-on")) {
      s.t_on = o.t_on;
    }
    if (given(sub, "--t-clear")) {
      s.t_clear = o.t_clear;
    }
    c.scenario = s;
  }
  if (given(sub, "--dt")) {
    c.sim.dt = o.dt;
  }
  if (given(sub, "--horizon")) {
    c.sim.horizon = o.horizon;
  }
  if (given(sub, "--method")) {
    c.reduction.method = parse_reduction_method(o.method);
  }
  if (given(sub, "--r")) {
    c.reduction.r = static_cast<Index>(o.r);
  }
  if (given(sub, "--criterion")) {
    c.reduction.criterion = parse_mode_ordering(o.criterion);
  }
  if (given(sub, "--channel")) {
    c.reduction.channel = {o.channel[0] - 1, o.channel[1] - 1};
  }
  if (given(sub, "--tol")) {
    c.reduction.tol = o.tol;
  }
  if (given(sub, "--max-iter")) {
    c.reduction.max_iter = o.max_iter;
  }
  if (given(sub, "--orthogonalize")) {
    c.reduction.orthogonalize = o.orthogonalize;
  }
  if (given(sub, "--w-lo")) {
    c.sweep.w_lo = o.w_lo;
  }
  if (given(sub, "--w-hi")) {
    c.sweep.w_hi = o.w_hi;
  }
  if (given(sub, "--n-points")) {
    c.sweep.n_points = static_cast<Index>(o.n_points);
  }
  if (given(sub, "--entry")) {
    c.sweep.entry = Channel{o.entry[1] - 1, o.entry[0] - 1};
  }
  return c;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Reduced-order modelling of power-system swing dynamics", "modred"};
  app.require_subcommand(1);
  Overrides o;
  struct Command
  {
    const char *name;
    const char *help;
    void (*run)(const RunConfig &, std::ostream &);
  };
  const Command commands[] = {
    {"pf", "solve the power flow and write pf.csv", cmd_pf},
    {"reduce", "build and reduce the linear model", cmd_reduce},
    {"simulate", "nonlinear, full linear and reduced trajectories", cmd_simulate},
    {"compare", "mode table, frequency sweep and trajectory errors", cmd_compare},
  };
  std::vector<CLI::App *> subs;
  for (const auto &c : commands) {
    CLI::App *sub = app.add_subcommand(c.name, c.help);
    add_options(*sub, o);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) {
      continue;
    }
    try {
      const RunConfig config = merge(*subs[i], o);
      if (config.network_path.empty()) {
        throw Error("usage", "no network given (config \"network\" or --network)");
      }
      commands[i].run(config, out);
      return 0;
    }
    catch (const Error &e) {
      err << "modred " << commands[i].name << ": " << e.what() << '\n';
      return exit_code_for(e.code());
    }
    catch (const std::exception &e) {
      err << "modred " << commands[i].name << ": internal error: " << e.what() << '\n';
      return 4;
    }
  }
  return 2;
}

}  // namespace modred

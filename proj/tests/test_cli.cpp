// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "modred/cli.hpp"
#include "modred/error.hpp"
#include "support.hpp"

using namespace modred;
namespace fs = std::filesystem;

namespace
{

struct CliRun
{
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args)
{
  args.insert(args.begin(), "modred");
  std::vector<const char *> argv;
  for (const auto &a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string &name)
{
  const fs::path dir = fs::temp_directory_path() / ("modred_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path &p)
{
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const fs::path &p)
{
  std::vector<std::string> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) {
    out.push_back(line);
  }
  return out;
}

const std::string kNetwork = testing::data_path("new_england_39.json");
const std::string kConfig = testing::data_path("bus3_fault.json");

}  // namespace

TEST_CASE("config parsing: defaults, 1-based indices, strictness")
{
  const RunConfig d = config_from_json(Json::object());
  CHECK(d.reduction.r == 10);
  CHECK(d.sim.horizon == 20.0);
  CHECK(d.sim.dt == 0.005);
  REQUIRE(d.scenario.has_value());
  CHECK(d.scenario->faulted_bus == 3);
  CHECK(d.sweep.n_points == 200);

  const RunConfig c = config_from_json(Json::parse(R"({
    "network": "net.json", "scenario": null,
    "reduction": {"method": "svd-krylov", "channel": [2, 3], "criterion": "re"},
    "sweep": {"entry": [4, 5]}})"), "/base");
  CHECK(c.network_path == fs::path("/base/net.json"));
  CHECK_FALSE(c.scenario.has_value());
  CHECK(c.reduction.method == ReductionMethod::SvdKrylov);
  CHECK(c.reduction.channel.input == 1);
  CHECK(c.reduction.channel.output == 2);
  CHECK(c.reduction.criterion == ModeOrdering::RealPart);
  CHECK(c.sweep.entry->output == 3);
  CHECK(c.sweep.entry->input == 4);

  auto code = [](const char *text) {
    try {
      config_from_json(Json::parse(text));
    }
    catch (const Error &e) {
      return e.code();
    }
    return std::string("none");
  };
  CHECK(code(R"({"reduction": {"rr": 3}})") == "bad-config");
  CHECK(code(R"({"sim": {"dt": "fast"}})") == "bad-config");
  CHECK(code(R"({"reduction": {"method": "hankel"}})") == "bad-method");
  CHECK(code(R"({"reduction": {"channel": [1]}})") == "bad-config");
}

TEST_CASE("exit code mapping")
{
  CHECK(exit_code_for("file-not-found") == 2);
  CHECK(exit_code_for("parse-error") == 2);
  CHECK(exit_code_for("pf-diverged") == 3);
  CHECK(exit_code_for("order-too-large") == 4);
  CHECK(exit_code_for("gramian-projection-singular") == 4);
  CHECK(exit_code_for("diverged") == 5);
}

TEST_CASE("pf writes one row per bus")
{
  const fs::path dir = scratch("pf");
  const CliRun r = cli({"pf", "--network", kNetwork, "--output-dir", dir.string()});
  CHECK(r.code == 0);
  const auto rows = lines(dir / "pf.csv");
  REQUIRE(rows.size() == 40);
  CHECK(rows[0] == "bus,kind,v_mag,v_ang_rad,p_inj,q_inj");
  CHECK(rows[31].rfind("31,slack,0.982,0,", 0) == 0);
}

TEST_CASE("usage and file errors exit 2 and name the path")
{
  CHECK(cli({}).code == 2);
  CHECK(cli({"launch"}).code == 2);
  CHECK(cli({"pf"}).code == 2);
  const CliRun missing = cli({"pf", "--network", "/no/such/net.json", "--output-dir", scratch("missing").string()});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("/no/such/net.json") != std::string::npos);
  const CliRun bad_cfg = cli({"reduce", "--config", "/no/such/config.json"});
  CHECK(bad_cfg.code == 2);
  CHECK(bad_cfg.err.find("/no/such/config.json") != std::string::npos);
  CHECK(cli({"reduce", "--network", kNetwork, "--method", "hankel"}).code == 2);
  CHECK(cli({"pf", "--help"}).code == 0);
}

TEST_CASE("a stressed network exits 3")
{
  const fs::path dir = scratch("stressed");
  Json doc = Json::parse(slurp(kNetwork));
  for (auto &bus : doc["buses"]) {
    bus["p_load"] = bus["p_load"].get<double>() * 40.0;
    bus["q_load"] = bus["q_load"].get<double>() * 40.0;
  }
  std::ofstream(dir / "net.json") << doc.dump();
  const CliRun r = cli({"pf", "--network", (dir / "net.json").string(), "--output-dir", dir.string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("pf-diverged") != std::string::npos);
}

TEST_CASE("reduce: modal model, svd-krylov trace, order guard")
{
  const fs::path dir = scratch("reduce");
  CHECK(cli({"reduce", "--config", kConfig, "--output-dir", (dir / "modal").string()}).code == 0);
  const Json red = Json::parse(slurp(dir / "modal" / "reduced_model.json"));
  CHECK(red["n"] == 10);
  CHECK(red["meta"]["method"] == "modal-residualization");
  CHECK(red["meta"]["criterion"] == "modulus");
  CHECK(red["meta"]["retained_eigenvalues"].size() == 10);
  CHECK(model_from_json(red).order() == 10);
  const auto table = lines(dir / "modal" / "mode_table.csv");
  CHECK(table[0] == "f_full_hz,f_red_hz,re_full,re_red,freq_err_pct");
  for (std::size_t i = 1; i < table.size(); ++i) {
    CHECK(table[i].substr(table[i].rfind(',') + 1) == "0");
  }
  CHECK_FALSE(fs::exists(dir / "modal" / "convergence.csv"));

  CHECK(cli({"reduce", "--config", kConfig, "--method", "svd-krylov", "--output-dir", (dir / "svd").string()}).code == 0);
  const Json svd = Json::parse(slurp(dir / "svd" / "reduced_model.json"));
  CHECK(svd["meta"]["converged"] == true);
  CHECK(svd["meta"]["channel"] == Json::array({1, 1}));
  CHECK(svd["m"] == 1);
  const auto conv = lines(dir / "svd" / "convergence.csv");
  REQUIRE(conv.size() >= 2);
  CHECK(conv[0] == "iter,max_rel_shift_change,max_interp_error");
  for (std::size_t i = 1; i < conv.size(); ++i) {
    CHECK(std::stod(conv[i].substr(conv[i].rfind(',') + 1)) <= 1e-8);
  }

  const CliRun too_big = cli({"reduce", "--config", kConfig, "--r", "20", "--output-dir", dir.string()});
  CHECK(too_big.code == 4);
  CHECK(too_big.err.find("order-too-large") != std::string::npos);
  CHECK(cli({"reduce", "--config", kConfig, "--method", "svd-krylov", "--r", "19", "--output-dir", dir.string()}).code == 4);
  CHECK(cli({"reduce", "--config", kConfig, "--method", "svd-krylov", "--channel", "1", "10", "--output-dir", dir.string()}).code == 4);
}

TEST_CASE("simulate: three files on one grid")
{
  const fs::path dir = scratch("simulate");
  const CliRun r = cli({"simulate", "--config", kConfig, "--output-dir", dir.string()});
  CHECK(r.code == 0);
  const auto nl = lines(dir / "traj_nonlinear.csv");
  const auto full = lines(dir / "traj_full_lin.csv");
  const auto red = lines(dir / "traj_reduced.csv");
  CHECK(nl.size() == 4002);
  CHECK(full.size() == 4002);
  CHECK(red.size() == 4002);
  CHECK(nl[0].rfind("t,delta_1,", 0) == 0);
  CHECK(nl[0].find(",omega_10") != std::string::npos);
  CHECK(red[0].find("omega") == std::string::npos);
  for (std::size_t k : {1u, 2000u, 4001u}) {
    CHECK(nl[k].substr(0, nl[k].find(',')) == full[k].substr(0, full[k].find(',')));
    CHECK(nl[k].substr(0, nl[k].find(',')) == red[k].substr(0, red[k].find(',')));
  }
  CHECK(nl[4001].rfind("20,", 0) == 0);
  // Before the fault the nonlinear and linear angles both sit at the equilibrium.
  auto field = [](const std::string &row, int i) {
    std::stringstream ss(row);
    std::string cell;
    for (int k = 0; k <= i; ++k) {
      std::getline(ss, cell, ',');
    }
    return cell;
  };
  CHECK(field(nl[100], 1) == field(full[100], 1));
  CHECK(field(nl[100], 1) == field(red[100], 1));

  const fs::path svd = scratch("simulate_svd");
  CHECK(cli({"simulate", "--config", kConfig, "--method", "svd-krylov", "--output-dir", svd.string()}).code == 0);
  CHECK(lines(svd / "traj_reduced.csv")[0] == "t,delta_2-delta_1");
}

TEST_CASE("no-fault run is flat")
{
  const fs::path dir = scratch("flat");
  CHECK(cli({"simulate", "--config", kConfig, "--no-fault", "--horizon", "2", "--output-dir", dir.string()}).code == 0);
  const auto nl = lines(dir / "traj_nonlinear.csv");
  const auto red = lines(dir / "traj_reduced.csv");
  REQUIRE(nl.size() == 402);
  CHECK(nl[1].substr(2) == nl[401].substr(nl[401].find(',') + 1));
  CHECK(red[1].substr(2) == red[401].substr(red[401].find(',') + 1));
}

TEST_CASE("an unstable integration exits 5 and keeps partial output")
{
  const fs::path dir = scratch("diverge");
  const CliRun r = cli({"simulate", "--config", kConfig, "--dt", "0.5", "--horizon", "400", "--t-on", "1", "--t-clear", "1.5", "--output-dir", dir.string()});
  CHECK(r.code == 5);
  CHECK(r.err.find("diverged") != std::string::npos);
  const auto full = lines(dir / "traj_full_lin.csv");
  REQUIRE(full.size() > 2);
  CHECK(full.back().rfind("# diverged at t=", 0) == 0);
  CHECK(full.size() < 803);
}

TEST_CASE("compare: reports, identical-model sanity, entry guard")
{
  const fs::path dir = scratch("compare");
  CHECK(cli({"compare", "--config", kConfig, "--method", "modal-truncation", "--output-dir", dir.string()}).code == 0);
  const auto sweep = lines(dir / "sweep.csv");
  REQUIRE(sweep.size() == 201);
  CHECK(sweep[0] == "omega_rad_s,mag_full_db,mag_red_db,phase_full,phase_red");
  CHECK(sweep[1].rfind("0.01,", 0) == 0);
  CHECK(sweep[200].rfind("100,", 0) == 0);
  const Json te = Json::parse(slurp(dir / "traj_error.json"));
  CHECK(te["reduced_vs_full_linear"].size() == 10);
  CHECK(te["full_linear_vs_nonlinear"].size() == 10);
  CHECK(te["horizon"] == 20.0);
  CHECK(te["scenario"]["faulted_bus"] == 3);

  const CliRun bad = cli({"compare", "--config", kConfig, "--entry", "11", "1", "--output-dir", dir.string()});
  CHECK(bad.code == 4);
  CHECK(bad.err.find("bad-entry") != std::string::npos);

  // Identical models compare with all-zero errors.
  RunConfig cfg = load_run_config(kConfig);
  const Study study = build_study(cfg);
  const auto rows = mode_error_table(study.absolute, study.absolute);
  for (const auto &row : rows) {
    CHECK(row.error_pct == 0.0);
  }
  Trajectory t;
  t.dt = 0.005;
  t.outputs = Matrix::Ones(2, 5);
  CHECK(traj_error(t, t, 1).max_abs == 0.0);
}

TEST_CASE("flags override the config file, which overrides defaults")
{
  const fs::path dir = scratch("precedence");
  Json doc = Json::parse(slurp(kConfig));
  doc["network"] = kNetwork;
  doc["output_dir"] = (dir / "from_config").string();
  doc["reduction"]["r"] = 6;
  std::ofstream(dir / "cfg.json") << doc.dump();

  CHECK(cli({"reduce", "--config", (dir / "cfg.json").string()}).code == 0);
  CHECK(Json::parse(slurp(dir / "from_config" / "reduced_model.json"))["n"] == 6);

  CHECK(cli({"reduce", "--config", (dir / "cfg.json").string(), "--r", "8", "--output-dir", (dir / "from_flag").string()}).code == 0);
  CHECK(Json::parse(slurp(dir / "from_flag" / "reduced_model.json"))["n"] == 8);

  CHECK(cli({"reduce", "--network", kNetwork, "--output-dir", (dir / "defaults").string()}).code == 0);
  CHECK(Json::parse(slurp(dir / "defaults" / "reduced_model.json"))["n"] == 10);
}

TEST_CASE("repeated runs are byte-identical, in process and through the binary")
{
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  for (const fs::path &dir : {a, b}) {
    for (const char *cmd : {"pf", "reduce", "simulate", "compare"}) {
      REQUIRE(cli({cmd, "--config", kConfig, "--method", "svd-krylov", "--output-dir", dir.string()}).code == 0);
    }
  }
  for (const auto &entry : fs::directory_iterator(a)) {
    CAPTURE(entry.path().filename().string());
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
  }

  const fs::path c = scratch("det_c");
  const std::string cmd = std::string(MODRED_CLI_PATH) + " compare --config " + kConfig +
                          " --method svd-krylov --output-dir " + c.string() + " > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(slurp(c / "sweep.csv") == slurp(a / "sweep.csv"));
  CHECK(slurp(c / "traj_error.json") == slurp(a / "traj_error.json"));
}

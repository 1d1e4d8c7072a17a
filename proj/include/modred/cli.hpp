// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MODRED_CLI_HPP
#define MODRED_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "modred/compare.hpp"
#include "modred/lti_io.hpp"
#include "modred/modal.hpp"
#include "modred/power.hpp"
#include "modred/svd_krylov.hpp"

namespace modred
{

struct ReductionConfig
{
  ReductionMethod method = ReductionMethod::ModalResidualization;
  Index r = 10;
  ModeOrdering criterion = kDefaultModeOrdering;
  Channel channel{};  // svd-krylov only; zero-based here, 1-based in files and flags
  double tol = 1e-6;
  int max_iter = 100;
  bool orthogonalize = true;
};

struct SweepConfig
{
  double w_lo = 1e-2;
  double w_hi = 1e2;
  Index n_points = 200;
  std::optional<Channel> entry;  // defaults to (1,1), or the reduction channel
};

struct RunConfig
{
  std::filesystem::path network_path;
  std::filesystem::path output_dir = "out";
  std::optional<FaultScenario> scenario = FaultScenario{};
  SimConfig sim;
  ReductionConfig reduction;
  SweepConfig sweep;
};

/// Relative paths in `doc` resolve against `base_dir`. Unknown keys and
/// malformed values throw "bad-config".
RunConfig config_from_json(const Json &doc, const std::filesystem::path &base_dir = {});
RunConfig load_run_config(const std::filesystem::path &path);

//
// Linear models of one study. The modal methods reduce `absolute`
// (absolute rotor angles, one zero mode); svd-krylov reduces one channel of
// `relative`, whose outputs are the angles relative to machine 1.
//
struct Study
{
  ClassicalSystem system;
  StateSpaceModel absolute;
  StateSpaceModel relative;
};

Study build_study(const RunConfig &config);

struct ReductionOutcome
{
  StateSpaceModel full;        // the model that was reduced
  ReducedModel reduced;
  Channel full_entry;          // entry of `full` matching reduced entry `reduced_entry`
  Channel reduced_entry;
  std::optional<SvdKrylovResult> svd;
};

/// "order-too-large" unless 1 <= r < n of the model being reduced.
ReductionOutcome run_reduction(const Study &study, const ReductionConfig &config);

/// Reduced model JSON plus a "meta" block with method, orders and retained
/// eigenvalues.
Json reduced_model_to_json(const ReducedModel &reduced);

// Subcommands. Each writes its files into config.output_dir and throws
// modred::Error on failure; `log` receives a short human-readable summary.
void cmd_pf(const RunConfig &config, std::ostream &log);
void cmd_reduce(const RunConfig &config, std::ostream &log);
void cmd_simulate(const RunConfig &config, std::ostream &log);
void cmd_compare(const RunConfig &config, std::ostream &log);

/// 2 usage/file/config, 3 power flow, 5 simulation divergence, 4 the rest.
int exit_code_for(const std::string &error_code);

/// Full command line: parses, dispatches, maps errors to exit codes.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace modred

#endif  // MODRED_CLI_HPP

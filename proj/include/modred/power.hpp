// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MODRED_POWER_HPP
#define MODRED_POWER_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modred/lti.hpp"

namespace modred
{

// All network quantities are per unit on Network::base_mva; inertia H is in
// seconds and the system frequency in Hz.

enum class BusKind
{
  Slack,
  PV,
  PQ,
};

struct Bus
{
  int id = 0;
  BusKind kind = BusKind::PQ;
  double p_load = 0.0;
  double q_load = 0.0;
  double v_setpoint = 1.0;  // PV and slack buses
  double g_shunt = 0.0;
  double b_shunt = 0.0;
};

struct Branch
{
  int from = 0;
  int to = 0;
  double r = 0.0;
  double x = 0.0;
  double b = 0.0;    // total line charging
  double tap = 1.0;  // off-nominal ratio on the `from` side
};

struct GeneratorSpec
{
  std::string name;
  int bus = 0;
  double H = 0.0;
  double D = 0.0;
  double xd_prime = 0.0;
  double p_gen = 0.0;  // scheduled active power (ignored at the slack)
};

struct Network
{
  std::string name;
  double base_mva = 100.0;
  double f_s = 60.0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<GeneratorSpec> generators;

  /// Position of bus `id` in `buses`; throws "validation-error" if absent.
  Index bus_index(int id) const;
  double omega_s() const;

  /// Throws "validation-error" naming the violated invariant.
  void validate() const;
};

std::string_view to_string(BusKind kind);

/// Reads and validates a network JSON file: "parse-error" (with the field
/// path), "validation-error", or "file-not-found".
Network load_network(const std::filesystem::path &path);
Network parse_network(const std::string &text);

/// Bus admittance matrix, pi-model branches with off-nominal taps.
CMatrix build_ybus(const Network &network);

struct PowerFlowOptions
{
  double tol = 1e-8;
  int max_iter = 50;
};

struct PowerFlowSolution
{
  Vector v_mag;
  Vector v_ang;
  CVector injection;  // net complex power leaving the network at each bus
  Complex slack_power;
  int iterations = 0;
  double max_mismatch = 0.0;
  std::vector<double> mismatch_trace;

  CVector voltage() const;
};

/// Newton-Raphson in polar form from a flat start; "pf-diverged" on failure.
PowerFlowSolution solve_power_flow(const Network &network, const PowerFlowOptions &options = {});

/// Classical machine: constant EMF E behind x'd, swing dynamics.
struct GeneratorClassical
{
  std::string name;
  int bus = 0;
  Index bus_index = 0;
  double H = 0.0;
  double D = 0.0;
  double xd_prime = 0.0;
  double Pm = 0.0;
  double E = 0.0;
  double delta0 = 0.0;
};

/// Constant-admittance equivalents of the bus loads at the solved voltages.
CVector load_admittances(const Network &network, const PowerFlowSolution &pf);

/// Schur complement keeping the `keep` nodes of Y (in the given order).
/// Throws "kron-singular" when the eliminated block is singular.
CMatrix kron_reduce(const CMatrix &Y, std::span<const Index> keep);

// Appends one internal node per machine behind 1/(j x'd), adds the load
// admittances, removes the `grounded` bus positions (bolted faults) and
// eliminates every remaining bus. Result is n_gen x n_gen.
CMatrix reduce_to_internal_nodes(const CMatrix &ybus, std::span<const GeneratorClassical> gens,
                                 const CVector &loads, std::span<const Index> grounded = {});

/// E and delta0 from the solved bus voltage and generator current; Pm is set
/// to the electrical output through `yred` so the equilibrium is exact.
std::vector<GeneratorClassical> init_generators(const Network &network,
                                                const PowerFlowSolution &pf);

/// P_e,i = sum_j E_i E_j (G_ij cos(d_i - d_j) + B_ij sin(d_i - d_j)).
Vector electrical_power(const Vector &delta, const CMatrix &yred,
                        std::span<const GeneratorClassical> gens);

// State (delta_1..delta_n, omega_1..omega_n), omega as deviation in rad/s:
//   delta' = omega
//   (2H/ws) omega' = Pm - Pe(delta) - (D/ws) omega
Vector swing_rhs(const Vector &state, const CMatrix &yred,
                 std::span<const GeneratorClassical> gens, double omega_s,
                 const Vector *extra_pm = nullptr);

/// Analytic linearization at delta0: inputs dPm, outputs d(delta), D = 0.
StateSpaceModel linearize_swing(std::span<const GeneratorClassical> gens, const CMatrix &yred,
                                double omega_s);

// Re-expresses the absolute model on generator-1-relative angles:
// states (delta_i - delta_1 for i >= 2, omega_1..omega_n), outputs the n-1
// relative angles. Removes the zero eigenvalue of the absolute model.
StateSpaceModel relative_angle_model(const StateSpaceModel &absolute, Index n_gen);

//
// Everything needed for dynamic studies of one network: the solved
// equilibrium, initialized machines and the pre-fault internal-node matrix.
//
struct ClassicalSystem
{
  Network network;
  PowerFlowSolution pf;
  CMatrix ybus;
  CVector loads;
  std::vector<GeneratorClassical> gens;
  CMatrix yred;

  Index n_gen() const { return static_cast<Index>(gens.size()); }
  double omega_s() const { return network.omega_s(); }
  Vector delta0() const;

  /// Internal-node matrix with bus `faulted_bus` (an id) grounded.
  CMatrix fault_admittance(int faulted_bus) const;
};

ClassicalSystem build_classical_system(Network network, const PowerFlowOptions &options = {});

struct FaultScenario
{
  int faulted_bus = 3;
  double t_on = 1.0;
  double t_clear = 1.1;

  /// "bad-scenario" unless 0 <= t_on < t_clear.
  void validate() const;
};

struct SimConfig
{
  double dt = kDefaultStep;
  double horizon = 20.0;

  static SimConfig short_study() { return {kDefaultStep, 15.0}; }
};

struct FaultSimulation
{
  Trajectory trajectory;  // states (delta, omega); outputs = absolute delta
  bool synchronism_lost = false;
  std::optional<double> loss_of_synchronism_time;
  std::optional<double> diverged_at;
};

// Pre-fault, fault-on and post-fault (= pre-fault) internal-node matrices,
// switched at the grid points nearest t_on and t_clear. Loss of synchronism
// (any |delta_i - delta_j| > 4 pi) is flagged; numerical blow-up stops the
// run and sets diverged_at.
FaultSimulation run_fault_simulation(const ClassicalSystem &system,
                                     const std::optional<FaultScenario> &scenario,
                                     const SimConfig &config);

/// As run_fault_simulation, but blow-up throws Error("diverged", ..., t).
FaultSimulation simulate_fault(const ClassicalSystem &system,
                               const std::optional<FaultScenario> &scenario,
                               const SimConfig &config);

/// Switching step index for time t on the grid.
Index grid_step(double t, double dt);

// dPm(t) = Pe_prefault(delta0) - Pe_faulted(delta0) while the fault is on,
// zero elsewhere: n_gen x (steps + 1) samples for run_linear.
Matrix fault_equivalent_input(const ClassicalSystem &system,
                              const std::optional<FaultScenario> &scenario,
                              const SimConfig &config);

}  // namespace modred

#endif  // MODRED_POWER_HPP

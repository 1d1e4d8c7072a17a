// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#include "modred/power.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "modred/error.hpp"

namespace modred
{

namespace
{

const Complex kJ{0.0, 1.0};

[[noreturn]] void invalid(const std::string &what) { throw Error("validation-error", what); }

}  // namespace

std::string_view to_string(BusKind kind)
{
  switch (kind) {
  case BusKind::Slack:
    return "slack";
  case BusKind::PV:
    return "PV";
  case BusKind::PQ:
    return "PQ";
  }
  return "unknown";
}

Index Network::bus_index(int id) const
{
  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (buses[i].id == id) {
      return static_cast<Index>(i);
    }
  }
  invalid("bus " + std::to_string(id) + " does not exist");
}

double Network::omega_s() const { return 2.0 * std::numbers::pi * f_s; }

void Network::validate() const
{
  if (!(base_mva > 0.0) || !std::isfinite(base_mva)) {
    invalid("base_mva must be positive");
  }
  if (!(f_s > 0.0) || !std::isfinite(f_s)) {
    invalid("f_s must be positive");
  }
  if (buses.empty()) {
    invalid("network has no buses");
  }
  std::set<int> ids;
  int slack_count = 0;
  for (const auto &bus : buses) {
    if (!ids.insert(bus.id).second) {
      invalid("bus ids unique (duplicate id " + std::to_string(bus.id) + ")");
    }
    if (bus.kind == BusKind::Slack) {
      ++slack_count;
    }
    if (bus.kind != BusKind::PQ && !(bus.v_setpoint > 0.0)) {
      invalid("V_setpoint > 0 at bus " + std::to_string(bus.id));
    }
    if (!std::isfinite(bus.p_load) || !std::isfinite(bus.q_load) ||
        !std::isfinite(bus.g_shunt) || !std::isfinite(bus.b_shunt) ||
        !std::isfinite(bus.v_setpoint)) {
      invalid("loads finite at bus " + std::to_string(bus.id));
    }
  }
  if (slack_count != 1) {
    invalid("exactly one slack bus (found " + std::to_string(slack_count) + ")");
  }
  for (const auto &br : branches) {
    if (!ids.count(br.from) || !ids.count(br.to)) {
      invalid("every branch endpoint exists (" + std::to_string(br.from) + "-" +
              std::to_string(br.to) + ")");
    }
    if (br.from == br.to) {
      invalid("branch endpoints differ");
    }
    if (br.x == 0.0 || !std::isfinite(br.x) || !std::isfinite(br.r) || !std::isfinite(br.b)) {
      invalid("x != 0 on branch " + std::to_string(br.from) + "-" + std::to_string(br.to));
    }
    if (!(br.tap > 0.0) || !std::isfinite(br.tap)) {
      invalid("tap > 0 on branch " + std::to_string(br.from) + "-" + std::to_string(br.to));
    }
  }
  std::set<int> gen_buses;
  for (const auto &g : generators) {
    if (!ids.count(g.bus)) {
      invalid("every generator references an existing bus (" + std::to_string(g.bus) + ")");
    }
    if (!gen_buses.insert(g.bus).second) {
      invalid("one generator per bus (bus " + std::to_string(g.bus) + ")");
    }
    if (!(g.H > 0.0) || !std::isfinite(g.H)) {
      invalid("H > 0 for generator at bus " + std::to_string(g.bus));
    }
    if (!(g.xd_prime > 0.0) || !std::isfinite(g.xd_prime)) {
      invalid("xd_prime > 0 for generator at bus " + std::to_string(g.bus));
    }
    if (!(g.D >= 0.0) || !std::isfinite(g.D) || !std::isfinite(g.p_gen)) {
      invalid("D >= 0 and finite p_gen for generator at bus " + std::to_string(g.bus));
    }
  }
}

CMatrix build_ybus(const Network &network)
{
  const Index nb = static_cast<Index>(network.buses.size());
  CMatrix Y = CMatrix::Zero(nb, nb);
  for (const auto &br : network.branches) {
    const Index f = network.bus_index(br.from);
    const Index t = network.bus_index(br.to);
    const Complex y = 1.0 / Complex(br.r, br.x);
    const Complex charging = kJ * (0.5 * br.b);
    Y(f, f) += (y + charging) / (br.tap * br.tap);
    Y(t, t) += y + charging;
    Y(f, t) -= y / br.tap;
    Y(t, f) -= y / br.tap;
  }
  for (Index i = 0; i < nb; ++i) {
    const Bus &bus = network.buses[static_cast<std::size_t>(i)];
    Y(i, i) += Complex(bus.g_shunt, bus.b_shunt);
  }
  return Y;
}

CVector PowerFlowSolution::voltage() const
{
  CVector V(v_mag.size());
  for (Index i = 0; i < V.size(); ++i) {
    V(i) = std::polar(v_mag(i), v_ang(i));
  }
  return V;
}

PowerFlowSolution solve_power_flow(const Network &network, const PowerFlowOptions &options)
{
  network.validate();
  const Index nb = static_cast<Index>(network.buses.size());
  const CMatrix Y = build_ybus(network);

  Vector p_sched = Vector::Zero(nb);
  Vector q_sched = Vector::Zero(nb);
  for (Index i = 0; i < nb; ++i) {
    const Bus &bus = network.buses[static_cast<std::size_t>(i)];
    p_sched(i) = -bus.p_load;
    q_sched(i) = -bus.q_load;
  }
  for (const auto &g : network.generators) {
    p_sched(network.bus_index(g.bus)) += g.p_gen;
  }

  std::vector<Index> angle_buses;  // PV + PQ
  std::vector<Index> mag_buses;    // PQ
  Index slack = 0;
  Vector vm(nb);
  Vector va = Vector::Zero(nb);
  for (Index i = 0; i < nb; ++i) {
    const Bus &bus = network.buses[static_cast<std::size_t>(i)];
    vm(i) = bus.kind == BusKind::PQ ? 1.0 : bus.v_setpoint;
    if (bus.kind == BusKind::Slack) {
      slack = i;
    }
    else {
      angle_buses.push_back(i);
      if (bus.kind == BusKind::PQ) {
        mag_buses.push_back(i);
      }
    }
  }
  const Index na = static_cast<Index>(angle_buses.size());
  const Index nm = static_cast<Index>(mag_buses.size());

  PowerFlowSolution sol;
  auto calc_power = [&](const CVector &V) -> CVector {
    return V.cwiseProduct((Y * V).conjugate());
  };

  bool converged = false;
  for (int iter = 0; iter <= options.max_iter; ++iter) {
    CVector V(nb);
    for (Index i = 0; i < nb; ++i) {
      V(i) = std::polar(vm(i), va(i));
    }
    const CVector S = calc_power(V);
    Vector mismatch(na + nm);
    for (Index k = 0; k < na; ++k) {
      mismatch(k) = S(angle_buses[static_cast<std::size_t>(k)]).real() -
                    p_sched(angle_buses[static_cast<std::size_t>(k)]);
    }
    for (Index k = 0; k < nm; ++k) {
      mismatch(na + k) = S(mag_buses[static_cast<std::size_t>(k)]).imag() -
                         q_sched(mag_buses[static_cast<std::size_t>(k)]);
    }
    const double worst = mismatch.size() ? mismatch.cwiseAbs().maxCoeff() : 0.0;
    sol.mismatch_trace.push_back(worst);
    sol.iterations = iter;
    sol.max_mismatch = worst;
    if (!std::isfinite(worst)) {
      break;
    }
    if (worst < options.tol) {
      converged = true;
      break;
    }
    if (iter == options.max_iter) {
      break;
    }

    // dS/dtheta = j diag(V) conj(diag(I) - Y diag(V))
    // dS/d|V|   = diag(V) conj(Y diag(V/|V|)) + conj(diag(I)) diag(V/|V|)
    const CVector I = Y * V;
    const CVector Vn = V.cwiseQuotient(vm.cast<Complex>());
    CMatrix dS_dth = -(Y * V.asDiagonal().toDenseMatrix());
    dS_dth.diagonal() += I;
    dS_dth = (kJ * (V.asDiagonal() * dS_dth.conjugate())).eval();
    CMatrix dS_dvm = V.asDiagonal() * (Y * Vn.asDiagonal().toDenseMatrix()).conjugate();
    dS_dvm.diagonal() += I.conjugate().cwiseProduct(Vn);

    Matrix J(na + nm, na + nm);
    for (Index r = 0; r < na; ++r) {
      const Index br = angle_buses[static_cast<std::size_t>(r)];
      for (Index c = 0; c < na; ++c) {
        J(r, c) = dS_dth(br, angle_buses[static_cast<std::size_t>(c)]).real();
      }
      for (Index c = 0; c < nm; ++c) {
        J(r, na + c) = dS_dvm(br, mag_buses[static_cast<std::size_t>(c)]).real();
      }
    }
    for (Index r = 0; r < nm; ++r) {
      const Index br = mag_buses[static_cast<std::size_t>(r)];
      for (Index c = 0; c < na; ++c) {
        J(na + r, c) = dS_dth(br, angle_buses[static_cast<std::size_t>(c)]).imag();
      }
      for (Index c = 0; c < nm; ++c) {
        J(na + r, na + c) = dS_dvm(br, mag_buses[static_cast<std::size_t>(c)]).imag();
      }
    }
    const Vector dx = J.partialPivLu().solve(-mismatch);
    if (!dx.allFinite()) {
      break;
    }
    for (Index k = 0; k < na; ++k) {
      va(angle_buses[static_cast<std::size_t>(k)]) += dx(k);
    }
    for (Index k = 0; k < nm; ++k) {
      vm(mag_buses[static_cast<std::size_t>(k)]) += dx(na + k);
    }
  }

  if (!converged) {
    std::ostringstream trace;
    trace << "Newton-Raphson did not converge; max mismatch per iteration:";
    for (double m : sol.mismatch_trace) {
      trace << ' ' << m;
    }
    throw Error("pf-diverged", trace.str(), sol.max_mismatch);
  }

  sol.v_mag = vm;
  sol.v_ang = va;
  sol.injection = calc_power(sol.voltage());
  const Bus &sb = network.buses[static_cast<std::size_t>(slack)];
  sol.slack_power = sol.injection(slack) + Complex(sb.p_load, sb.q_load);
  return sol;
}

CVector load_admittances(const Network &network, const PowerFlowSolution &pf)
{
  const Index nb = static_cast<Index>(network.buses.size());
  CVector y(nb);
  for (Index i = 0; i < nb; ++i) {
    const Bus &bus = network.buses[static_cast<std::size_t>(i)];
    y(i) = Complex(bus.p_load, -bus.q_load) / (pf.v_mag(i) * pf.v_mag(i));
  }
  return y;
}

CMatrix kron_reduce(const CMatrix &Y, std::span<const Index> keep)
{
  const Index n = Y.rows();
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (Index k : keep) {
    if (k < 0 || k >= n || kept[static_cast<std::size_t>(k)]) {
      throw Error("kron-singular", "invalid keep list");
    }
    kept[static_cast<std::size_t>(k)] = true;
  }
  std::vector<Index> elim;
  for (Index i = 0; i < n; ++i) {
    if (!kept[static_cast<std::size_t>(i)]) {
      elim.push_back(i);
    }
  }
  const Index ne = static_cast<Index>(elim.size());
  auto block = [&](std::span<const Index> rows, std::span<const Index> cols) {
    CMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        out(static_cast<Index>(r), static_cast<Index>(c)) = Y(rows[r], cols[c]);
      }
    }
    return out;
  };
  CMatrix Ykk = block(keep, keep);
  if (ne == 0) {
    return Ykk;
  }
  const CMatrix Yee = block(elim, elim);
  Eigen::PartialPivLU<CMatrix> lu(Yee);
  if (!(lu.rcond() >= 1e-14) || lu.matrixLU().diagonal().cwiseAbs().minCoeff() == 0.0) {
    throw Error("kron-singular", "eliminated block is singular", 1.0 / lu.rcond());
  }
  return Ykk - block(keep, elim) * lu.solve(block(elim, keep));
}

CMatrix reduce_to_internal_nodes(const CMatrix &ybus, std::span<const GeneratorClassical> gens,
                                 const CVector &loads, std::span<const Index> grounded)
{
  const Index nb = ybus.rows();
  const Index ng = static_cast<Index>(gens.size());
  CMatrix Ya = CMatrix::Zero(nb + ng, nb + ng);
  Ya.topLeftCorner(nb, nb) = ybus;
  Ya.topLeftCorner(nb, nb).diagonal() += loads;
  for (Index k = 0; k < ng; ++k) {
    const Index i = gens[static_cast<std::size_t>(k)].bus_index;
    const Complex yg = 1.0 / Complex(0.0, gens[static_cast<std::size_t>(k)].xd_prime);
    Ya(i, i) += yg;
    Ya(nb + k, nb + k) += yg;
    Ya(i, nb + k) -= yg;
    Ya(nb + k, i) -= yg;
  }

  // Grounded buses have zero voltage: drop their rows and columns.
  std::vector<Index> alive;
  for (Index i = 0; i < nb + ng; ++i) {
    if (std::find(grounded.begin(), grounded.end(), i) == grounded.end() || i >= nb) {
      alive.push_back(i);
    }
  }
  const Index na = static_cast<Index>(alive.size());
  CMatrix Yg(na, na);
  for (Index r = 0; r < na; ++r) {
    for (Index c = 0; c < na; ++c) {
      Yg(r, c) = Ya(alive[static_cast<std::size_t>(r)], alive[static_cast<std::size_t>(c)]);
    }
  }
  std::vector<Index> keep;
  for (Index k = 0; k < ng; ++k) {
    keep.push_back(na - ng + k);
  }
  return kron_reduce(Yg, keep);
}

Vector electrical_power(const Vector &delta, const CMatrix &yred,
                        std::span<const GeneratorClassical> gens)
{
  const Index ng = static_cast<Index>(gens.size());
  CVector E(ng);
  for (Index k = 0; k < ng; ++k) {
    E(k) = std::polar(gens[static_cast<std::size_t>(k)].E, delta(k));
  }
  return E.cwiseProduct((yred * E).conjugate()).real();
}

std::vector<GeneratorClassical> init_generators(const Network &network,
                                                const PowerFlowSolution &pf)
{
  const CVector V = pf.voltage();
  std::vector<GeneratorClassical> gens;
  for (const auto &spec : network.generators) {
    const Index i = network.bus_index(spec.bus);
    const Bus &bus = network.buses[static_cast<std::size_t>(i)];
    const Complex s_gen = pf.injection(i) + Complex(bus.p_load, bus.q_load);
    const Complex current = std::conj(s_gen / V(i));
    const Complex emf = V(i) + kJ * spec.xd_prime * current;
    if (std::abs(emf) < 1e-12) {
      throw Error("degenerate-generator", "zero internal EMF at bus " + std::to_string(spec.bus));
    }
    GeneratorClassical g;
    g.name = spec.name;
    g.bus = spec.bus;
    g.bus_index = i;
    g.H = spec.H;
    g.D = spec.D;
    g.xd_prime = spec.xd_prime;
    g.E = std::abs(emf);
    g.delta0 = std::arg(emf);
    gens.push_back(g);
  }
  const CMatrix yred =
    reduce_to_internal_nodes(build_ybus(network), gens, load_admittances(network, pf));
  Vector delta0(static_cast<Index>(gens.size()));
  for (std::size_t k = 0; k < gens.size(); ++k) {
    delta0(static_cast<Index>(k)) = gens[k].delta0;
  }
  const Vector pe = electrical_power(delta0, yred, gens);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    gens[k].Pm = pe(static_cast<Index>(k));
  }
  return gens;
}

Vector swing_rhs(const Vector &state, const CMatrix &yred,
                 std::span<const GeneratorClassical> gens, double omega_s, const Vector *extra_pm)
{
  const Index ng = static_cast<Index>(gens.size());
  const Vector delta = state.head(ng);
  const Vector omega = state.tail(ng);
  const Vector pe = electrical_power(delta, yred, gens);
  Vector out(2 * ng);
  out.head(ng) = omega;
  for (Index k = 0; k < ng; ++k) {
    const GeneratorClassical &g = gens[static_cast<std::size_t>(k)];
    double pm = g.Pm;
    if (extra_pm) {
      pm += (*extra_pm)(k);
    }
    out(ng + k) = omega_s / (2.0 * g.H) * (pm - pe(k) - g.D / omega_s * omega(k));
  }
  return out;
}

StateSpaceModel linearize_swing(std::span<const GeneratorClassical> gens, const CMatrix &yred,
                                double omega_s)
{
  const Index ng = static_cast<Index>(gens.size());
  Matrix K = Matrix::Zero(ng, ng);  // dPe_i / d delta_j
  for (Index i = 0; i < ng; ++i) {
    const GeneratorClassical &gi = gens[static_cast<std::size_t>(i)];
    for (Index j = 0; j < ng; ++j) {
      if (i == j) {
        continue;
      }
      const GeneratorClassical &gj = gens[static_cast<std::size_t>(j)];
      const double angle = gi.delta0 - gj.delta0;
      K(i, j) = gi.E * gj.E *
                (yred(i, j).real() * std::sin(angle) - yred(i, j).imag() * std::cos(angle));
    }
    K(i, i) = -K.row(i).sum();
  }

  Matrix A = Matrix::Zero(2 * ng, 2 * ng);
  Matrix B = Matrix::Zero(2 * ng, ng);
  Matrix C = Matrix::Zero(ng, 2 * ng);
  A.topRightCorner(ng, ng).setIdentity();
  for (Index i = 0; i < ng; ++i) {
    const GeneratorClassical &g = gens[static_cast<std::size_t>(i)];
    const double gain = omega_s / (2.0 * g.H);
    A.block(ng + i, 0, 1, ng) = -gain * K.row(i);
    A(ng + i, ng + i) = -g.D / (2.0 * g.H);
    B(ng + i, i) = gain;
    C(i, i) = 1.0;
  }
  StateSpaceModel model = StateSpaceModel::make(A, B, C, Matrix::Zero(ng, ng));
  for (Index i = 0; i < ng; ++i) {
    const std::string tag = std::to_string(i + 1);
    model.state_names.push_back("delta_" + tag);
    model.input_names.push_back("dPm_" + tag);
    model.output_names.push_back("delta_" + tag);
  }
  for (Index i = 0; i < ng; ++i) {
    model.state_names.push_back("omega_" + std::to_string(i + 1));
  }
  return model;
}

StateSpaceModel relative_angle_model(const StateSpaceModel &absolute, Index n_gen)
{
  const Index n = 2 * n_gen;
  if (n_gen < 2 || absolute.order() != n) {
    throw Error("invalid-model", "expected 2 * n_gen states ordered (delta, omega)");
  }
  const Vector shift = absolute.A.leftCols(n_gen).rowwise().sum();
  if (shift.cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, absolute.A.cwiseAbs().maxCoeff())) {
    throw Error("invalid-model", "dynamics depend on absolute angles");
  }
  // S: x -> x' (delta_i - delta_1, omega); R: x' -> x with delta_1 = 0.
  Matrix S = Matrix::Zero(n - 1, n);
  Matrix R = Matrix::Zero(n, n - 1);
  for (Index i = 1; i < n_gen; ++i) {
    S(i - 1, i) = 1.0;
    S(i - 1, 0) = -1.0;
    R(i, i - 1) = 1.0;
  }
  for (Index i = 0; i < n_gen; ++i) {
    S(n_gen - 1 + i, n_gen + i) = 1.0;
    R(n_gen + i, n_gen - 1 + i) = 1.0;
  }
  Matrix C = Matrix::Zero(n_gen - 1, n - 1);
  C.leftCols(n_gen - 1).setIdentity();
  StateSpaceModel rel = StateSpaceModel::make(S * absolute.A * R, S * absolute.B, C,
                                              Matrix::Zero(n_gen - 1, absolute.inputs()));
  rel.input_names = absolute.input_names;
  for (Index i = 1; i < n_gen; ++i) {
    const std::string name = "delta_" + std::to_string(i + 1) + "-delta_1";
    rel.state_names.push_back(name);
    rel.output_names.push_back(name);
  }
  for (Index i = 0; i < n_gen; ++i) {
    rel.state_names.push_back("omega_" + std::to_string(i + 1));
  }
  return rel;
}

Vector ClassicalSystem::delta0() const
{
  Vector d(n_gen());
  for (Index k = 0; k < n_gen(); ++k) {
    d(k) = gens[static_cast<std::size_t>(k)].delta0;
  }
  return d;
}

CMatrix ClassicalSystem::fault_admittance(int faulted_bus) const
{
  const Index grounded[] = {network.bus_index(faulted_bus)};
  return reduce_to_internal_nodes(ybus, gens, loads, grounded);
}

ClassicalSystem build_classical_system(Network network, const PowerFlowOptions &options)
{
  ClassicalSystem sys;
  sys.pf = solve_power_flow(network, options);
  sys.ybus = build_ybus(network);
  sys.loads = load_admittances(network, sys.pf);
  sys.gens = init_generators(network, sys.pf);
  sys.yred = reduce_to_internal_nodes(sys.ybus, sys.gens, sys.loads);
  sys.network = std::move(network);
  return sys;
}

void FaultScenario::validate() const
{
  if (!(t_on >= 0.0) || !(t_clear > t_on) || !std::isfinite(t_clear)) {
    throw Error("bad-scenario", "fault times must satisfy 0 <= t_on < t_clear");
  }
}

Index grid_step(double t, double dt) { return static_cast<Index>(std::llround(t / dt)); }

namespace
{

struct SwitchWindow
{
  Index on = -1;
  Index clear = -1;
  bool contains(Index k) const { return k >= on && k < clear; }
};

SwitchWindow switch_window(const std::optional<FaultScenario> &scenario, const SimConfig &config)
{
  if (!scenario) {
    return {};
  }
  scenario->validate();
  if (!(config.horizon > scenario->t_clear)) {
    throw Error("bad-scenario", "horizon must extend past t_clear");
  }
  return {grid_step(scenario->t_on, config.dt), grid_step(scenario->t_clear, config.dt)};
}

}  // namespace

FaultSimulation run_fault_simulation(const ClassicalSystem &system,
                                     const std::optional<FaultScenario> &scenario,
                                     const SimConfig &config)
{
  const Index steps = step_count(config.dt, config.horizon);
  const SwitchWindow window = switch_window(scenario, config);
  const CMatrix y_fault = scenario ? system.fault_admittance(scenario->faulted_bus) : system.yred;
  const Index ng = system.n_gen();
  const double ws = system.omega_s();
  const double dt = config.dt;

  FaultSimulation sim;
  Trajectory &traj = sim.trajectory;
  traj.t0 = 0.0;
  traj.dt = dt;
  traj.states.resize(2 * ng, steps + 1);
  traj.outputs.resize(ng, steps + 1);

  Vector x = Vector::Zero(2 * ng);
  x.head(ng) = system.delta0();
  for (Index k = 0; k <= steps; ++k) {
    traj.states.col(k) = x;
    traj.outputs.col(k) = x.head(ng);
    const double spread = x.head(ng).maxCoeff() - x.head(ng).minCoeff();
    if (!sim.synchronism_lost && spread > 4.0 * std::numbers::pi) {
      sim.synchronism_lost = true;
      sim.loss_of_synchronism_time = traj.time(k);
    }
    if (k == steps) {
      break;
    }
    const CMatrix &Y = window.contains(k) ? y_fault : system.yred;
    const Vector k1 = swing_rhs(x, Y, system.gens, ws);
    const Vector k2 = swing_rhs(x + 0.5 * dt * k1, Y, system.gens, ws);
    const Vector k3 = swing_rhs(x + 0.5 * dt * k2, Y, system.gens, ws);
    const Vector k4 = swing_rhs(x + dt * k3, Y, system.gens, ws);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double norm = x.norm();
    if (!std::isfinite(norm) || norm > 1e12) {
      sim.diverged_at = traj.time(k + 1);
      traj.states.conservativeResize(Eigen::NoChange, k + 1);
      traj.outputs.conservativeResize(Eigen::NoChange, k + 1);
      break;
    }
  }
  return sim;
}

FaultSimulation simulate_fault(const ClassicalSystem &system,
                               const std::optional<FaultScenario> &scenario,
                               const SimConfig &config)
{
  FaultSimulation sim = run_fault_simulation(system, scenario, config);
  if (sim.diverged_at) {
    throw Error("diverged", "rotor state blew up", *sim.diverged_at);
  }
  return sim;
}

Matrix fault_equivalent_input(const ClassicalSystem &system,
                              const std::optional<FaultScenario> &scenario,
                              const SimConfig &config)
{
  const Index steps = step_count(config.dt, config.horizon);
  const SwitchWindow window = switch_window(scenario, config);
  Matrix u = Matrix::Zero(system.n_gen(), steps + 1);
  if (!scenario) {
    return u;
  }
  const Vector d0 = system.delta0();
  const Vector dpm = electrical_power(d0, system.yred, system.gens) -
                     electrical_power(d0, system.fault_admittance(scenario->faulted_bus),
                                      system.gens);
  for (Index k = 0; k <= steps; ++k) {
    if (window.contains(k)) {
      u.col(k) = dpm;
    }
  }
  return u;
}

}  // namespace modred

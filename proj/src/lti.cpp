// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#include "modred/lti.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "modred/error.hpp"

namespace modred
{

namespace
{

bool all_finite(const Matrix &M) { return M.allFinite(); }

void check_labels(const std::vector<std::string> &labels, Index expected, const char *what)
{
  if (!labels.empty() && static_cast<Index>(labels.size()) != expected) {
    throw Error("invalid-model", std::string(what) + " label count does not match dimension");
  }
}

// A conjugate pair or a single real eigenvalue, in Eigen's output indexing.
struct EigenUnit
{
  Index first;
  Index second;  // == first for a real eigenvalue
};

}  // namespace

StateSpaceModel StateSpaceModel::make(Matrix A, Matrix B, Matrix C, Matrix D)
{
  StateSpaceModel model{std::move(A), std::move(B), std::move(C), std::move(D), {}, {}, {}};
  model.validate();
  return model;
}

void StateSpaceModel::validate() const
{
  if (A.rows() != A.cols()) {
    throw Error("invalid-model", "A must be square");
  }
  if (B.rows() != A.rows()) {
    throw Error("invalid-model", "rows(B) must equal order");
  }
  if (C.cols() != A.rows()) {
    throw Error("invalid-model", "cols(C) must equal order");
  }
  if (D.rows() != C.rows() || D.cols() != B.cols()) {
    throw Error("invalid-model", "D must be outputs x inputs");
  }
  if (!all_finite(A) || !all_finite(B) || !all_finite(C) || !all_finite(D)) {
    throw Error("invalid-model", "non-finite entry");
  }
  check_labels(state_names, order(), "state");
  check_labels(input_names, inputs(), "input");
  check_labels(output_names, outputs(), "output");
}

StateSpaceModel select_channel(const StateSpaceModel &model, Channel channel)
{
  if (channel.input < 0 || channel.input >= model.inputs() || channel.output < 0 ||
      channel.output >= model.outputs()) {
    throw Error("bad-channel", "channel out of range");
  }
  StateSpaceModel siso = StateSpaceModel::make(
    model.A, model.B.col(channel.input), model.C.row(channel.output),
    model.D.block(channel.output, channel.input, 1, 1));
  siso.state_names = model.state_names;
  if (!model.input_names.empty()) {
    siso.input_names = {model.input_names[static_cast<std::size_t>(channel.input)]};
  }
  if (!model.output_names.empty()) {
    siso.output_names = {model.output_names[static_cast<std::size_t>(channel.output)]};
  }
  return siso;
}

Spectrum eig(const Matrix &A)
{
  if (A.rows() != A.cols()) {
    throw Error("invalid-model", "eig needs a square matrix");
  }
  if (!A.allFinite()) {
    throw Error("invalid-model", "non-finite entry");
  }
  const Index n = A.rows();
  Spectrum out;
  if (n == 0) {
    return out;
  }

  Eigen::EigenSolver<Matrix> solver(A, true);
  if (solver.info() != Eigen::Success) {
    throw Error("eig-no-convergence", "real Schur iteration did not converge");
  }
  const CVector values = solver.eigenvalues();
  const CMatrix vectors = solver.eigenvectors();

  // Eigen reports a complex pair as consecutive (p + iz, p - iz), z > 0.
  std::vector<EigenUnit> units;
  for (Index i = 0; i < n; ++i) {
    if (values(i).imag() != 0.0 && i + 1 < n) {
      units.push_back({i, i + 1});
      ++i;
    }
    else {
      units.push_back({i, i});
    }
  }
  auto lower_member = [&](const EigenUnit &u) {
    return values(u.first).imag() <= values(u.second).imag() ? u.first : u.second;
  };
  std::stable_sort(units.begin(), units.end(), [&](const EigenUnit &a, const EigenUnit &b) {
    const Complex la = values(lower_member(a));
    const Complex lb = values(lower_member(b));
    const double ra = std::abs(la.real());
    const double rb = std::abs(lb.real());
    if (ra != rb) {
      return ra < rb;
    }
    return la.imag() < lb.imag();
  });

  out.eigenvalues.resize(n);
  out.right_eigenvectors.resize(n, n);
  Index k = 0;
  for (const auto &u : units) {
    const Index lo = lower_member(u);
    const Index hi = (lo == u.first) ? u.second : u.first;
    out.eigenvalues(k) = values(lo);
    out.right_eigenvectors.col(k) = vectors.col(lo);
    ++k;
    if (hi != lo) {
      out.eigenvalues(k) = values(hi);
      out.right_eigenvectors.col(k) = vectors.col(hi);
      ++k;
    }
  }

  Eigen::BDCSVD<CMatrix> svd(out.right_eigenvectors);
  const auto &sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  out.basis_condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  return out;
}

Spectrum eig(const StateSpaceModel &model) { return eig(model.A); }

CMatrix transfer_eval(const StateSpaceModel &model, Complex s)
{
  const Index n = model.order();
  const CMatrix M = s * CMatrix::Identity(n, n) - model.A.cast<Complex>();
  const CMatrix B = model.B.cast<Complex>();
  Eigen::PartialPivLU<CMatrix> lu(M);
  const double rcond = lu.rcond();
  if (!(rcond >= 1e-13) || (n > 0 && lu.matrixLU().diagonal().cwiseAbs().minCoeff() == 0.0)) {
    throw Error("eval-at-pole", "sI - A is numerically singular", 1.0 / rcond);
  }
  CMatrix X = lu.solve(B);
  const double scale = M.norm() * X.norm() + B.norm();
  CMatrix residual = B - M * X;
  if (scale > 0.0 && residual.norm() > 1e-10 * scale) {
    // one step of iterative refinement
    X += lu.solve(residual);
    residual = B - M * X;
    if (residual.norm() > 1e-10 * (M.norm() * X.norm() + B.norm())) {
      throw Error("eval-at-pole", "shifted solve did not reach the residual bound");
    }
  }
  return model.C.cast<Complex>() * X + model.D.cast<Complex>();
}

ModeRow make_mode_row(Complex lambda)
{
  ModeRow row;
  row.eigenvalue = lambda;
  row.real_part = lambda.real();
  row.frequency_hz = std::abs(lambda.imag()) / (2.0 * std::numbers::pi);
  const double modulus = std::abs(lambda);
  row.damping_ratio = modulus > 0.0 ? -lambda.real() / modulus : 1.0;
  return row;
}

ModeTable mode_report(const CVector &eigenvalues)
{
  ModeTable table;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues(i).imag() >= 0.0) {
      table.push_back(make_mode_row(eigenvalues(i)));
    }
  }
  std::stable_sort(table.begin(), table.end(), [](const ModeRow &a, const ModeRow &b) {
    const double ra = std::abs(a.real_part);
    const double rb = std::abs(b.real_part);
    if (ra != rb) {
      return ra < rb;
    }
    return a.eigenvalue.imag() < b.eigenvalue.imag();
  });
  return table;
}

ModeTable mode_report(const Spectrum &spectrum) { return mode_report(spectrum.eigenvalues); }

Stability is_stable(const Spectrum &spectrum, double margin)
{
  Stability result;
  for (Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
    result.max_real_part = std::max(result.max_real_part, spectrum.eigenvalues(i).real());
  }
  result.stable = spectrum.eigenvalues.size() == 0 || result.max_real_part < -margin;
  return result;
}

Index step_count(double dt, double horizon)
{
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error("bad-step", "dt must be positive");
  }
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw Error("bad-step", "horizon must be non-negative");
  }
  return static_cast<Index>(std::llround(horizon / dt));
}

LinearRun run_linear(const StateSpaceModel &model, const Matrix &inputs, const Vector &x0,
                     double dt, double horizon)
{
  const Index steps = step_count(dt, horizon);
  const Index n = model.order();
  if (inputs.rows() != model.inputs() || inputs.cols() < steps + 1) {
    throw Error("bad-input", "input samples must be inputs x (steps + 1)");
  }
  if (x0.size() != n) {
    throw Error("bad-input", "initial state has the wrong dimension");
  }

  LinearRun run;
  Trajectory &traj = run.trajectory;
  traj.t0 = 0.0;
  traj.dt = dt;
  traj.states.resize(n, steps + 1);
  traj.outputs.resize(model.outputs(), steps + 1);

  Vector x = x0;
  Vector k1(n), k2(n), k3(n), k4(n);
  for (Index k = 0; k <= steps; ++k) {
    const Vector u = inputs.col(k);
    traj.states.col(k) = x;
    traj.outputs.col(k) = model.C * x + model.D * u;
    if (k == steps) {
      break;
    }
    const Vector Bu = model.B * u;
    k1 = model.A * x + Bu;
    k2 = model.A * (x + 0.5 * dt * k1) + Bu;
    k3 = model.A * (x + 0.5 * dt * k2) + Bu;
    k4 = model.A * (x + dt * k3) + Bu;
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double norm = x.norm();
    if (!std::isfinite(norm) || norm > 1e12) {
      run.diverged_at = traj.time(k + 1);
      traj.states.conservativeResize(Eigen::NoChange, k + 1);
      traj.outputs.conservativeResize(Eigen::NoChange, k + 1);
      break;
    }
  }
  return run;
}

Trajectory simulate_linear(const StateSpaceModel &model, const Matrix &inputs, const Vector &x0,
                           double dt, double horizon)
{
  LinearRun run = run_linear(model, inputs, x0, dt, horizon);
  if (run.diverged_at) {
    throw Error("diverged", "state norm exceeded 1e12", *run.diverged_at);
  }
  return std::move(run.trajectory);
}

}  // namespace modred

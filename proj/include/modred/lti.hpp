// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MODRED_LTI_HPP
#define MODRED_LTI_HPP

#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace modred
{

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// One input/output pair of a MIMO model, zero-based.
struct Channel
{
  Index input = 0;
  Index output = 0;
};

//
// Continuous-time LTI system  x' = A x + B u,  y = C x + D u.
// Construct through make() to get the dimension and finiteness checks.
//
struct StateSpaceModel
{
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;
  std::vector<std::string> state_names;
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;

  static StateSpaceModel make(Matrix A, Matrix B, Matrix C, Matrix D);

  Index order() const { return A.rows(); }
  Index inputs() const { return B.cols(); }
  Index outputs() const { return C.rows(); }

  // Throws Error("invalid-model") on inconsistent dimensions, non-finite
  // entries, or label lists of the wrong length.
  void validate() const;
};

/// SISO model of one channel: B column `input`, C row `output`.
StateSpaceModel select_channel(const StateSpaceModel &model, Channel channel);

struct Spectrum
{
  CVector eigenvalues;
  CMatrix right_eigenvectors;  // column i pairs with eigenvalue i
  double basis_condition = 1.0;
};

// Eigenvalues ordered by ascending |Re|, ties by ascending Im. Conjugate
// pairs stay adjacent (negative imaginary part first) and their eigenvector
// columns are exact conjugates of each other.
Spectrum eig(const Matrix &A);
Spectrum eig(const StateSpaceModel &model);

/// G(s) = C (sI - A)^-1 B + D.  Throws "eval-at-pole" when sI - A is
/// numerically singular (reciprocal condition below 1e-13).
CMatrix transfer_eval(const StateSpaceModel &model, Complex s);

struct ModeRow
{
  Complex eigenvalue;
  double frequency_hz = 0.0;
  double damping_ratio = 1.0;
  double real_part = 0.0;
};

/// One row per real eigenvalue and per conjugate pair (positive imaginary
/// representative), ascending |Re|.
using ModeTable = std::vector<ModeRow>;

ModeRow make_mode_row(Complex lambda);
ModeTable mode_report(const Spectrum &spectrum);
ModeTable mode_report(const CVector &eigenvalues);

struct Stability
{
  bool stable = true;
  double max_real_part = -std::numeric_limits<double>::infinity();
};

Stability is_stable(const Spectrum &spectrum, double margin = 0.0);

//
// Uniformly sampled trajectory. Column k of `states` / `outputs` is the
// sample at t0 + k*dt.
//
struct Trajectory
{
  double t0 = 0.0;
  double dt = 0.0;
  Matrix states;
  Matrix outputs;

  Index samples() const { return states.cols() > 0 ? states.cols() : outputs.cols(); }
  double time(Index k) const { return t0 + static_cast<double>(k) * dt; }
};

inline constexpr double kDefaultStep = 0.005;

/// Number of fixed steps covering `horizon` at `dt`.
Index step_count(double dt, double horizon);

struct LinearRun
{
  Trajectory trajectory;             // truncated at the blow-up sample, if any
  std::optional<double> diverged_at;  // seconds
};

// Classical fourth-order Runge-Kutta at a fixed step. Inputs are held
// constant over each step (column k of `inputs` drives [t_k, t_k + dt)), and
// must cover every sample: inputs.cols() >= step_count(dt, horizon) + 1.
LinearRun run_linear(const StateSpaceModel &model, const Matrix &inputs, const Vector &x0,
                     double dt, double horizon);

/// As run_linear, but throws Error("diverged", ..., t) once ||x|| > 1e12.
Trajectory simulate_linear(const StateSpaceModel &model, const Matrix &inputs,
                           const Vector &x0, double dt = kDefaultStep, double horizon = 1.0);

}  // namespace modred

#endif  // MODRED_LTI_HPP

// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#include "modred/svd_krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "modred/error.hpp"

namespace modred
{

namespace
{

bool shift_is_real(Complex z) { return z.imag() == 0.0; }

double max_singular_ratio(const Matrix &M)
{
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto &sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  return smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

// Solves (sI - A) x = rhs, refusing near-singular shifts.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> shifted_solve(const Matrix &A, Scalar s,
                                                       const Vector &rhs)
{
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index n = A.rows();
  const Mat M = s * Mat::Identity(n, n) - A.cast<Scalar>();
  Eigen::PartialPivLU<Mat> lu(M);
  const double rcond = lu.rcond();
  const double smallest_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(rcond >= 1e-13) || smallest_pivot == 0.0) {
    throw Error("shift-hits-pole", "shifted matrix is numerically singular", 1.0 / rcond);
  }
  return lu.solve(rhs.cast<Scalar>());
}

Complex reflect_to_right_half_plane(Complex z)
{
  if (z.real() > 0.0) {
    return z;
  }
  const double re = -z.real();
  return {re > 0.0 ? re : std::numeric_limits<double>::min(), z.imag()};
}

}  // namespace

Matrix obs_gramian(const StateSpaceModel &model)
{
  model.validate();
  const Index n = model.order();
  const Spectrum spectrum = eig(model.A);
  const Stability stab = is_stable(spectrum, 1e-10);
  if (!stab.stable) {
    throw Error("not-strictly-stable", "observability Gramian needs max Re(lambda) < -1e-10",
                stab.max_real_part);
  }

  // Bartels-Stewart on the complex Schur form A = U T U^H:
  // T^H X + X T = -U^H C^T C U, solved column by column.
  Eigen::ComplexSchur<Matrix> schur(model.A);
  if (schur.info() != Eigen::Success) {
    throw Error("eig-no-convergence", "Schur decomposition failed");
  }
  const CMatrix &U = schur.matrixU();
  const CMatrix &T = schur.matrixT();
  const Matrix F = model.C.transpose() * model.C;
  const CMatrix G = U.adjoint() * F.cast<Complex>() * U;
  const CMatrix TH = T.adjoint();

  CMatrix X = CMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    CVector rhs = -G.col(j);
    if (j > 0) {
      rhs -= X.leftCols(j) * T.col(j).head(j);
    }
    CMatrix L = TH;
    L.diagonal().array() += T(j, j);
    X.col(j) = L.triangularView<Eigen::Lower>().solve(rhs);
  }
  Matrix Q = (U * X * U.adjoint()).real();
  return 0.5 * (Q + Q.transpose());
}

ShiftSet make_shift_set(std::vector<Complex> values)
{
  struct ShiftUnit
  {
    Complex lower;
    bool pair;
  };
  std::vector<ShiftUnit> units;
  std::vector<bool> used(values.size(), false);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (used[i]) {
      continue;
    }
    used[i] = true;
    const Complex z = values[i];
    if (shift_is_real(z)) {
      units.push_back({z, false});
      continue;
    }
    std::size_t best = values.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (used[j]) {
        continue;
      }
      const double d = std::abs(values[j] - std::conj(z));
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best == values.size() || best_dist > 1e-10 * std::max(1.0, std::abs(z))) {
      throw Error("not-conjugate-closed", "shift without a conjugate partner");
    }
    used[best] = true;
    const double re = 0.5 * (z.real() + values[best].real());
    const double im = 0.5 * (std::abs(z.imag()) + std::abs(values[best].imag()));
    units.push_back({Complex(re, -im), true});
  }
  std::stable_sort(units.begin(), units.end(), [](const ShiftUnit &a, const ShiftUnit &b) {
    if (a.lower.real() != b.lower.real()) {
      return a.lower.real() < b.lower.real();
    }
    return a.lower.imag() < b.lower.imag();
  });
  ShiftSet set;
  for (const auto &u : units) {
    set.values.push_back(u.lower);
    if (u.pair) {
      set.values.push_back(std::conj(u.lower));
    }
  }
  return set;
}

ShiftSet initial_shifts(const StateSpaceModel &model, Index r)
{
  const Index n = model.order();
  if (r > n) {
    throw Error("order-too-large", "reduced order exceeds model order", double(n));
  }
  if (r < 1) {
    throw Error("bad-order", "reduced order must be at least 1");
  }
  const Matrix &A = model.A;
  double reach = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    const double centre = std::abs(A(i, i));
    const double radius = A.row(i).cwiseAbs().sum() - centre;
    reach = std::max(reach, centre + radius);
    gap = std::min(gap, std::max(centre - radius, 0.0));
  }
  const double lo = std::max(1e-3, 0.1 * gap);
  const double hi = std::max(10.0 * reach, lo);

  std::vector<Complex> values;
  if (r == 1) {
    values.emplace_back(std::sqrt(lo * hi), 0.0);
  }
  else {
    for (Index i = 0; i < r; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(r - 1);
      values.emplace_back(lo * std::pow(hi / lo, t), 0.0);
    }
  }
  return make_shift_set(std::move(values));
}

Matrix krylov_basis(const Matrix &A, const ShiftSet &shifts, const Vector &b, bool orthogonalize)
{
  const Index n = A.rows();
  std::vector<Vector> raw;
  for (std::size_t i = 0; i < shifts.values.size(); ++i) {
    const Complex s = shifts.values[i];
    if (shift_is_real(s)) {
      raw.push_back(shifted_solve<double>(A, s.real(), b));
      continue;
    }
    if (i + 1 >= shifts.values.size() || shifts.values[i + 1] != std::conj(s)) {
      throw Error("not-conjugate-closed", "shift set is not in canonical pair order");
    }
    const CVector x = shifted_solve<Complex>(A, s, b);
    raw.push_back(x.real());
    raw.push_back(x.imag());
    ++i;
  }

  const Index r = static_cast<Index>(raw.size());
  Matrix V(n, r);
  for (Index k = 0; k < r; ++k) {
    Vector v = raw[static_cast<std::size_t>(k)];
    const double original = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      v -= V.leftCols(k) * (V.leftCols(k).transpose() * v);
    }
    const double remaining = v.norm();
    if (!(original > 0.0) || remaining < 1e-12 * original) {
      throw Error("basis-rank-deficient", "Krylov columns are linearly dependent", double(k));
    }
    V.col(k) = v / remaining;
  }
  if (!orthogonalize) {
    for (Index k = 0; k < r; ++k) {
      V.col(k) = raw[static_cast<std::size_t>(k)];
    }
  }
  return V;
}

Matrix oblique_projector(const Matrix &Q, const Matrix &V)
{
  const Matrix M = V.transpose() * Q * V;
  const double cond = max_singular_ratio(M);
  if (!(cond <= 1e12)) {
    throw Error("gramian-projection-singular", "V^T Q V is ill-conditioned", cond);
  }
  const Matrix Zt = M.partialPivLu().solve(V.transpose() * Q);
  return Zt.transpose();
}

ProjectedSystem reduce_once(const StateSpaceModel &model, const Matrix &Q,
                            const ShiftSet &shifts, Channel channel, bool orthogonalize)
{
  const StateSpaceModel siso = select_channel(model, channel);
  const Vector b = siso.B.col(0);
  Matrix V = krylov_basis(siso.A, shifts, b, orthogonalize);
  Matrix Z = oblique_projector(Q, V);
  StateSpaceModel reduced =
    StateSpaceModel::make(Z.transpose() * siso.A * V, Z.transpose() * siso.B, siso.C * V, siso.D);
  reduced.input_names = siso.input_names;
  reduced.output_names = siso.output_names;
  return {std::move(reduced), std::move(V), std::move(Z)};
}

double max_relative_shift_change(const ShiftSet &from, const ShiftSet &to)
{
  if (from.values.size() != to.values.size()) {
    throw Error("bad-shifts", "shift sets differ in size");
  }
  double change = 0.0;
  for (std::size_t i = 0; i < from.values.size(); ++i) {
    change = std::max(change, std::abs(to.values[i] - from.values[i]) / std::abs(from.values[i]));
  }
  return change;
}

std::vector<double> interpolation_check(const StateSpaceModel &model,
                                        const StateSpaceModel &reduced, const ShiftSet &shifts,
                                        Channel channel)
{
  const bool siso = reduced.inputs() == 1 && reduced.outputs() == 1;
  const Channel reduced_channel = siso ? Channel{0, 0} : channel;
  std::vector<double> errors;
  errors.reserve(shifts.values.size());
  for (const Complex s : shifts.values) {
    const Complex g = transfer_eval(model, s)(channel.output, channel.input);
    const Complex gr = transfer_eval(reduced, s)(reduced_channel.output, reduced_channel.input);
    errors.push_back(std::abs(g - gr) / std::max(std::abs(g), 1e-300));
  }
  return errors;
}

SvdKrylovResult svd_krylov_reduce(const StateSpaceModel &model, const SvdKrylovOptions &options)
{
  if (!options.channel) {
    throw Error("mimo-unsupported-for-svd-krylov",
                "select one (input, output) channel for this method");
  }
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw Error("bad-options", "tol must be positive and max_iter at least 1");
  }
  const StateSpaceModel siso = select_channel(model, *options.channel);
  const Index n = siso.order();
  ShiftSet shifts = initial_shifts(siso, options.r);
  const Matrix Q = obs_gramian(siso);
  const Channel only{0, 0};

  SvdKrylovResult result;
  std::optional<ProjectedSystem> best;
  ShiftSet best_shifts;
  std::vector<double> best_errors;
  double best_change = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    ProjectedSystem proj = reduce_once(siso, Q, shifts, only, options.orthogonalize);
    std::vector<double> errors = interpolation_check(siso, proj.model, shifts, only);

    const Spectrum reduced_spectrum = eig(proj.model.A);
    std::vector<Complex> mirrored;
    for (Index i = 0; i < reduced_spectrum.eigenvalues.size(); ++i) {
      mirrored.push_back(reflect_to_right_half_plane(-reduced_spectrum.eigenvalues(i)));
    }
    ShiftSet next = make_shift_set(std::move(mirrored));
    const double change = max_relative_shift_change(shifts, next);

    IterationRecord record;
    record.iteration = iter;
    record.max_rel_shift_change = change;
    record.max_interp_error = errors.empty() ? 0.0 : *std::max_element(errors.begin(), errors.end());
    record.projection_error =
      (proj.Z.transpose() * proj.V - Matrix::Identity(proj.V.cols(), proj.V.cols())).norm();
    record.shifts = shifts;
    result.trace.push_back(record);
    result.shift_history.push_back(change);
    result.iterations = iter;

    if (change < best_change) {
      best_change = change;
      best = std::move(proj);
      best_shifts = shifts;
      best_errors = std::move(errors);
    }
    if (change < options.tol) {
      result.converged = true;
      break;
    }
    shifts = std::move(next);
  }

  ReducedModel &reduced = result.reduced;
  reduced.model = std::move(best->model);
  reduced.method = ReductionMethod::SvdKrylov;
  const Spectrum final_spectrum = eig(reduced.model.A);
  for (Index i = 0; i < final_spectrum.eigenvalues.size(); ++i) {
    reduced.retained_eigenvalues.push_back(final_spectrum.eigenvalues(i));
  }
  reduced.full_order = n;
  reduced.requested_r = options.r;
  reduced.channel = options.channel;
  result.final_shifts = std::move(best_shifts);
  result.interpolation_errors = std::move(best_errors);
  return result;
}

}  // namespace modred

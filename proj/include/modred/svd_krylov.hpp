// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MODRED_SVD_KRYLOV_HPP
#define MODRED_SVD_KRYLOV_HPP

#include <optional>
#include <vector>

#include "modred/lti.hpp"
#include "modred/modal.hpp"

namespace modred
{

///
/// \brief Gramian-weighted rational Krylov reduction.
///
/// A SISO channel (A, b, c) is projected with
///
///   V  : orthonormal basis of span{(s_1 I - A)^-1 b, ..., (s_r I - A)^-1 b},
///   Z  = Q V (V^T Q V)^-1,   Q the observability Gramian (A^T Q + Q A + c^T c = 0),
///   A_r = Z^T A V,  b_r = Z^T b,  c_r = c V.
///
/// Z^T V = I, so the reduced transfer function interpolates the full one at
/// every shift s_i. The shifts are then replaced by the mirror images of the
/// reduced poles, s_i <- -lambda_i(A_r), until they stop moving.
///

/// Observability Gramian. Throws "not-strictly-stable" unless every
/// eigenvalue has Re < -1e-10.
Matrix obs_gramian(const StateSpaceModel &model);

/// Shifts closed under conjugation, sorted by (Re, Im); a pair is stored
/// as (conj, value) with the negative imaginary part first.
struct ShiftSet
{
  std::vector<Complex> values;

  Index size() const { return static_cast<Index>(values.size()); }
};

/// Sorts, snaps conjugate partners onto exact conjugates, and checks closure
/// ("not-conjugate-closed").
ShiftSet make_shift_set(std::vector<Complex> values);

/// r positive real shifts, log-spaced between Gershgorin-based bounds.
ShiftSet initial_shifts(const StateSpaceModel &model, Index r);

/// Columns spanning (s_i I - A)^-1 b; a conjugate pair contributes the real
/// and imaginary parts of one solve. With `orthogonalize` the columns are
/// orthonormalized by twice-iterated Gram-Schmidt; otherwise the raw columns
/// are returned (after the same rank check).
Matrix krylov_basis(const Matrix &A, const ShiftSet &shifts, const Vector &b,
                    bool orthogonalize = true);

/// Z = Q V (V^T Q V)^-1. Throws "gramian-projection-singular" when
/// V^T Q V has condition above 1e12.
Matrix oblique_projector(const Matrix &Q, const Matrix &V);

struct ProjectedSystem
{
  StateSpaceModel model;  // SISO: A_r, b_r, c_r, d
  Matrix V;
  Matrix Z;
};

/// One projection step on `channel` with the given shifts.
ProjectedSystem reduce_once(const StateSpaceModel &model, const Matrix &Q,
                            const ShiftSet &shifts, Channel channel, bool orthogonalize = true);

struct SvdKrylovOptions
{
  Index r = 1;
  std::optional<Channel> channel;  // required: no tangential MIMO rule
  double tol = 1e-6;
  int max_iter = 100;
  bool orthogonalize = true;
};

struct IterationRecord
{
  int iteration = 0;
  double max_rel_shift_change = 0.0;
  double max_interp_error = 0.0;
  double projection_error = 0.0;  // ||Z^T V - I||_F
  ShiftSet shifts;                // shifts used to build this iterate
};

struct SvdKrylovResult
{
  ReducedModel reduced;
  ShiftSet final_shifts;
  int iterations = 0;
  bool converged = false;
  std::vector<double> shift_history;  // per-iteration max relative shift change
  std::vector<double> interpolation_errors;
  std::vector<IterationRecord> trace;
};

SvdKrylovResult svd_krylov_reduce(const StateSpaceModel &model, const SvdKrylovOptions &options);

/// Max relative distance between two shift sets after (Re, Im) sorting.
double max_relative_shift_change(const ShiftSet &from, const ShiftSet &to);

// |G(s_i) - G_r(s_i)| / max(|G(s_i)|, 1e-300) on `channel` of the full model.
// A SISO reduced model is compared through its only entry; otherwise the same
// channel is read from both.
std::vector<double> interpolation_check(const StateSpaceModel &model,
                                        const StateSpaceModel &reduced, const ShiftSet &shifts,
                                        Channel channel);

}  // namespace modred

#endif  // MODRED_SVD_KRYLOV_HPP

// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MODRED_MODAL_HPP
#define MODRED_MODAL_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modred/lti.hpp"

namespace modred
{

///
/// Modal coordinates z = T^-1 x of a diagonalizable model:
///   z' = diag(lambda) z + B_modal u,   y = C_modal z + D u.
///
/// Conjugate eigenvalues sit in adjacent slots with conjugate columns of T.
///
struct ModalForm
{
  CMatrix T;
  CVector lambda;
  CMatrix B_modal;
  CMatrix C_modal;
  Matrix D;
  double condition = 1.0;  // condition number of T
};

/// Throws "defective-or-ill-conditioned" (value = condition estimate) when
/// the eigenvector matrix has condition above 1e12.
ModalForm diagonalize(const StateSpaceModel &model);

enum class ModeOrdering
{
  RealPart,  // ascending |Re lambda|: distance from the imaginary axis
  Modulus,   // ascending |lambda|
};

/// "re" or "modulus"; anything else throws "bad-criterion".
ModeOrdering parse_mode_ordering(std::string_view name);
std::string_view to_string(ModeOrdering ordering);

inline constexpr ModeOrdering kDefaultModeOrdering = ModeOrdering::Modulus;

/// Permutation of modal slots, most important mode first. Ties break by
/// ascending |lambda|, then ascending Im; conjugate pairs stay adjacent.
std::vector<Index> order_modes(const ModalForm &form, ModeOrdering ordering);

///
/// Modal coordinates split into retained (1) and discarded (2) blocks after
/// applying `ordering`. `r` may exceed `requested_r` by one when the boundary
/// would have split a conjugate pair.
///
struct ModalPartition
{
  std::vector<Index> ordering;
  Index requested_r = 0;
  Index r = 0;
  CVector A1;
  CVector A2;
  CMatrix B1;
  CMatrix B2;
  CMatrix C1;
  CMatrix C2;
  Matrix D;
};

inline constexpr double kZeroModeGuard = 1e-8;

// Requires 1 <= r_requested <= n ("order-too-large" above n, "bad-order"
// below 1). Every discarded eigenvalue must satisfy |Re| > 1e-8, otherwise
// "singular-discard".
ModalPartition partition(const ModalForm &form, std::span<const Index> ordering,
                         Index r_requested);

enum class ReductionMethod
{
  ModalResidualization,
  ModalTruncation,
  SvdKrylov,
};

ReductionMethod parse_reduction_method(std::string_view name);
std::string_view to_string(ReductionMethod method);

struct ReducedModel
{
  StateSpaceModel model;
  ReductionMethod method = ReductionMethod::ModalResidualization;
  std::vector<Complex> retained_eigenvalues;
  Index full_order = 0;
  Index requested_r = 0;
  std::string criterion;          // mode ordering for modal methods
  std::optional<Channel> channel;  // SVD-Krylov only
};

/// Singular perturbation: discarded modes settle instantly, which adds
/// -C2 A2^-1 B2 to the feedthrough and keeps the DC gain.
ReducedModel residualize(const ModalPartition &part);

/// Drops the discarded modes outright; feedthrough stays D.
ReducedModel truncate(const ModalPartition &part);

struct ComplexDiagonalSystem
{
  CVector lambda;
  CMatrix B;
  CMatrix C;
  Matrix D;
};

// Real realization of a conjugate-closed complex diagonal system. A real
// eigenvalue becomes a 1x1 block; a pair sigma +- i omega becomes
// [[sigma, omega], [-omega, sigma]]. Pairs must be adjacent; otherwise
// "not-conjugate-closed".
StateSpaceModel realify(const ComplexDiagonalSystem &system);

/// Full pipeline: diagonalize, order, partition, residualize or truncate.
ReducedModel modal_reduce(const StateSpaceModel &model, Index r, ReductionMethod method,
                          ModeOrdering ordering = kDefaultModeOrdering);

}  // namespace modred

#endif  // MODRED_MODAL_HPP

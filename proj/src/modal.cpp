// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#include "modred/modal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "modred/error.hpp"

namespace modred
{

namespace
{

bool is_real(Complex z) { return std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z)); }

bool is_conjugate_pair(Complex a, Complex b)
{
  return a.imag() != 0.0 && std::abs(b - std::conj(a)) <= 1e-10 * std::max(1.0, std::abs(a));
}

// Slots [first, first + size) of a list of eigenvalues that belong together.
struct Unit
{
  Index first;
  Index size;
};

std::vector<Unit> conjugate_units(const CVector &lambda)
{
  std::vector<Unit> units;
  const Index n = lambda.size();
  for (Index i = 0; i < n; ++i) {
    if (!is_real(lambda(i)) && i + 1 < n && is_conjugate_pair(lambda(i), lambda(i + 1))) {
      units.push_back({i, 2});
      ++i;
    }
    else {
      units.push_back({i, 1});
    }
  }
  return units;
}

CVector permute(const CVector &v, std::span<const Index> order)
{
  CVector out(static_cast<Index>(order.size()));
  for (std::size_t k = 0; k < order.size(); ++k) {
    out(static_cast<Index>(k)) = v(order[k]);
  }
  return out;
}

CMatrix permute_rows(const CMatrix &M, std::span<const Index> order)
{
  CMatrix out(static_cast<Index>(order.size()), M.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.row(static_cast<Index>(k)) = M.row(order[k]);
  }
  return out;
}

CMatrix permute_cols(const CMatrix &M, std::span<const Index> order)
{
  CMatrix out(M.rows(), static_cast<Index>(order.size()));
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.col(static_cast<Index>(k)) = M.col(order[k]);
  }
  return out;
}

std::vector<Complex> to_list(const CVector &v) { return {v.data(), v.data() + v.size()}; }

ReducedModel finish(const ModalPartition &part, Matrix D, ReductionMethod method)
{
  ReducedModel reduced;
  reduced.model = realify({part.A1, part.B1, part.C1, std::move(D)});
  reduced.method = method;
  reduced.retained_eigenvalues = to_list(part.A1);
  reduced.full_order = part.A1.size() + part.A2.size();
  reduced.requested_r = part.requested_r;
  return reduced;
}

}  // namespace

ModalForm diagonalize(const StateSpaceModel &model)
{
  model.validate();
  Spectrum spectrum = eig(model.A);
  if (!(spectrum.basis_condition <= 1e12)) {
    throw Error("defective-or-ill-conditioned",
                "eigenvector matrix condition " + std::to_string(spectrum.basis_condition),
                spectrum.basis_condition);
  }
  ModalForm form;
  form.lambda = std::move(spectrum.eigenvalues);
  form.T = std::move(spectrum.right_eigenvectors);
  form.condition = spectrum.basis_condition;
  Eigen::PartialPivLU<CMatrix> lu(form.T);
  form.B_modal = lu.solve(model.B.cast<Complex>());
  form.C_modal = model.C.cast<Complex>() * form.T;
  form.D = model.D;
  return form;
}

ModeOrdering parse_mode_ordering(std::string_view name)
{
  if (name == "re") {
    return ModeOrdering::RealPart;
  }
  if (name == "modulus") {
    return ModeOrdering::Modulus;
  }
  throw Error("bad-criterion", "unknown mode ordering \"" + std::string(name) + "\"");
}

std::string_view to_string(ModeOrdering ordering)
{
  return ordering == ModeOrdering::RealPart ? "re" : "modulus";
}

std::vector<Index> order_modes(const ModalForm &form, ModeOrdering ordering)
{
  std::vector<Unit> units = conjugate_units(form.lambda);
  // Representative: the member with the smaller imaginary part.
  auto rep = [&](const Unit &u) {
    if (u.size == 1) {
      return form.lambda(u.first);
    }
    const Complex a = form.lambda(u.first);
    const Complex b = form.lambda(u.first + 1);
    return a.imag() <= b.imag() ? a : b;
  };
  auto primary = [&](Complex z) {
    return ordering == ModeOrdering::RealPart ? std::abs(z.real()) : std::abs(z);
  };
  std::stable_sort(units.begin(), units.end(), [&](const Unit &a, const Unit &b) {
    const Complex za = rep(a);
    const Complex zb = rep(b);
    if (primary(za) != primary(zb)) {
      return primary(za) < primary(zb);
    }
    if (std::abs(za) != std::abs(zb)) {
      return std::abs(za) < std::abs(zb);
    }
    return za.imag() < zb.imag();
  });

  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(form.lambda.size()));
  for (const auto &u : units) {
    if (u.size == 1) {
      order.push_back(u.first);
      continue;
    }
    const bool first_lower = form.lambda(u.first).imag() <= form.lambda(u.first + 1).imag();
    order.push_back(first_lower ? u.first : u.first + 1);
    order.push_back(first_lower ? u.first + 1 : u.first);
  }
  return order;
}

ModalPartition partition(const ModalForm &form, std::span<const Index> ordering,
                         Index r_requested)
{
  const Index n = form.lambda.size();
  if (static_cast<Index>(ordering.size()) != n) {
    throw Error("bad-ordering", "permutation length must equal the model order");
  }
  std::vector<Index> check(ordering.begin(), ordering.end());
  std::sort(check.begin(), check.end());
  for (Index i = 0; i < n; ++i) {
    if (check[static_cast<std::size_t>(i)] != i) {
      throw Error("bad-ordering", "not a permutation");
    }
  }
  if (r_requested > n) {
    throw Error("order-too-large", "requested order exceeds model order", double(n));
  }
  if (r_requested < 1) {
    throw Error("bad-order", "requested order must be at least 1");
  }

  const CVector lambda = permute(form.lambda, ordering);
  Index r = r_requested;
  for (const auto &u : conjugate_units(lambda)) {
    if (u.size == 2 && u.first == r - 1) {
      ++r;  // keep the partner; never drop below the requested fidelity
      break;
    }
  }
  for (Index i = r; i < n; ++i) {
    if (std::abs(lambda(i).real()) <= kZeroModeGuard) {
      throw Error("singular-discard",
                  "a discarded mode has |Re| <= 1e-8; retain it or raise r",
                  lambda(i).real());
    }
  }

  const CMatrix B = permute_rows(form.B_modal, ordering);
  const CMatrix C = permute_cols(form.C_modal, ordering);
  ModalPartition part;
  part.ordering.assign(ordering.begin(), ordering.end());
  part.requested_r = r_requested;
  part.r = r;
  part.A1 = lambda.head(r);
  part.A2 = lambda.tail(n - r);
  part.B1 = B.topRows(r);
  part.B2 = B.bottomRows(n - r);
  part.C1 = C.leftCols(r);
  part.C2 = C.rightCols(n - r);
  part.D = form.D;
  return part;
}

ReductionMethod parse_reduction_method(std::string_view name)
{
  if (name == "modal-residualization") {
    return ReductionMethod::ModalResidualization;
  }
  if (name == "modal-truncation") {
    return ReductionMethod::ModalTruncation;
  }
  if (name == "svd-krylov") {
    return ReductionMethod::SvdKrylov;
  }
  throw Error("bad-method", "unknown reduction method \"" + std::string(name) + "\"");
}

std::string_view to_string(ReductionMethod method)
{
  switch (method) {
  case ReductionMethod::ModalResidualization:
    return "modal-residualization";
  case ReductionMethod::ModalTruncation:
    return "modal-truncation";
  case ReductionMethod::SvdKrylov:
    return "svd-krylov";
  }
  return "unknown";
}

ReducedModel residualize(const ModalPartition &part)
{
  for (Index i = 0; i < part.A2.size(); ++i) {
    if (std::abs(part.A2(i).real()) <= kZeroModeGuard) {
      throw Error("singular-discard", "discarded block is not invertible", part.A2(i).real());
    }
  }
  const CMatrix correction = part.C2 * part.A2.cwiseInverse().asDiagonal() * part.B2;
  return finish(part, part.D - correction.real(), ReductionMethod::ModalResidualization);
}

ReducedModel truncate(const ModalPartition &part)
{
  return finish(part, part.D, ReductionMethod::ModalTruncation);
}

StateSpaceModel realify(const ComplexDiagonalSystem &system)
{
  const Index r = system.lambda.size();
  if (system.B.rows() != r || system.C.cols() != r) {
    throw Error("invalid-model", "diagonal system blocks have inconsistent sizes");
  }
  const Index m = system.B.cols();
  const Index p = system.C.rows();
  Matrix A = Matrix::Zero(r, r);
  Matrix B(r, m);
  Matrix C(p, r);

  for (Index i = 0; i < r;) {
    const Complex z = system.lambda(i);
    if (is_real(z)) {
      A(i, i) = z.real();
      B.row(i) = system.B.row(i).real();
      C.col(i) = system.C.col(i).real();
      ++i;
      continue;
    }
    if (i + 1 >= r || !is_conjugate_pair(z, system.lambda(i + 1))) {
      throw Error("not-conjugate-closed", "eigenvalue without an adjacent conjugate partner");
    }
    const Index up = z.imag() > 0.0 ? i : i + 1;
    const Index down = up == i ? i + 1 : i;
    const CVector b_up = system.B.row(up).transpose();
    const CVector b_down = system.B.row(down).transpose();
    const CVector c_up = system.C.col(up);
    const CVector c_down = system.C.col(down);
    const double bscale = b_up.norm() + b_down.norm();
    const double cscale = c_up.norm() + c_down.norm();
    if ((b_down - b_up.conjugate()).norm() > 1e-8 * bscale ||
        (c_down - c_up.conjugate()).norm() > 1e-8 * cscale) {
      throw Error("not-conjugate-closed", "input/output directions of a pair are not conjugate");
    }
    const CVector b = 0.5 * (b_up + b_down.conjugate());
    const CVector c = 0.5 * (c_up + c_down.conjugate());
    const double sigma = 0.5 * (z.real() + system.lambda(i + 1).real());
    const double omega = std::abs(z.imag());
    // x1 - i x2 is the modal coordinate of sigma + i omega
    A(i, i) = sigma;
    A(i, i + 1) = omega;
    A(i + 1, i) = -omega;
    A(i + 1, i + 1) = sigma;
    B.row(i) = b.real().transpose();
    B.row(i + 1) = -b.imag().transpose();
    C.col(i) = 2.0 * c.real();
    C.col(i + 1) = 2.0 * c.imag();
    i += 2;
  }
  return StateSpaceModel::make(std::move(A), std::move(B), std::move(C), system.D);
}

ReducedModel modal_reduce(const StateSpaceModel &model, Index r, ReductionMethod method,
                          ModeOrdering ordering)
{
  if (method == ReductionMethod::SvdKrylov) {
    throw Error("bad-method", "modal_reduce handles the modal methods only");
  }
  const ModalForm form = diagonalize(model);
  const std::vector<Index> order = order_modes(form, ordering);
  const ModalPartition part = partition(form, order, r);
  ReducedModel reduced =
    method == ReductionMethod::ModalResidualization ? residualize(part) : truncate(part);
  reduced.criterion = std::string(to_string(ordering));
  reduced.model.input_names = model.input_names;
  reduced.model.output_names = model.output_names;
  return reduced;
}

}  // namespace modred

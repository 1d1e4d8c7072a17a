// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "modred/error.hpp"
#include "modred/modal.hpp"
#include "support.hpp"

using namespace modred;

namespace
{

std::string error_code(auto &&fn)
{
  try {
    fn();
  }
  catch (const Error &e) {
    return e.code();
  }
  return "none";
}

StateSpaceModel two_state()
{
  Matrix A(2, 2);
  A << -1.0, 0.0, 0.0, -10.0;
  Matrix B(2, 1);
  B << 1.0, 1.0;
  Matrix C(1, 2);
  C << 1.0, 1.0;
  return StateSpaceModel::make(A, B, C, Matrix::Zero(1, 1));
}

// Lightly damped pair, a slow real mode and a fast real mode.
StateSpaceModel mixed()
{
  Matrix A(4, 4);
  A << -0.2, 5.0, 0.0, 0.0,
       -5.0, -0.2, 0.0, 0.0,
        0.0, 0.0, -0.5, 0.0,
        0.0, 0.0, 0.0, -20.0;
  Matrix T(4, 4);
  T << 1.0, 0.2, 0.0, 0.1,
       0.0, 1.0, 0.3, 0.0,
       0.1, 0.0, 1.0, 0.2,
       0.0, 0.1, 0.0, 1.0;
  Matrix B(4, 2);
  B << 1.0, 0.0, 0.5, 1.0, 0.0, 2.0, 1.0, 1.0;
  Matrix C(2, 4);
  C << 1.0, 0.0, 1.0, 0.5, 0.0, 1.0, -1.0, 2.0;
  return StateSpaceModel::make(T * A * T.inverse(), T * B, C * T.inverse(), Matrix::Zero(2, 2));
}

Complex diagonal_transfer(const ComplexDiagonalSystem &sys, Complex s, Index out, Index in)
{
  Complex g = sys.D(out, in);
  for (Index i = 0; i < sys.lambda.size(); ++i) {
    g += sys.C(out, i) * sys.B(i, in) / (s - sys.lambda(i));
  }
  return g;
}

}  // namespace

TEST_CASE("diagonalize rejects a defective matrix")
{
  Matrix A(2, 2);
  A << -1.0, 1.0, 0.0, -1.0;
  const StateSpaceModel m =
    StateSpaceModel::make(A, Matrix::Ones(2, 1), Matrix::Ones(1, 2), Matrix::Zero(1, 1));
  CHECK(error_code([&] { diagonalize(m); }) == "defective-or-ill-conditioned");
}

TEST_CASE("modal form reproduces the transfer function")
{
  const StateSpaceModel m = mixed();
  const ModalForm f = diagonalize(m);
  const ComplexDiagonalSystem sys{f.lambda, f.B_modal, f.C_modal, f.D};
  for (Complex s : {Complex(0.0, 1.0), Complex(0.3, -4.0), Complex(0.0, 0.0)}) {
    const CMatrix g = transfer_eval(m, s);
    for (Index o = 0; o < 2; ++o) {
      for (Index i = 0; i < 2; ++i) {
        CHECK(std::abs(g(o, i) - diagonal_transfer(sys, s, o, i)) < 1e-12);
      }
    }
  }
}

TEST_CASE("mode ordering criteria")
{
  const ModalForm f = diagonalize(mixed());
  auto ordered = [&](ModeOrdering o) {
    std::vector<Complex> out;
    for (Index k : order_modes(f, o)) {
      out.push_back(f.lambda(k));
    }
    return out;
  };
  const auto by_re = ordered(ModeOrdering::RealPart);
  CHECK(by_re[0].real() == doctest::Approx(-0.2));
  CHECK(by_re[0].imag() < 0.0);
  CHECK(by_re[1] == std::conj(by_re[0]));
  CHECK(by_re[2].real() == doctest::Approx(-0.5));
  CHECK(by_re[3].real() == doctest::Approx(-20.0));

  const auto by_mod = ordered(ModeOrdering::Modulus);
  CHECK(by_mod[0].real() == doctest::Approx(-0.5));
  CHECK(std::abs(by_mod[1].imag()) == doctest::Approx(5.0));

  CHECK(parse_mode_ordering("re") == ModeOrdering::RealPart);
  CHECK(parse_mode_ordering("modulus") == ModeOrdering::Modulus);
  CHECK(error_code([] { parse_mode_ordering("energy"); }) == "bad-criterion");
  CHECK(to_string(kDefaultModeOrdering) == "modulus");
}

TEST_CASE("partition keeps conjugate partners together and guards its inputs")
{
  const ModalForm f = diagonalize(mixed());
  const auto order = order_modes(f, ModeOrdering::RealPart);
  const ModalPartition p = partition(f, order, 1);
  CHECK(p.requested_r == 1);
  CHECK(p.r == 2);
  CHECK(p.A1(1) == std::conj(p.A1(0)));
  CHECK(partition(f, order, 3).r == 3);
  CHECK(partition(f, order, 4).r == 4);
  CHECK(error_code([&] { partition(f, order, 5); }) == "order-too-large");
  CHECK(error_code([&] { partition(f, order, 0); }) == "bad-order");
  std::vector<Index> bad{0, 0, 1, 2};
  CHECK(error_code([&] { partition(f, bad, 2); }) == "bad-ordering");

  Matrix A = Matrix::Zero(2, 2);
  A(1, 1) = -1.0;
  const StateSpaceModel integrator =
    StateSpaceModel::make(A, Matrix::Ones(2, 1), Matrix::Ones(1, 2), Matrix::Zero(1, 1));
  const ModalForm fi = diagonalize(integrator);
  std::vector<Index> fast_first{1, 0};
  CHECK(error_code([&] { partition(fi, fast_first, 1); }) == "singular-discard");
}

TEST_CASE("two-state hand case: residualization and truncation")
{
  // G(s) = 1/(s+1) + 1/(s+10); keep the pole at -1.
  const ReducedModel res = modal_reduce(two_state(), 1, ReductionMethod::ModalResidualization);
  REQUIRE(res.model.order() == 1);
  CHECK(res.model.A(0, 0) == doctest::Approx(-1.0));
  CHECK(res.model.D(0, 0) == doctest::Approx(0.1));
  const double dc = transfer_eval(res.model, 0.0)(0, 0).real();
  CHECK(dc == doctest::Approx(1.1).epsilon(1e-14));

  const ReducedModel tr = modal_reduce(two_state(), 1, ReductionMethod::ModalTruncation);
  CHECK(tr.model.D(0, 0) == 0.0);
  CHECK(transfer_eval(tr.model, 0.0)(0, 0).real() == doctest::Approx(1.0));
  CHECK(tr.retained_eigenvalues.size() == 1);
  CHECK(tr.full_order == 2);
  CHECK(error_code([] { modal_reduce(two_state(), 1, ReductionMethod::SvdKrylov); }) == "bad-method");
}

TEST_CASE("realify matches its complex-diagonal source")
{
  const ModalForm f = diagonalize(mixed());
  const auto order = order_modes(f, ModeOrdering::Modulus);
  const ModalPartition p = partition(f, order, 4);
  const ComplexDiagonalSystem sys{p.A1, p.B1, p.C1, p.D};
  const StateSpaceModel real = realify(sys);
  CHECK(real.A(1, 2) == doctest::Approx(5.0));
  CHECK(real.A(2, 1) == doctest::Approx(-5.0));
  for (double w : {0.01, 0.5, 5.0, 50.0}) {
    const CMatrix g = transfer_eval(real, Complex(0.0, w));
    for (Index o = 0; o < 2; ++o) {
      for (Index i = 0; i < 2; ++i) {
        CHECK(std::abs(g(o, i) - diagonal_transfer(sys, Complex(0.0, w), o, i)) < 1e-9);
      }
    }
  }

  CVector lonely(1);
  lonely << Complex(-1.0, 2.0);
  CHECK(error_code([&] { realify({lonely, CMatrix::Ones(1, 1), CMatrix::Ones(1, 1), Matrix::Zero(1, 1)}); }) == "not-conjugate-closed");
}

TEST_CASE("retained eigenvalues are exact and the DC gain is preserved")
{
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const StateSpaceModel m = testing::random_stable(rng, 12, 2, 2, 0.3, true);
    const ReducedModel red = modal_reduce(m, 5, ReductionMethod::ModalResidualization);
    const Spectrum full = eig(m);
    const Spectrum reduced = eig(red.model);
    for (Index i = 0; i < reduced.eigenvalues.size(); ++i) {
      double nearest = 1e300;
      for (Index j = 0; j < full.eigenvalues.size(); ++j) {
        nearest = std::min(nearest, std::abs(full.eigenvalues(j) - reduced.eigenvalues(i)));
      }
      CHECK(nearest < 1e-8);
    }
    const CMatrix g0 = transfer_eval(m, 0.0);
    const CMatrix gr0 = transfer_eval(red.model, 0.0);
    CHECK((g0 - gr0).norm() <= 1e-10 * g0.norm());
  }
}

TEST_CASE("reduction names and metadata")
{
  StateSpaceModel m = mixed();
  m.input_names = {"a", "b"};
  m.output_names = {"y", "z"};
  const ReducedModel red = modal_reduce(m, 2, ReductionMethod::ModalTruncation, ModeOrdering::RealPart);
  CHECK(red.model.input_names == m.input_names);
  CHECK(red.model.output_names == m.output_names);
  CHECK(red.criterion == "re");
  CHECK(red.requested_r == 2);
  CHECK(parse_reduction_method("svd-krylov") == ReductionMethod::SvdKrylov);
  CHECK(error_code([] { parse_reduction_method("balanced"); }) == "bad-method");
  CHECK(to_string(ReductionMethod::ModalResidualization) == "modal-residualization");
}

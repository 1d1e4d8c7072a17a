// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

// Shared fixtures and independent reference computations for the tests.

#ifndef MODRED_TESTS_SUPPORT_HPP
#define MODRED_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "modred/lti.hpp"
#include "modred/power.hpp"

namespace modred::testing
{

inline std::string data_path(const std::string &name) { return std::string(MODRED_DATA_DIR) + "/" + name; }

struct PrintedRow
{
  double f_full, f_reduced, error_pct;
};

// "Modes of the original and the reduced systems": the frequency columns and
// the printed error, row by row.
inline const PrintedRow kTable2[] = {
  {0.0035, 0.0035, 0.0},     {0.0103, 0.0103, 0.0},     {0.0266, 0.0262, 1.5038},
  {0.0335, 0.0337, -0.5970}, {0.0678, 0.0678, 0.0},     {0.1981, 0.1981, 0.0},
  {0.2328, 0.2328, 0.0},     {0.5636, 0.5636, 0.0},     {0.8424, 0.8424, 0.0},
  {0.9162, 0.9162, 0.0},     {0.9379, 1.0234, -9.1161}, {1.0234, 1.0449, -2.1008},
  {1.0449, 1.1118, -6.4025}, {1.1118, 1.3238, -19.0682}, {1.3237, 1.3606, -2.7876},
};

// Gaussian A shifted left so its rightmost eigenvalue sits at -margin.
inline StateSpaceModel random_stable(std::mt19937_64 &rng, Index n, Index m, Index p,
                                     double margin = 0.1, bool with_d = false)
{
  std::normal_distribution<double> g(0.0, 1.0);
  auto fill = [&](Index r, Index c) {
    Matrix M(r, c);
    for (Index i = 0; i < r; ++i) {
      for (Index j = 0; j < c; ++j) {
        M(i, j) = g(rng);
      }
    }
    return M;
  };
  Matrix A = fill(n, n) / std::sqrt(static_cast<double>(n));
  const double right = Eigen::EigenSolver<Matrix>(A, false).eigenvalues().real().maxCoeff();
  A.diagonal().array() -= right + margin;
  Matrix D = with_d ? fill(p, m) : Matrix::Zero(p, m);
  return StateSpaceModel::make(A, fill(n, m), fill(p, n), D);
}

// det(M) as the signed sum over all permutations.
inline Complex leibniz_det(const CMatrix &M)
{
  const Index n = M.rows();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Complex total = 0.0;
  do {
    int inversions = 0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        inversions += perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)];
      }
    }
    Complex term = inversions % 2 ? -1.0 : 1.0;
    for (Index i = 0; i < n; ++i) {
      term *= M(i, perm[static_cast<std::size_t>(i)]);
    }
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// c (sI - A)^-1 b = det(sI - A + b c) / det(sI - A) - 1   (rank-one determinant update).
inline Complex siso_transfer_by_determinants(const Matrix &A, const Vector &b, const RowVector &c,
                                             Complex s)
{
  const Index n = A.rows();
  const CMatrix base = s * CMatrix::Identity(n, n) - A.cast<Complex>();
  const CMatrix updated = base + (b * c).cast<Complex>();
  return leibniz_det(updated) / leibniz_det(base) - 1.0;
}

// Vectorized Lyapunov equation A^T Q + Q A = -C^T C solved as a dense n^2 system.
inline Matrix kron_lyapunov(const Matrix &A, const Matrix &C)
{
  const Index n = A.rows();
  const Matrix I = Matrix::Identity(n, n);
  Matrix K = Matrix::Zero(n * n, n * n);
  // vec(A^T Q) = (I kron A^T) vec Q,  vec(Q A) = (A^T kron I) vec Q
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      K.block(i * n, j * n, n, n) += I(i, j) * A.transpose() + A(j, i) * I;
    }
  }
  const Matrix rhs = -C.transpose() * C;
  const Vector q = K.fullPivLu().solve(Eigen::Map<const Vector>(rhs.data(), n * n));
  return Eigen::Map<const Matrix>(q.data(), n, n);
}

// Output energy of the free response from x0, integrated with a fine RK4 step
// until the state has decayed below 1e-12 of its initial size.
inline double output_energy(const Matrix &A, const Matrix &C, const Vector &x0)
{
  const double rho = Eigen::EigenSolver<Matrix>(A, false).eigenvalues().cwiseAbs().maxCoeff();
  const double h = 0.02 / std::max(rho, 1e-3);
  Vector x = x0;
  double energy = 0.0;
  auto f = [&](const Vector &v) { return Vector(A * v); };
  auto w = [&](const Vector &v) { return (C * v).squaredNorm(); };
  for (long step = 0; step < 50000000L && x.norm() > 1e-12 * x0.norm(); ++step) {
    const Vector k1 = f(x);
    const Vector x2 = x + 0.5 * h * k1;
    const Vector k2 = f(x2);
    const Vector x3 = x + 0.5 * h * k2;
    const Vector k3 = f(x3);
    const Vector x4 = x + h * k3;
    const Vector k4 = f(x4);
    // energy' = |C x|^2 integrated along the same stages
    energy += h / 6.0 * (w(x) + 2.0 * w(x2) + 2.0 * w(x3) + w(x4));
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return energy;
}

// Explicit double sum for the electrical power of every machine.
inline Vector trig_power(const Vector &delta, const CMatrix &Y, const std::vector<double> &E)
{
  const Index n = delta.size();
  Vector pe = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double a = delta(i) - delta(j);
      pe(i) += E[static_cast<std::size_t>(i)] * E[static_cast<std::size_t>(j)] *
               (Y(i, j).real() * std::cos(a) + Y(i, j).imag() * std::sin(a));
    }
  }
  return pe;
}

// Machine "G1" at PV bus 2 exporting `p` over a lossless line of reactance x
// to bus 1, where a stiff machine "Ginf" (H = 1e6) holds the voltage.
inline Network smib_network(double p = 0.8, double x = 0.3, double xd = 0.25, double H = 4.0,
                            double D = 2.0)
{
  Network net;
  net.name = "smib";
  net.base_mva = 100.0;
  net.f_s = 60.0;
  net.buses = {{1, BusKind::Slack, 0.0, 0.0, 1.0, 0.0, 0.0}, {2, BusKind::PV, 0.0, 0.0, 1.0, 0.0, 0.0}};
  net.branches = {{1, 2, 0.0, x, 0.0, 1.0}};
  net.generators = {{"G1", 2, H, D, xd, p}, {"Ginf", 1, 1e6, 0.0, 1e-4, 0.0}};
  return net;
}

}  // namespace modred::testing

#endif  // MODRED_TESTS_SUPPORT_HPP

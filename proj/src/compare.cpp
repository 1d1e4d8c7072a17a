// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#include "modred/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "modred/error.hpp"

namespace modred
{

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool canonical_less(const ModeRow &a, const ModeRow &b)
{
  const Complex za = a.eigenvalue;
  const Complex zb = b.eigenvalue;
  if (std::abs(za.real()) != std::abs(zb.real())) {
    return std::abs(za.real()) < std::abs(zb.real());
  }
  if (za.imag() != zb.imag()) {
    return za.imag() < zb.imag();
  }
  return za.real() < zb.real();
}

void check_entry(const StateSpaceModel &model, Channel entry)
{
  if (entry.input < 0 || entry.input >= model.inputs() || entry.output < 0 ||
      entry.output >= model.outputs()) {
    throw Error("bad-entry", "transfer entry (" + std::to_string(entry.output + 1) + ", " +
                               std::to_string(entry.input + 1) + ") is out of range");
  }
}

}  // namespace

double frequency_error_pct(double f_full, double f_reduced)
{
  if (f_full == 0.0) {
    if (f_reduced == 0.0) {
      return 0.0;
    }
    throw Error("zero-reference", "full-model frequency is zero", f_reduced);
  }
  return (f_full - f_reduced) / f_full * 100.0;
}

ModePairing pair_modes(const ModeTable &full, const ModeTable &reduced)
{
  ModeTable f = full;
  ModeTable r = reduced;
  std::sort(f.begin(), f.end(), canonical_less);
  std::sort(r.begin(), r.end(), canonical_less);

  ModePairing out;
  std::vector<bool> taken(f.size(), false);
  for (const ModeRow &row : r) {
    std::size_t best = f.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (taken[k]) {
        continue;
      }
      const double d = std::abs(f[k].eigenvalue - row.eigenvalue);
      if (d < best_dist) {
        best_dist = d;
        best = k;
      }
    }
    if (best == f.size()) {
      break;  // more reduced modes than full ones
    }
    taken[best] = true;
    ModePair pair;
    pair.full = f[best].eigenvalue;
    pair.reduced = row.eigenvalue;
    pair.distance = best_dist;
    try {
      pair.frequency_error_pct = frequency_error_pct(f[best].frequency_hz, row.frequency_hz);
    }
    catch (const Error &) {
      pair.frequency_error_pct = kNaN;
    }
    out.pairs.push_back(pair);
  }
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!taken[k]) {
      out.unmatched_full.push_back(f[k].eigenvalue);
    }
  }
  return out;
}

std::vector<ModeErrorRow> mode_error_table(const StateSpaceModel &full,
                                           const StateSpaceModel &reduced)
{
  full.validate();
  reduced.validate();
  const ModePairing pairing = pair_modes(mode_report(eig(full)), mode_report(eig(reduced)));
  std::vector<ModeErrorRow> rows;
  for (const ModePair &p : pairing.pairs) {
    const ModeRow rf = make_mode_row(p.full);
    const ModeRow rr = make_mode_row(p.reduced);
    rows.push_back({rf.frequency_hz, rr.frequency_hz, rf.real_part, rr.real_part,
                    p.frequency_error_pct});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ModeErrorRow &a, const ModeErrorRow &b) {
    if (std::abs(a.re_full) != std::abs(b.re_full)) {
      return std::abs(a.re_full) < std::abs(b.re_full);
    }
    return a.f_full < b.f_full;
  });
  return rows;
}

std::vector<double> log_grid(double lo, double hi, Index n)
{
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi) || n < 2) {
    throw Error("bad-sweep", "need 0 < w_lo < w_hi and at least 2 points");
  }
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (Index k = 0; k < n; ++k) {
    grid[static_cast<std::size_t>(k)] =
      std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

FrequencyResponse frequency_response(const StateSpaceModel &model, Channel entry,
                                     const std::vector<double> &omega)
{
  model.validate();
  check_entry(model, entry);
  FrequencyResponse resp;
  resp.omega = omega;
  for (double w : omega) {
    try {
      const Complex g = transfer_eval(model, Complex(0.0, w))(entry.output, entry.input);
      resp.mag_db.push_back(20.0 * std::log10(std::abs(g)));
      resp.phase.push_back(std::arg(g));
      resp.at_pole.push_back(false);
    }
    catch (const Error &e) {
      if (e.code() != "eval-at-pole") {
        throw;
      }
      resp.mag_db.push_back(kNaN);
      resp.phase.push_back(kNaN);
      resp.at_pole.push_back(true);
    }
  }
  return resp;
}

double SweepResult::max_mag_gap_db() const
{
  double gap = 0.0;
  for (std::size_t k = 0; k < omega.size(); ++k) {
    if (!flagged[k]) {
      gap = std::max(gap, std::abs(mag_full_db[k] - mag_red_db[k]));
    }
  }
  return gap;
}

SweepResult freq_sweep(const StateSpaceModel &full, Channel entry_full,
                       const StateSpaceModel &reduced, Channel entry_reduced, double w_lo,
                       double w_hi, Index n_points)
{
  const std::vector<double> grid = log_grid(w_lo, w_hi, n_points);
  const FrequencyResponse f = frequency_response(full, entry_full, grid);
  const FrequencyResponse r = frequency_response(reduced, entry_reduced, grid);
  SweepResult out;
  out.omega = grid;
  out.mag_full_db = f.mag_db;
  out.mag_red_db = r.mag_db;
  out.phase_full = f.phase;
  out.phase_red = r.phase;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.flagged.push_back(f.at_pole[k] || r.at_pole[k]);
  }
  return out;
}

TrajectoryError traj_error(const Trajectory &a, const Trajectory &b, Index output)
{
  const double tol = 1e-12 * std::max(1.0, std::abs(a.dt));
  if (a.samples() != b.samples() || std::abs(a.t0 - b.t0) > tol || std::abs(a.dt - b.dt) > tol) {
    throw Error("grid-mismatch", "trajectories are sampled on different grids");
  }
  if (output < 0 || output >= a.outputs.rows() || output >= b.outputs.rows()) {
    throw Error("bad-entry", "output row out of range");
  }
  TrajectoryError err;
  const Index n = a.samples();
  double sum = 0.0;
  for (Index k = 0; k < n; ++k) {
    const double e = std::abs(a.outputs(output, k) - b.outputs(output, k));
    sum += e * e;
    if (e > err.max_abs) {
      err.max_abs = e;
      err.time_of_max = a.time(k);
    }
  }
  err.rms = n > 0 ? std::sqrt(sum / static_cast<double>(n)) : 0.0;
  return err;
}

double rms_deviation(const Trajectory &traj, Index output)
{
  const Index n = traj.samples();
  if (n == 0) {
    return 0.0;
  }
  const RowVector dev = traj.outputs.row(output).array() - traj.outputs(output, 0);
  return std::sqrt(dev.squaredNorm() / static_cast<double>(n));
}

}  // namespace modred

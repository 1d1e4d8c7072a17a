// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MODRED_COMPARE_HPP
#define MODRED_COMPARE_HPP

#include <vector>

#include "modred/lti.hpp"

namespace modred
{

/// (f_full - f_reduced) / f_full * 100. Both zero gives 0; a zero reference
/// with a nonzero reduced frequency throws "zero-reference".
double frequency_error_pct(double f_full, double f_reduced);

struct ModePair
{
  Complex full;
  Complex reduced;
  double distance = 0.0;
  double frequency_error_pct = 0.0;  // NaN for the zero-reference case
};

struct ModePairing
{
  std::vector<ModePair> pairs;  // in the order the reduced modes were matched
  std::vector<Complex> unmatched_full;
};

// Greedy nearest-neighbour matching in the complex plane. Reduced modes are
// taken by ascending |Re| and each claims the closest unclaimed full mode.
// Inputs are put in a canonical order first, so the result does not depend
// on the row order of either table.
ModePairing pair_modes(const ModeTable &full, const ModeTable &reduced);

struct ModeErrorRow
{
  double f_full = 0.0;
  double f_reduced = 0.0;
  double re_full = 0.0;
  double re_reduced = 0.0;
  double error_pct = 0.0;
};

/// Paired modes of both models, ascending full-model |Re|.
std::vector<ModeErrorRow> mode_error_table(const StateSpaceModel &full,
                                           const StateSpaceModel &reduced);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, Index n);

struct FrequencyResponse
{
  std::vector<double> omega;
  std::vector<double> mag_db;  // NaN where at_pole
  std::vector<double> phase;   // radians in (-pi, pi]
  std::vector<bool> at_pole;
};

/// G_entry(j w) on the given grid; "eval-at-pole" points are flagged.
FrequencyResponse frequency_response(const StateSpaceModel &model, Channel entry,
                                     const std::vector<double> &omega);

struct SweepResult
{
  std::vector<double> omega;
  std::vector<double> mag_full_db;
  std::vector<double> mag_red_db;
  std::vector<double> phase_full;
  std::vector<double> phase_red;
  std::vector<bool> flagged;  // either model sat on a pole

  /// Largest |mag_full_db - mag_red_db| over unflagged points.
  double max_mag_gap_db() const;
};

// Both models on one grid. The entries are given separately because a SISO
// reduced model answers for a single channel of the full one. Throws
// "bad-sweep" for an invalid grid and "bad-entry" for an out-of-range entry.
SweepResult freq_sweep(const StateSpaceModel &full, Channel entry_full,
                       const StateSpaceModel &reduced, Channel entry_reduced, double w_lo,
                       double w_hi, Index n_points);

struct TrajectoryError
{
  double rms = 0.0;
  double max_abs = 0.0;
  double time_of_max = 0.0;
};

/// Error on output row `output` of two trajectories on the same grid;
/// "grid-mismatch" otherwise.
TrajectoryError traj_error(const Trajectory &a, const Trajectory &b, Index output);

/// RMS of output row `output` about its first sample.
double rms_deviation(const Trajectory &traj, Index output);

}  // namespace modred

#endif  // MODRED_COMPARE_HPP

// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MODRED_LTI_IO_HPP
#define MODRED_LTI_IO_HPP

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "modred/lti.hpp"

namespace modred
{

using Json = nlohmann::json;

/// Decimal text with 15 significant digits. Non-finite values print as
/// "nan", "inf" or "-inf".
std::string format_number(double value);

/// Rounds to the value whose shortest round-trip text has at most 15
/// significant digits, so JSON dumps stay at report precision.
double round15(double value);

// {"n", "m", "p", "A", "B", "C", "D"} with row-major flat arrays, plus
// optional "state_names" / "input_names" / "output_names".
Json model_to_json(const StateSpaceModel &model);
StateSpaceModel model_from_json(const Json &doc);

/// Header `t,x1..xn[,y1..yp]`.
void write_trajectory_csv(std::ostream &out, const Trajectory &traj, bool include_outputs = true);

/// Writes one CSV row; values go through format_number.
void write_csv_row(std::ostream &out, const std::vector<double> &values);

}  // namespace modred

#endif  // MODRED_LTI_IO_HPP

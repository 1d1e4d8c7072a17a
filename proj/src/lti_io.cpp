// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#include "modred/lti_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "modred/error.hpp"

namespace modred
{

namespace
{

Json matrix_to_flat(const Matrix &M)
{
  Json arr = Json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      arr.push_back(round15(M(i, j)));
    }
  }
  return arr;
}

// Accepts either a flat row-major array or an array of rows.
Matrix matrix_from_json(const Json &doc, const char *key, Index rows, Index cols)
{
  if (!doc.contains(key)) {
    throw Error("parse-error", std::string("missing field \"") + key + "\"");
  }
  const Json &arr = doc.at(key);
  if (!arr.is_array()) {
    throw Error("parse-error", std::string("field \"") + key + "\" must be an array");
  }
  Matrix M(rows, cols);
  const bool nested = !arr.empty() && arr.front().is_array();
  if (nested) {
    if (static_cast<Index>(arr.size()) != rows) {
      throw Error("parse-error", std::string("field \"") + key + "\" has the wrong row count");
    }
    for (Index i = 0; i < rows; ++i) {
      const Json &row = arr[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
        throw Error("parse-error", std::string("field \"") + key + "\" has a ragged row");
      }
      for (Index j = 0; j < cols; ++j) {
        M(i, j) = row[static_cast<std::size_t>(j)].get<double>();
      }
    }
    return M;
  }
  if (static_cast<Index>(arr.size()) != rows * cols) {
    throw Error("parse-error", std::string("field \"") + key + "\" has the wrong length");
  }
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      M(i, j) = arr[static_cast<std::size_t>(i * cols + j)].get<double>();
    }
  }
  return M;
}

std::vector<std::string> labels_from_json(const Json &doc, const char *key)
{
  if (!doc.contains(key)) {
    return {};
  }
  return doc.at(key).get<std::vector<std::string>>();
}

}  // namespace

std::string format_number(double value)
{
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.15g", value == 0.0 ? 0.0 : value);
  return buf;
}

double round15(double value)
{
  if (!std::isfinite(value)) {
    return value;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.15g", value);
  return std::strtod(buf, nullptr) + 0.0;
}

Json model_to_json(const StateSpaceModel &model)
{
  Json doc;
  doc["n"] = model.order();
  doc["m"] = model.inputs();
  doc["p"] = model.outputs();
  doc["A"] = matrix_to_flat(model.A);
  doc["B"] = matrix_to_flat(model.B);
  doc["C"] = matrix_to_flat(model.C);
  doc["D"] = matrix_to_flat(model.D);
  if (!model.state_names.empty()) {
    doc["state_names"] = model.state_names;
  }
  if (!model.input_names.empty()) {
    doc["input_names"] = model.input_names;
  }
  if (!model.output_names.empty()) {
    doc["output_names"] = model.output_names;
  }
  return doc;
}

StateSpaceModel model_from_json(const Json &doc)
{
  try {
    const Index n = doc.at("n").get<Index>();
    const Index m = doc.at("m").get<Index>();
    const Index p = doc.at("p").get<Index>();
    if (n < 0 || m < 0 || p < 0) {
      throw Error("parse-error", "negative dimension");
    }
    StateSpaceModel model{matrix_from_json(doc, "A", n, n), matrix_from_json(doc, "B", n, m),
                          matrix_from_json(doc, "C", p, n), matrix_from_json(doc, "D", p, m),
                          labels_from_json(doc, "state_names"),
                          labels_from_json(doc, "input_names"),
                          labels_from_json(doc, "output_names")};
    model.validate();
    return model;
  }
  catch (const Json::exception &e) {
    throw Error("parse-error", e.what());
  }
}

void write_csv_row(std::ostream &out, const std::vector<double> &values)
{
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) {
      out << ',';
    }
    out << format_number(values[i]);
  }
  out << '\n';
}

void write_trajectory_csv(std::ostream &out, const Trajectory &traj, bool include_outputs)
{
  const Index n = traj.states.rows();
  const Index p = include_outputs ? traj.outputs.rows() : 0;
  out << 't';
  for (Index i = 0; i < n; ++i) {
    out << ",x" << (i + 1);
  }
  for (Index i = 0; i < p; ++i) {
    out << ",y" << (i + 1);
  }
  out << '\n';
  std::vector<double> row;
  for (Index k = 0; k < traj.samples(); ++k) {
    row.clear();
    row.push_back(traj.time(k));
    for (Index i = 0; i < n; ++i) {
      row.push_back(traj.states(i, k));
    }
    for (Index i = 0; i < p; ++i) {
      row.push_back(traj.outputs(i, k));
    }
    write_csv_row(out, row);
  }
}

}  // namespace modred

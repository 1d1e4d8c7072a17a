// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "modred/error.hpp"
#include "modred/power.hpp"

namespace modred
{

namespace
{

using Json = nlohmann::json;

[[noreturn]] void bad_field(const std::string &path, const std::string &what)
{
  throw Error("parse-error", path + ": " + what);
}

const Json &require(const Json &obj, const char *key, const std::string &path)
{
  if (!obj.is_object() || !obj.contains(key)) {
    bad_field(path + "." + key, "missing");
  }
  return obj.at(key);
}

double number(const Json &obj, const char *key, const std::string &path)
{
  const Json &v = require(obj, key, path);
  if (!v.is_number()) {
    bad_field(path + "." + key, "expected a number");
  }
  return v.get<double>();
}

double number_or(const Json &obj, const char *key, const std::string &path, double fallback)
{
  return obj.contains(key) ? number(obj, key, path) : fallback;
}

int integer(const Json &obj, const char *key, const std::string &path)
{
  const Json &v = require(obj, key, path);
  if (!v.is_number_integer()) {
    bad_field(path + "." + key, "expected an integer");
  }
  return v.get<int>();
}

const Json &array(const Json &obj, const char *key, const std::string &path)
{
  const Json &v = require(obj, key, path);
  if (!v.is_array()) {
    bad_field(path + "." + key, "expected an array");
  }
  return v;
}

BusKind bus_kind(const Json &obj, const std::string &path)
{
  const Json &v = require(obj, "kind", path);
  const std::string s = v.is_string() ? v.get<std::string>() : std::string();
  if (s == "PQ" || s == "pq") {
    return BusKind::PQ;
  }
  if (s == "PV" || s == "pv") {
    return BusKind::PV;
  }
  if (s == "slack" || s == "Slack") {
    return BusKind::Slack;
  }
  bad_field(path + ".kind", "expected \"PQ\", \"PV\" or \"slack\"");
}

}  // namespace

Network parse_network(const std::string &text)
{
  Json doc;
  try {
    doc = Json::parse(text);
  }
  catch (const Json::parse_error &e) {
    throw Error("parse-error", std::string("$: ") + e.what());
  }
  if (!doc.is_object()) {
    bad_field("$", "expected an object");
  }

  Network net;
  if (doc.contains("name") && doc["name"].is_string()) {
    net.name = doc["name"].get<std::string>();
  }
  net.base_mva = number_or(doc, "base_mva", "$", 100.0);
  net.f_s = number_or(doc, "f_s", "$", 60.0);

  const Json &buses = array(doc, "buses", "$");
  for (std::size_t i = 0; i < buses.size(); ++i) {
    const std::string path = "$.buses[" + std::to_string(i) + "]";
    const Json &b = buses[i];
    Bus bus;
    bus.id = integer(b, "id", path);
    bus.kind = bus_kind(b, path);
    bus.p_load = number_or(b, "p_load", path, 0.0);
    bus.q_load = number_or(b, "q_load", path, 0.0);
    bus.g_shunt = number_or(b, "g_shunt", path, 0.0);
    bus.b_shunt = number_or(b, "b_shunt", path, 0.0);
    bus.v_setpoint = bus.kind == BusKind::PQ ? number_or(b, "v_setpoint", path, 1.0)
                                             : number(b, "v_setpoint", path);
    net.buses.push_back(bus);
  }

  const Json &branches = array(doc, "branches", "$");
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const std::string path = "$.branches[" + std::to_string(i) + "]";
    const Json &b = branches[i];
    Branch br;
    br.from = integer(b, "from", path);
    br.to = integer(b, "to", path);
    br.r = number_or(b, "r", path, 0.0);
    br.x = number(b, "x", path);
    br.b = number_or(b, "b", path, 0.0);
    br.tap = number_or(b, "tap", path, 1.0);
    if (br.tap == 0.0) {
      br.tap = 1.0;  // 0 conventionally means "no transformer"
    }
    net.branches.push_back(br);
  }

  const Json &gens = array(doc, "generators", "$");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string path = "$.generators[" + std::to_string(i) + "]";
    const Json &g = gens[i];
    GeneratorSpec spec;
    spec.name = g.contains("name") && g["name"].is_string() ? g["name"].get<std::string>()
                                                            : "G" + std::to_string(i + 1);
    spec.bus = integer(g, "bus", path);
    spec.H = number(g, "H", path);
    spec.D = number_or(g, "D", path, 0.0);
    spec.xd_prime = number(g, "xd_prime", path);
    spec.p_gen = number_or(g, "p_gen", path, 0.0);
    net.generators.push_back(spec);
  }

  net.validate();
  return net;
}

Network load_network(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error("file-not-found", path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_network(text.str());
}

}  // namespace modred

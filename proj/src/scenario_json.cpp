#include "dlcfar/scenario_json.hpp"

#include <fstream>
#include <sstream>

namespace dlcfar {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing field \"" + key + "\"");
  return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

int integer(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_array()) throw ConfigError(where + "." + key + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(where + "." + key + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::string text(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

ClutterModel clutter_from_json(const json& c) {
  if (!c.is_object()) throw ConfigError("clutter: expected an object");
  const std::string type = text(c, "type", "clutter");
  if (type == "toeplitz") {
    ToeplitzClutter t;
    t.power = number(c, "power", "clutter");
    t.one_lag = number(c, "one_lag", "clutter");
    return t;
  }
  if (type == "lowrank") {
    LowRankClutter lr;
    lr.angles_deg = numbers(c, "angles_deg", "clutter");
    if (c.contains("powers")) {
      lr.powers = numbers(c, "powers", "clutter");
    } else {
      lr.powers.assign(lr.angles_deg.size(), number(c, "power", "clutter"));
    }
    return lr;
  }
  throw ConfigError("clutter.type: unknown value \"" + type + "\" (toeplitz | lowrank)");
}

TargetModel target_from_json(const json& t) {
  if (!t.is_object()) throw ConfigError("target: expected an object");
  const std::string model = text(t, "model", "target");
  if (model == "none") return NoTarget{};
  if (model == "swerling0") {
    return Swerling0{{number_or(t, "amplitude_re", 0.0, "target"), number_or(t, "amplitude_im", 0.0, "target")}};
  }
  if (model == "swerling1") {
    const double p = number(t, "power", "target");
    if (!(p >= 0.0)) throw ConfigError("target.power: must be nonnegative");
    return Swerling1{p};
  }
  throw ConfigError("target.model: unknown value \"" + model + "\" (none | swerling0 | swerling1)");
}

}  // namespace

ScenarioDocument scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("scenario: top level must be an object");
  ScenarioDocument out;
  Scenario& sc = out.scenario;
  sc.N = integer(doc, "N", "scenario");
  sc.K = integer(doc, "K", "scenario");
  sc.clutter = clutter_from_json(field(doc, "clutter", "scenario"));
  sc.noise_power = number(doc, "noise_power", "scenario");
  sc.steering_deg = number(doc, "steering_deg", "scenario");
  if (doc.contains("target")) out.target = target_from_json(doc.at("target"));
  sc.validate();
  return out;
}

ScenarioDocument parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

ScenarioDocument load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

json to_json(const Scenario& sc) {
  json doc;
  doc["N"] = sc.N;
  doc["K"] = sc.K;
  if (const auto* t = std::get_if<ToeplitzClutter>(&sc.clutter)) {
    doc["clutter"] = {{"type", "toeplitz"}, {"power", t->power}, {"one_lag", t->one_lag}};
  } else {
    const auto& lr = std::get<LowRankClutter>(sc.clutter);
    doc["clutter"] = {{"type", "lowrank"}, {"angles_deg", lr.angles_deg}, {"powers", lr.powers}};
  }
  doc["noise_power"] = sc.noise_power;
  doc["steering_deg"] = sc.steering_deg;
  return doc;
}

json to_json(const ScenarioDocument& d) {
  json doc = to_json(d.scenario);
  if (const auto* t0 = std::get_if<Swerling0>(&d.target)) {
    doc["target"] = {{"model", "swerling0"}, {"amplitude_re", t0->amplitude.real()},
                     {"amplitude_im", t0->amplitude.imag()}};
  } else if (const auto* t1 = std::get_if<Swerling1>(&d.target)) {
    doc["target"] = {{"model", "swerling1"}, {"power", t1->power}};
  }
  return doc;
}

}  // namespace dlcfar

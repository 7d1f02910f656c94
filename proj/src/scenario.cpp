#include "cimac/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cimac/errors.hpp"

namespace cimac {

namespace {

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

Belief parse_belief(const nlohmann::json& value, int agents, const std::string& what) {
  if (!value.is_array()) throw ParseError(what + " must be an array of numbers");
  std::vector<double> probs;
  probs.reserve(value.size());
  for (const auto& entry : value) {
    if (!entry.is_number()) throw ParseError(what + " must contain only numbers");
    probs.push_back(entry.get<double>());
  }
  try {
    return Belief(agents, std::move(probs));
  } catch (const InvalidInput& e) {
    throw ParseError(what + ": " + e.what());
  }
}

template <typename T>
T required(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("scenario is missing '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("scenario key '") + key + "' has the wrong type");
  }
}

template <typename T>
T optional_value(const nlohmann::json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("scenario key '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string ThresholdParams::label() const {
  return "policy-(" + format_number(x) + "," + format_number(y) + "," + format_number(z) + ")";
}

ThresholdParams parse_threshold_triple(const std::string& text) {
  ThresholdParams params;
  char trailing = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf%c", &params.x, &params.y, &params.z, &trailing) != 3) {
    throw ParseError("baseline must be three comma-separated numbers x,y,z, got '" + text + "'");
  }
  return params;
}

Scenario Scenario::with_belief(std::size_t index) const {
  Scenario out = *this;
  out.initial_beliefs = {initial_beliefs.at(index)};
  return out;
}

std::size_t Scenario::belief_index(const std::string& id) const {
  for (std::size_t i = 0; i < initial_beliefs.size(); ++i) {
    if (initial_beliefs[i].id == id) return i;
  }
  throw InvalidInput("scenario has no initial belief with id '" + id + "'");
}

void Scenario::validate() const {
  if (agents < 2) throw InvalidInput("agents must be at least 2");
  if (agents > 8) throw InvalidInput("agents above 8 are not supported");
  if (horizon < 1) throw InvalidInput("horizon must be at least 1");
  if (!(beta >= 0.0 && beta <= alpha && alpha <= 1.0)) {
    throw InvalidInput("need 0 <= beta <= alpha <= 1");
  }
  grid_divisions(grid_step);
  if (dedup_rounding < 0 || dedup_rounding > kMaxDedupRounding) {
    throw InvalidInput("dedup_rounding must lie in [0, 15]");
  }
  if (max_belief_states < 1) throw InvalidInput("max_belief_states must be positive");
  if (initial_beliefs.empty()) throw InvalidInput("scenario needs an initial belief");
  for (const auto& labeled : initial_beliefs) {
    if (labeled.belief.agents() != agents) {
      throw InvalidInput("initial belief '" + labeled.id + "' has the wrong agent count");
    }
  }
  for (const auto& b : baselines) {
    if (!(b.z >= 0.0 && b.z <= 1.0) || !(b.x >= 0.0) || !(b.y >= 0.0)) {
      throw InvalidInput("baseline " + b.label() + " needs z in [0,1] and x, y >= 0");
    }
  }
}

Scenario scenario_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("scenario must be a JSON object");
  Scenario s;
  s.agents = required<int>(doc, "agents");
  s.horizon = required<int>(doc, "horizon");
  s.alpha = required<double>(doc, "alpha");
  s.beta = required<double>(doc, "beta");
  s.grid_step = required<double>(doc, "grid_step");
  try {
    s.prescription_space = parse_variant(required<std::string>(doc, "prescription_space"));
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }
  s.dedup_rounding = optional_value<int>(doc, "dedup_rounding", 9);
  s.max_belief_states = optional_value<std::size_t>(doc, "max_belief_states", 2'000'000);
  if (s.agents < 2 || s.agents > 8) throw ParseError("agents must lie in [2, 8]");

  if (doc.contains("initial_belief")) {
    s.initial_beliefs.push_back(
        {optional_value<std::string>(doc, "belief_id", "initial"),
         parse_belief(doc.at("initial_belief"), s.agents, "initial_belief")});
  }
  if (doc.contains("initial_beliefs")) {
    const auto& list = doc.at("initial_beliefs");
    if (!list.is_array()) throw ParseError("initial_beliefs must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& item = list[i];
      const std::string fallback_id = "b" + std::to_string(i + 1);
      if (item.is_array()) {
        s.initial_beliefs.push_back({fallback_id, parse_belief(item, s.agents, fallback_id)});
      } else if (item.is_object() && item.contains("belief")) {
        const std::string id = optional_value<std::string>(item, "id", fallback_id);
        s.initial_beliefs.push_back({id, parse_belief(item.at("belief"), s.agents, id)});
      } else {
        throw ParseError("initial_beliefs entries must be arrays or {id, belief} objects");
      }
    }
  }
  if (s.initial_beliefs.empty()) throw ParseError("scenario is missing 'initial_belief'");

  if (doc.contains("baselines")) {
    const auto& list = doc.at("baselines");
    if (!list.is_array()) throw ParseError("baselines must be an array");
    for (const auto& item : list) {
      ThresholdParams params;
      if (item.is_object()) {
        params.x = required<double>(item, "x");
        params.y = required<double>(item, "y");
        params.z = required<double>(item, "z");
      } else if (item.is_array() && item.size() == 3) {
        params.x = item[0].get<double>();
        params.y = item[1].get<double>();
        params.z = item[2].get<double>();
      } else {
        throw ParseError("baselines entries must be {x, y, z} objects");
      }
      s.baselines.push_back(params);
    }
  }
  try {
    s.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }
  return s;
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json doc;
  doc["agents"] = s.agents;
  doc["horizon"] = s.horizon;
  doc["alpha"] = s.alpha;
  doc["beta"] = s.beta;
  doc["grid_step"] = s.grid_step;
  doc["prescription_space"] = std::string(variant_name(s.prescription_space));
  doc["dedup_rounding"] = s.dedup_rounding;
  doc["max_belief_states"] = s.max_belief_states;
  if (s.initial_beliefs.size() == 1) {
    doc["belief_id"] = s.initial_beliefs[0].id;
    doc["initial_belief"] = s.initial_beliefs[0].belief.probs();
  } else {
    auto list = nlohmann::json::array();
    for (const auto& labeled : s.initial_beliefs) {
      list.push_back({{"id", labeled.id}, {"belief", labeled.belief.probs()}});
    }
    doc["initial_beliefs"] = list;
  }
  auto baselines = nlohmann::json::array();
  for (const auto& b : s.baselines) baselines.push_back({{"x", b.x}, {"y", b.y}, {"z", b.z}});
  doc["baselines"] = baselines;
  return doc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("scenario file " + path.string() + " is not valid JSON: " + e.what());
  }
  return scenario_from_json(doc);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string scenario_fingerprint(const Scenario& s) {
  nlohmann::json doc;
  doc["agents"] = s.agents;
  doc["horizon"] = s.horizon;
  doc["alpha"] = s.alpha;
  doc["beta"] = s.beta;
  doc["grid_step"] = s.grid_step;
  doc["prescription_space"] = std::string(variant_name(s.prescription_space));
  doc["dedup_rounding"] = s.dedup_rounding;
  doc["initial_belief"] = s.initial_belief().probs();
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(doc.dump())));
  return buf;
}

}  // namespace cimac

#include "cimac/policy_io.hpp"

#include <fstream>

#include "cimac/errors.hpp"

namespace cimac {

namespace {

constexpr const char* kFormat = "cimac-policy";
constexpr int kVersion = 1;

}  // namespace

nlohmann::json policy_to_json(const SolvedPolicy& policy) {
  nlohmann::json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["fingerprint"] = policy.fingerprint();
  nlohmann::json scenario = scenario_to_json(policy.scenario());
  scenario.erase("baselines");
  doc["scenario"] = scenario;
  auto steps = nlohmann::json::array();
  for (int t = 1; t <= policy.horizon(); ++t) {
    const BeliefSet& beliefs = policy.beliefs_at(t);
    const auto& values = policy.values_at(t);
    auto entries = nlohmann::json::array();
    for (std::size_t i = 0; i < beliefs.size(); ++i) {
      const Prescription& g = values[i].argmin;
      entries.push_back({{"belief", beliefs[i].probs()},
                         {"value", values[i].value},
                         {"prescription", {{"de", g.de}, {"ag", g.ag}, {"pa", g.pa}}}});
    }
    steps.push_back({{"t", t}, {"entries", entries}});
  }
  doc["steps"] = steps;
  return doc;
}

SolvedPolicy policy_from_json(const nlohmann::json& doc) {
  try {
    if (doc.value("format", "") != kFormat) throw ParseError("not a policy file");
    if (doc.value("version", 0) != kVersion) throw ParseError("unsupported policy file version");
    Scenario scenario = scenario_from_json(doc.at("scenario"));
    const int T = scenario.horizon;
    const auto& steps = doc.at("steps");
    if (!steps.is_array() || steps.size() != static_cast<std::size_t>(T)) {
      throw ParseError("policy file needs one step per slot of the horizon");
    }
    ReachableSets reachable;
    reachable.sets.assign(T, BeliefSet(scenario.agents, scenario.dedup_rounding));
    std::vector<std::vector<ValueEntry>> values(T);
    for (int t = 1; t <= T; ++t) {
      const auto& step = steps[t - 1];
      if (step.at("t").get<int>() != t) throw ParseError("policy steps are out of order");
      for (const auto& entry : step.at("entries")) {
        Belief belief(scenario.agents, entry.at("belief").get<std::vector<double>>());
        const auto& g = entry.at("prescription");
        ValueEntry value{entry.at("value").get<double>(),
                         {g.at("de").get<double>(), g.at("ag").get<double>(),
                          g.at("pa").get<double>()}};
        if (!reachable.sets[t - 1].insert(belief)) {
          throw ParseError("policy file repeats a belief at t=" + std::to_string(t));
        }
        values[t - 1].push_back(value);
      }
    }
    SolvedPolicy policy(std::move(scenario), std::move(reachable), std::move(values));
    if (policy.fingerprint() != doc.at("fingerprint").get<std::string>()) {
      throw ParseError("policy file fingerprint does not match its embedded scenario");
    }
    return policy;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed policy file: ") + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("malformed policy file: ") + e.what());
  } catch (const InternalInconsistency& e) {
    throw ParseError(std::string("malformed policy file: ") + e.what());
  }
}

void save_policy(const SolvedPolicy& policy, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write policy file " + path.string());
  out << policy_to_json(policy).dump(1) << '\n';
}

SolvedPolicy load_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open policy file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("policy file " + path.string() + " is not valid JSON: " + e.what());
  }
  return policy_from_json(doc);
}

}  // namespace cimac

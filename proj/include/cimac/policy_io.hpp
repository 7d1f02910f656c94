#pragma once

#include <filesystem>

#include <json.hpp>

#include "cimac/solver.hpp"

namespace cimac {

// Policy file: the solved scenario, its fingerprint, and per slot the list
// of {belief, value, prescription: {de, ag, pa}}. Numbers are written with
// round-trip precision, so save followed by load reproduces every value
// bit for bit.
nlohmann::json policy_to_json(const SolvedPolicy& policy);
SolvedPolicy policy_from_json(const nlohmann::json& doc);

void save_policy(const SolvedPolicy& policy, const std::filesystem::path& path);
SolvedPolicy load_policy(const std::filesystem::path& path);

}  // namespace cimac

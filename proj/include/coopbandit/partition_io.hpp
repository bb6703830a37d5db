#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "coopbandit/partition.hpp"
#include "coopbandit/validate.hpp"

namespace coopbandit {

// Partition dump: arrays `centers`, `center_of`, `origin_of`, `delay`,
// `mass_m`, `mass_d`. Unassigned entries are JSON null.

inline nlohmann::json partition_to_json(const Partition& p) {
  using nlohmann::json;
  auto id_or_null = [](NodeId v) { return v == kNoNode ? json(nullptr) : json(v); };
  json out;
  out["centers"] = p.centers;
  json center_of = json::array(), origin_of = json::array(), delay = json::array(), mass_m = json::array(),
       mass_d = json::array();
  for (std::size_t v = 0; v < p.node_count(); ++v) {
    center_of.push_back(id_or_null(p.center_of[v]));
    origin_of.push_back(id_or_null(p.origin_of[v]));
    delay.push_back(p.delay[v] == kUnreachable ? json(nullptr) : json(p.delay[v]));
    mass_m.push_back(p.mass[v].center_mass());
    mass_d.push_back(p.mass[v].depth());
  }
  out["center_of"] = std::move(center_of);
  out["origin_of"] = std::move(origin_of);
  out["delay"] = std::move(delay);
  out["mass_m"] = std::move(mass_m);
  out["mass_d"] = std::move(mass_d);
  return out;
}

inline Partition partition_from_json(const nlohmann::json& j) {
  try {
    Partition p;
    p.centers = j.at("centers").get<std::vector<NodeId>>();
    const auto& center_of = j.at("center_of");
    const auto& origin_of = j.at("origin_of");
    const auto& delay = j.at("delay");
    const auto& mass_m = j.at("mass_m");
    const auto& mass_d = j.at("mass_d");
    const std::size_t n = center_of.size();
    if (origin_of.size() != n || delay.size() != n || mass_m.size() != n || mass_d.size() != n)
      throw Error(ErrorCode::Parse, "partition arrays have different lengths");
    auto id = [](const nlohmann::json& x) { return x.is_null() ? kNoNode : x.get<NodeId>(); };
    for (std::size_t v = 0; v < n; ++v) {
      p.center_of.push_back(id(center_of[v]));
      p.origin_of.push_back(id(origin_of[v]));
      p.delay.push_back(delay[v].is_null() ? kUnreachable : delay[v].get<std::size_t>());
      p.mass.emplace_back(mass_m[v].get<std::uint32_t>(), mass_d[v].get<std::uint32_t>());
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("partition json: ") + e.what());
  }
}

inline nlohmann::json report_to_json(const ValidationReport& r) {
  nlohmann::json out;
  out["all_passed"] = r.all_passed();
  auto& checks = out["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"witness", c.witness}});
  return out;
}

}  // namespace coopbandit

#pragma once

#include <set>
#include <string>
#include <vector>

#include "dtplan/io.hpp"
#include "dtplan/network.hpp"

namespace dtplan {

// One transfer path per demand: a chosen origin and the ordered links of a
// simple path from that origin to the destination.
struct PlanEntry {
  std::string demand;
  Rational size;
  int origin = -1;            // site index
  std::vector<int> links;     // link indices, in path order
};

struct Plan {
  int destination = -1;
  std::vector<PlanEntry> entries;

  bool operator==(const Plan& o) const {
    if (destination != o.destination || entries.size() != o.entries.size())
      return false;
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (entries[i].demand != o.entries[i].demand ||
          entries[i].origin != o.entries[i].origin ||
          entries[i].links != o.entries[i].links)
        return false;
    return true;
  }
  bool operator<(const Plan& o) const {
    auto key = [](const Plan& p) {
      std::vector<std::vector<int>> k;
      for (const PlanEntry& e : p.entries) k.push_back(e.links);
      return k;
    };
    return key(*this) < key(o);
  }
};

// Structural validity, independent of how the plan was produced: each entry
// must be a simple path from its origin to the destination over real links.
// Returns human-readable violations; empty means valid.
inline std::vector<std::string> validate_plan(const Network& net, const Plan& plan) {
  std::vector<std::string> bad;
  for (const PlanEntry& pe : plan.entries) {
    if (pe.links.empty()) {
      bad.push_back("demand " + pe.demand + ": empty path");
      continue;
    }
    std::set<int> visited;
    int at = pe.origin;
    visited.insert(at);
    bool ok = true;
    for (int e : pe.links) {
      if (e < 0 || e >= net.link_count()) {
        bad.push_back("demand " + pe.demand + ": unknown link in path");
        ok = false;
        break;
      }
      const Link& l = net.link(e);
      if (l.from != at) {
        bad.push_back("demand " + pe.demand + ": path breaks at link " + l.id);
        ok = false;
        break;
      }
      at = l.to;
      if (!visited.insert(at).second) {
        bad.push_back("demand " + pe.demand + ": repeated site " + net.site(at).id);
        ok = false;
        break;
      }
    }
    if (ok && at != plan.destination)
      bad.push_back("demand " + pe.demand + ": path does not end at the destination");
  }
  return bad;
}

// Checks in addition that each entry starts at one of the demand's origins.
inline std::vector<std::string> validate_plan(const Network& net,
                                              const NormalizedRequest& req,
                                              const Plan& plan) {
  std::vector<std::string> bad = validate_plan(net, plan);
  if (plan.destination != req.destination)
    bad.push_back("plan destination differs from request destination");
  if (plan.entries.size() != req.demands.size())
    bad.push_back("plan does not cover every demand exactly once");
  for (const PlanEntry& pe : plan.entries) {
    const NormalizedDemand* nd = nullptr;
    for (const NormalizedDemand& d : req.demands)
      if (d.id == pe.demand) nd = &d;
    if (!nd) {
      bad.push_back("plan names unknown demand " + pe.demand);
      continue;
    }
    bool from_origin = false;
    for (int o : nd->origins)
      if (o == pe.origin) from_origin = true;
    if (!from_origin)
      bad.push_back("demand " + pe.demand + ": path does not start at an origin");
  }
  return bad;
}

inline nlohmann::json plan_to_json(const Network& net, const Plan& plan,
                                   const Rational* schedule_makespan = nullptr) {
  nlohmann::json doc;
  doc["destination"] = net.site(plan.destination).id;
  if (schedule_makespan) doc["schedule_makespan"] = schedule_makespan->to_string();
  doc["demands"] = nlohmann::json::array();
  for (const PlanEntry& pe : plan.entries) {
    nlohmann::json jd;
    jd["id"] = pe.demand;
    jd["size"] = number_to_json(pe.size);
    jd["origin"] = net.site(pe.origin).id;
    nlohmann::json path = nlohmann::json::array();
    for (int e : pe.links) path.push_back(net.link(e).id);
    jd["path"] = path;
    doc["demands"].push_back(jd);
  }
  return doc;
}

struct PlanDocument {
  Plan plan;
  std::optional<Rational> schedule_makespan;
};

inline PlanDocument parse_plan_document(const Network& net, const nlohmann::json& doc) {
  PlanDocument out;
  out.plan.destination = net.require_site(doc.at("destination").get<std::string>());
  if (doc.contains("schedule_makespan"))
    out.schedule_makespan =
        parse_number(doc["schedule_makespan"], "schedule_makespan");
  for (const auto& jd : doc.value("demands", nlohmann::json::array())) {
    PlanEntry pe;
    pe.demand = jd.at("id").get<std::string>();
    pe.size = jd.contains("size")
                  ? parse_number(jd["size"], "size of demand " + pe.demand)
                  : Rational(1);
    pe.origin = net.require_site(jd.at("origin").get<std::string>());
    for (const auto& le : jd.at("path"))
      pe.links.push_back(net.require_link(le.get<std::string>()));
    out.plan.entries.push_back(std::move(pe));
  }
  return out;
}

inline PlanDocument load_plan_file(const Network& net, const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("plan document parse failure: ") + e.what());
  }
  return parse_plan_document(net, doc);
}

}  // namespace dtplan

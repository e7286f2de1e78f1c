#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtplan/network.hpp"

namespace dtplan {

// Weights, sizes and limits are carried as JSON integers or as quoted
// decimal strings ("2.5"); floating-point JSON numbers are rejected so
// values stay exact end to end.
inline Rational parse_number(const nlohmann::json& j, const std::string& what) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      throw InputError(what + ": " + e.what());
    }
  }
  if (j.is_number_float())
    throw InputError(what + ": use an integer or a quoted decimal string");
  throw InputError(what + ": expected a number");
}

inline nlohmann::json number_to_json(const Rational& r) {
  if (!r.is_infinite() && r.den() == 1) return nlohmann::json(r.num());
  return nlohmann::json(r.to_string());
}

struct NetworkDocument {
  Network network;            // after shared-group transformation
  std::vector<SharedGroup> groups;
};

inline NetworkDocument parse_network_document(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("network document: expected an object");
  std::vector<Site> sites;
  for (const auto& js : doc.value("sites", nlohmann::json::array())) {
    Site s;
    if (js.is_string()) {
      s.id = js.get<std::string>();
    } else {
      s.id = js.at("id").get<std::string>();
      if (js.contains("storage_capacity"))
        s.storage_capacity =
            parse_number(js["storage_capacity"], "storage_capacity of " + s.id);
    }
    if (s.id.empty()) throw InputError("site with empty id");
    sites.push_back(std::move(s));
  }

  // Link endpoints are resolved against the declared sites before the
  // Network is constructed so diagnostics can name the offender.
  std::map<std::string, int> site_of;
  for (int i = 0; i < (int)sites.size(); ++i) site_of[sites[i].id] = i;

  std::vector<Link> links;
  for (const auto& jl : doc.value("links", nlohmann::json::array())) {
    Link l;
    l.id = jl.at("id").get<std::string>();
    std::string from = jl.at("from").get<std::string>();
    std::string to = jl.at("to").get<std::string>();
    auto fi = site_of.find(from);
    if (fi == site_of.end())
      throw InputError("link " + l.id + ": unknown site " + from);
    auto ti = site_of.find(to);
    if (ti == site_of.end())
      throw InputError("link " + l.id + ": unknown site " + to);
    l.from = fi->second;
    l.to = ti->second;
    l.weight = parse_number(jl.at("weight"), "weight of link " + l.id);
    if (!(Rational(0) < l.weight))
      throw InputError("nonpositive weight on link: " + l.id);
    if (jl.contains("max_streams")) {
      if (!jl["max_streams"].is_number_integer())
        throw InputError("max_streams of link " + l.id + ": expected an integer");
      l.max_streams = jl["max_streams"].get<int>();
    }
    links.push_back(std::move(l));
  }

  NetworkDocument out{Network(std::move(sites), std::move(links)), {}};
  for (const auto& jg : doc.value("shared_groups", nlohmann::json::array())) {
    SharedGroup g;
    g.site = jg.at("site").get<std::string>();
    std::string side = jg.at("side").get<std::string>();
    if (side == "incoming")
      g.side = SharedSide::Incoming;
    else if (side == "outgoing")
      g.side = SharedSide::Outgoing;
    else
      throw InputError("shared group at " + g.site +
                       ": side must be \"incoming\" or \"outgoing\"");
    for (const auto& m : jg.at("members")) g.member_links.push_back(m.get<std::string>());
    g.limit = parse_number(jg.at("limit"), "limit of shared group at " + g.site);
    out.groups.push_back(std::move(g));
  }
  if (!out.groups.empty()) out.network = apply_shared_groups(out.network, out.groups);
  return out;
}

inline NetworkDocument load_network_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("network document parse failure: ") + e.what());
  }
  return parse_network_document(doc);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("no such file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

inline NetworkDocument load_network_file(const std::string& path) {
  return load_network_text(read_file(path));
}

// Serializes the (already transformed) network; load -> save -> load is
// the identity on the transformed graph.
inline nlohmann::json network_to_json(const Network& net) {
  nlohmann::json doc;
  doc["sites"] = nlohmann::json::array();
  for (const Site& s : net.sites()) {
    nlohmann::json js;
    js["id"] = s.id;
    if (s.storage_capacity) js["storage_capacity"] = number_to_json(*s.storage_capacity);
    doc["sites"].push_back(js);
  }
  doc["links"] = nlohmann::json::array();
  for (const Link& l : net.links()) {
    nlohmann::json jl;
    jl["id"] = l.id;
    jl["from"] = net.site(l.from).id;
    jl["to"] = net.site(l.to).id;
    jl["weight"] = number_to_json(l.weight);
    if (l.max_streams != 1) jl["max_streams"] = l.max_streams;
    doc["links"].push_back(jl);
  }
  return doc;
}

inline Request parse_request_document(const nlohmann::json& doc) {
  Request req;
  req.destination = doc.at("destination").get<std::string>();
  for (const auto& jd : doc.value("demands", nlohmann::json::array())) {
    Demand d;
    d.id = jd.at("id").get<std::string>();
    d.size = jd.contains("size") ? parse_number(jd["size"], "size of demand " + d.id)
                                 : Rational(1);
    for (const auto& o : jd.at("origins")) d.origins.push_back(o.get<std::string>());
    req.demands.push_back(std::move(d));
  }
  return req;
}

inline Request load_request_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("request document parse failure: ") + e.what());
  }
  return parse_request_document(doc);
}

inline Request load_request_file(const std::string& path) {
  return load_request_text(read_file(path));
}

inline nlohmann::json request_to_json(const Request& req) {
  nlohmann::json doc;
  doc["destination"] = req.destination;
  doc["demands"] = nlohmann::json::array();
  for (const Demand& d : req.demands) {
    nlohmann::json jd;
    jd["id"] = d.id;
    jd["size"] = number_to_json(d.size);
    jd["origins"] = d.origins;
    doc["demands"].push_back(jd);
  }
  return doc;
}

// Shared tabular export: one row per transfer, makespan footer. Used by
// the scheduler, the P2P simulator and the execution simulator alike.
struct TransferRow {
  std::string demand;
  std::string link;
  Rational start;
  Rational end;
};

inline std::string transfer_log_csv(const std::vector<TransferRow>& rows,
                                    const Rational& makespan) {
  std::ostringstream out;
  out << "demand,link,start,end\n";
  for (const TransferRow& r : rows)
    out << r.demand << "," << r.link << "," << r.start.to_string() << ","
        << r.end.to_string() << "\n";
  out << "makespan," << makespan.to_string() << "\n";
  return out.str();
}

}  // namespace dtplan

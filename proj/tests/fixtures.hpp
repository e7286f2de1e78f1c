#pragma once

#include <string>

#include "dtplan/io.hpp"
#include "dtplan/network.hpp"

namespace fixtures {

// Three-site diamond used throughout: S -> M -> T plus a direct S -> T.
// Link ids are ordered so lexicographic tie-breaking follows path order.
inline dtplan::Network d1() {
  return dtplan::load_network_text(R"({
    "sites": ["S", "M", "T"],
    "links": [
      {"id": "L1", "from": "S", "to": "M", "weight": 2},
      {"id": "L2", "from": "M", "to": "T", "weight": 2},
      {"id": "L3", "from": "S", "to": "T", "weight": 5}
    ]
  })")
                       .network;
}

inline dtplan::Request one_demand(const std::string& id = "f",
                                  const std::string& origin = "S") {
  dtplan::Request req;
  req.destination = "T";
  req.demands.push_back({id, dtplan::Rational(1), {origin}});
  return req;
}

inline dtplan::Request two_demands() {
  dtplan::Request req;
  req.destination = "T";
  req.demands.push_back({"f1", dtplan::Rational(1), {"S"}});
  req.demands.push_back({"f2", dtplan::Rational(1), {"S"}});
  return req;
}

}  // namespace fixtures

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "dtplan/io.hpp"
#include "dtplan/network.hpp"

namespace dtplan {

// Five-site benchmark fixture. The site names follow the usual HENP grid
// layout with Prague as the destination; the link weights are a repo choice
// (well-connected BNL/LBNL, slower MIT/KISTI) and are versioned as data in
// data/benchmark_network.json, which must stay identical to this document.
inline const char* benchmark_network_json() {
  return R"({
  "sites": [
    {"id": "BNL"},
    {"id": "KISTI"},
    {"id": "LBNL"},
    {"id": "MIT"},
    {"id": "Prague"}
  ],
  "links": [
    {"id": "BNL-LBNL", "from": "BNL", "to": "LBNL", "weight": 3},
    {"id": "LBNL-BNL", "from": "LBNL", "to": "BNL", "weight": 3},
    {"id": "BNL-MIT", "from": "BNL", "to": "MIT", "weight": 3},
    {"id": "MIT-BNL", "from": "MIT", "to": "BNL", "weight": 3},
    {"id": "BNL-KISTI", "from": "BNL", "to": "KISTI", "weight": 3},
    {"id": "KISTI-BNL", "from": "KISTI", "to": "BNL", "weight": 3},
    {"id": "BNL-Prague", "from": "BNL", "to": "Prague", "weight": 2},
    {"id": "Prague-BNL", "from": "Prague", "to": "BNL", "weight": 2},
    {"id": "LBNL-MIT", "from": "LBNL", "to": "MIT", "weight": 3},
    {"id": "MIT-LBNL", "from": "MIT", "to": "LBNL", "weight": 3},
    {"id": "LBNL-KISTI", "from": "LBNL", "to": "KISTI", "weight": 4},
    {"id": "KISTI-LBNL", "from": "KISTI", "to": "LBNL", "weight": 4},
    {"id": "LBNL-Prague", "from": "LBNL", "to": "Prague", "weight": 4},
    {"id": "Prague-LBNL", "from": "Prague", "to": "LBNL", "weight": 4},
    {"id": "MIT-KISTI", "from": "MIT", "to": "KISTI", "weight": 5},
    {"id": "KISTI-MIT", "from": "KISTI", "to": "MIT", "weight": 5},
    {"id": "MIT-Prague", "from": "MIT", "to": "Prague", "weight": 4},
    {"id": "Prague-MIT", "from": "Prague", "to": "MIT", "weight": 4},
    {"id": "KISTI-Prague", "from": "KISTI", "to": "Prague", "weight": 4},
    {"id": "Prague-KISTI", "from": "Prague", "to": "KISTI", "weight": 4}
  ]
})";
}

inline const char* benchmark_destination() { return "Prague"; }

inline Network benchmark_network() {
  return load_network_text(benchmark_network_json()).network;
}

// Per-site probability that any given file is already present there. At
// least one site must hold everything, so origin sets are never empty.
struct OriginDistribution {
  std::map<std::string, double> probability;
};

inline OriginDistribution default_origin_distribution() {
  return OriginDistribution{{{"BNL", 1.0}, {"LBNL", 0.6}, {"MIT", 0.01}, {"KISTI", 0.05}}};
}

// n unit-size demands; each site joins an origin set independently with its
// probability. Same seed, same request, bit for bit.
inline Request generate_demands(int n, const OriginDistribution& dist,
                                std::uint64_t seed,
                                const std::string& destination = "Prague") {
  if (n < 0) throw InputError("negative demand count");
  bool guaranteed = false;
  for (const auto& [site, p] : dist.probability) {
    if (p < 0.0 || p > 1.0)
      throw InputError("probability out of range for site " + site);
    if (p >= 1.0) guaranteed = true;
  }
  if (!guaranteed) throw InputError("no guaranteed origin");

  std::mt19937_64 rng(seed);
  // Portable uniform in [0,1): top 53 bits of the generator output.
  auto uniform01 = [&rng] { return (double)(rng() >> 11) * (1.0 / 9007199254740992.0); };

  int width = (int)std::to_string(n).size();
  if (width < 3) width = 3;

  Request req;
  req.destination = destination;
  for (int i = 1; i <= n; ++i) {
    Demand d;
    std::string num = std::to_string(i);
    d.id = "f" + std::string(width - (int)num.size(), '0') + num;
    d.size = Rational(1);
    for (const auto& [site, p] : dist.probability) {
      if (p >= 1.0) {
        d.origins.push_back(site);
      } else if (p > 0.0 && uniform01() < p) {
        d.origins.push_back(site);
      }
    }
    req.demands.push_back(std::move(d));
  }
  return req;
}

}  // namespace dtplan

#pragma once

#include <random>
#include <string>
#include <vector>

#include "dtplan/network.hpp"
#include "dtplan/io.hpp"

namespace testgen {

struct Instance {
  dtplan::Network network;
  dtplan::Request request;
};

// Random oracle-guard-sized instances: up to 5 sites, 8 links, 4 demands,
// integer weights 1-5. Every demand is guaranteed a route to the
// destination; generation retries until that holds.
inline Instance random_instance(std::mt19937_64& rng, bool unit_sizes = false) {
  using namespace dtplan;
  for (;;) {
    int sites = 2 + (int)(rng() % 4);  // 2..5
    int dest = sites - 1;
    std::vector<Site> site_list;
    for (int s = 0; s < sites; ++s) site_list.push_back({std::string(1, 'A' + s), {}});

    int want_links = 1 + (int)(rng() % 8);
    std::vector<Link> links;
    std::vector<char> used(sites * sites, 0);
    for (int i = 0; i < want_links; ++i) {
      int from = (int)(rng() % sites);
      int to = (int)(rng() % sites);
      if (from == to || used[from * sites + to]) continue;
      used[from * sites + to] = 1;
      Link l;
      l.id = site_list[from].id + site_list[to].id;
      l.from = from;
      l.to = to;
      l.weight = Rational(1 + (int)(rng() % 5));
      links.push_back(l);
    }
    if (links.empty()) continue;
    Network net(std::move(site_list), std::move(links));

    int demand_count = 1 + (int)(rng() % 4);
    Request req;
    req.destination = net.site(dest).id;
    for (int d = 0; d < demand_count; ++d) {
      Demand dem;
      dem.id = "f" + std::to_string(d + 1);
      dem.size = unit_sizes ? Rational(1) : Rational(1 + (int)(rng() % 2));
      for (int s = 0; s < sites; ++s)
        if (s != dest && (rng() % 3) == 0) dem.origins.push_back(net.site(s).id);
      if (dem.origins.empty())
        dem.origins.push_back(net.site((int)(rng() % std::max(1, sites - 1))).id);
      req.demands.push_back(std::move(dem));
    }
    try {
      NormalizedRequest norm = validate_request(net, req);
      if (norm.demands.empty()) continue;  // keep instances nontrivial
      return {net, req};
    } catch (const InfeasibleError&) {
      continue;
    }
  }
}

}  // namespace testgen

#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dtplan/io.hpp"
#include "dtplan/network.hpp"

namespace dtplan {

struct P2PResult {
  Rational makespan;
  std::vector<TransferRow> transfers;
  std::uint64_t seed = 0;
};

// Baseline simulator: one observer per direct link from an origin site to
// the destination. A free observer claims, among unclaimed files present at
// its link's tail, one available at the fewest sites (rarest first), ties
// broken uniformly at random by the seeded generator. Files go over direct
// links only, each exactly once.
inline P2PResult simulate_p2p(const Network& net, const Request& request,
                              std::uint64_t seed) {
  NormalizedRequest norm = validate_request(net, request);
  P2PResult result;
  result.seed = seed;
  result.makespan = Rational(0);

  std::vector<std::vector<int>> direct(norm.demands.size());
  for (std::size_t d = 0; d < norm.demands.size(); ++d) {
    for (int o : norm.demands[d].origins)
      for (int e : net.out(o))
        if (net.link(e).to == norm.destination) direct[d].push_back(e);
    if (direct[d].empty())
      throw InfeasibleError("P2P infeasible for demand " + norm.demands[d].id);
  }

  std::set<int> observers;
  for (std::size_t d = 0; d < norm.demands.size(); ++d)
    for (int e : direct[d]) observers.insert(e);

  std::mt19937_64 rng(seed);
  std::vector<char> claimed(norm.demands.size(), 0);
  std::size_t unclaimed = norm.demands.size();

  // (time, link id, link index): deterministic event order.
  std::set<std::tuple<Rational, std::string, int>> free_at;
  for (int e : observers) free_at.insert({Rational(0), net.link(e).id, e});

  while (!free_at.empty() && unclaimed > 0) {
    auto [now, link_id, e] = *free_at.begin();
    free_at.erase(free_at.begin());
    int tail = net.link(e).from;

    std::vector<int> pool;
    std::size_t rarest = 0;
    for (std::size_t d = 0; d < norm.demands.size(); ++d) {
      if (claimed[d]) continue;
      bool here = false;
      for (int o : norm.demands[d].origins)
        if (o == tail) here = true;
      if (!here) continue;
      std::size_t card = norm.demands[d].origins.size();
      if (pool.empty() || card < rarest) {
        pool.assign(1, (int)d);
        rarest = card;
      } else if (card == rarest) {
        pool.push_back((int)d);
      }
    }
    if (pool.empty()) continue;  // observer retires, files never reappear

    int d = pool.size() == 1 ? pool[0] : pool[rng() % pool.size()];
    claimed[d] = 1;
    --unclaimed;
    Rational end = now + transfer_duration(norm.demands[d].size, net.link(e).weight);
    result.transfers.push_back({norm.demands[d].id, link_id, now, end});
    result.makespan = max(result.makespan, end);
    free_at.insert({end, link_id, e});
  }
  if (unclaimed > 0)
    throw InfeasibleError("P2P simulation stalled with undelivered files");
  return result;
}

}  // namespace dtplan

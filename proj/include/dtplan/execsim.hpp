#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dtplan/io.hpp"
#include "dtplan/network.hpp"
#include "dtplan/plan.hpp"

namespace dtplan {

struct ExecResult {
  Rational makespan;
  std::vector<TransferRow> transfers;
  std::map<std::string, int> peak_streams;  // per link id
};

// Greedy plan execution by per-link managers: as soon as a file is present
// at a link's tail and the link is its next hop, a manager with a free
// stream starts the transfer (FIFO by availability, ties by demand id).
// Durations are flat per transfer regardless of concurrent streams.
inline ExecResult simulate_execution(const Network& net, const Plan& plan,
                                     std::uint64_t /*seed*/ = 0) {
  std::vector<std::string> bad = validate_plan(net, plan);
  if (!bad.empty()) throw InputError("invalid plan: " + bad.front());

  struct Waiting {
    Rational available;
    std::string demand;
    int entry;
    bool operator<(const Waiting& o) const {
      if (available != o.available) return available < o.available;
      return demand < o.demand;
    }
  };
  struct Manager {
    int active = 0;
    int peak = 0;
    std::set<Waiting> queue;
  };

  ExecResult result;
  result.makespan = Rational(0);
  std::map<int, Manager> managers;  // keyed by link index (deterministic order)
  std::vector<std::size_t> next_hop(plan.entries.size(), 0);
  for (int e = 0; e < net.link_count(); ++e) result.peak_streams[net.link(e).id];

  for (std::size_t i = 0; i < plan.entries.size(); ++i)
    managers[plan.entries[i].links[0]].queue.insert(
        {Rational(0), plan.entries[i].demand, (int)i});

  struct Completion {
    Rational time;
    std::string demand;
    int entry;
    int link;
    bool operator<(const Completion& o) const {
      if (time != o.time) return time < o.time;
      if (demand != o.demand) return demand < o.demand;
      return link < o.link;
    }
  };
  std::set<Completion> completions;
  int in_flight = 0;
  std::size_t delivered = 0;

  auto start_ready = [&](const Rational& now) {
    for (auto& [link, mgr] : managers) {
      int cap = net.link(link).max_streams;
      while (mgr.active < cap && !mgr.queue.empty()) {
        Waiting w = *mgr.queue.begin();
        mgr.queue.erase(mgr.queue.begin());
        const PlanEntry& pe = plan.entries[w.entry];
        Rational dur = transfer_duration(pe.size, net.link(link).weight);
        Rational start = max(now, w.available);
        completions.insert({start + dur, w.demand, w.entry, link});
        result.transfers.push_back({w.demand, net.link(link).id, start, start + dur});
        ++mgr.active;
        ++in_flight;
        mgr.peak = std::max(mgr.peak, mgr.active);
      }
    }
  };

  start_ready(Rational(0));
  while (!completions.empty()) {
    Rational now = completions.begin()->time;
    while (!completions.empty() && completions.begin()->time == now) {
      Completion c = *completions.begin();
      completions.erase(completions.begin());
      managers[c.link].active -= 1;
      --in_flight;
      std::size_t hop = ++next_hop[c.entry];
      const PlanEntry& pe = plan.entries[c.entry];
      if (hop == pe.links.size()) {
        ++delivered;
        result.makespan = max(result.makespan, now);
      } else {
        managers[pe.links[hop]].queue.insert({now, c.demand, c.entry});
      }
    }
    start_ready(now);
  }

  if (delivered != plan.entries.size()) {
    std::string stuck = "stuck execution; waiting:";
    for (std::size_t i = 0; i < plan.entries.size(); ++i)
      if (next_hop[i] < plan.entries[i].links.size())
        stuck += " " + plan.entries[i].demand;
    throw std::logic_error(stuck);
  }
  for (const auto& [link, mgr] : managers)
    result.peak_streams[net.link(link).id] = mgr.peak;
  return result;
}

// Relative gap |exec - sched| / sched; infinity when the schedule makespan
// is zero but the execution's is not.
inline Rational compare_makespans(const Rational& schedule_makespan,
                                  const Rational& exec_makespan) {
  if (schedule_makespan.is_zero())
    return exec_makespan.is_zero() ? Rational(0) : Rational::infinity();
  Rational diff = schedule_makespan < exec_makespan
                      ? exec_makespan - schedule_makespan
                      : schedule_makespan - exec_makespan;
  return diff / schedule_makespan;
}

}  // namespace dtplan

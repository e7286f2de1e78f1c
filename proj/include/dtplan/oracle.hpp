#pragma once

#include <vector>

#include "dtplan/network.hpp"

namespace dtplan {

// Independent ground truth for small instances. Deliberately shares nothing
// with the planner or scheduler searches: paths are enumerated by plain DFS
// and schedules by exhaustive active-schedule generation.
namespace oracle {

// All simple paths (as link sequences) from any of `origins` to `dest`.
// Paths never enter an origin of the same demand: the model's degree
// equations pin incoming transfers at every origin to zero, and any path
// through a co-origin is dominated by its suffix from there.
inline std::vector<std::vector<int>> simple_paths(const Network& net,
                                                  const std::vector<int>& origins,
                                                  int dest) {
  std::vector<std::vector<int>> result;
  std::vector<int> stack;
  std::vector<char> visited(net.site_count(), 0);
  for (int o : origins) visited[o] = 1;
  auto walk = [&](auto&& self, int at) -> void {
    if (at == dest) {
      result.push_back(stack);
      return;
    }
    for (int e : net.out(at)) {
      int next = net.link(e).to;
      if (visited[next]) continue;
      stack.push_back(e);
      visited[next] = 1;
      self(self, next);
      visited[next] = 0;
      stack.pop_back();
    }
  };
  for (int o : origins) walk(walk, o);
  return result;
}

struct OTask {
  int resource;  // link index
  Rational duration;
  int pred;
  Rational tail;
};

// Minimal makespan over all active schedules of chain-structured tasks on
// unary resources (Giffler-Thompson enumeration with incumbent pruning).
inline void enumerate_active(const std::vector<OTask>& tasks,
                             std::vector<char>& done, std::vector<Rational>& end,
                             std::vector<Rational>& r_avail, int remaining,
                             const Rational& current_max, Rational& best) {
  if (remaining == 0) {
    if (current_max < best) best = current_max;
    return;
  }
  // Bound: every unscheduled task still needs est + duration + tail.
  std::vector<int> ready;
  for (int t = 0; t < (int)tasks.size(); ++t) {
    if (done[t]) continue;
    Rational chain = tasks[t].pred >= 0 && !done[tasks[t].pred]
                         ? Rational::infinity()
                         : Rational(0);
    if (!chain.is_infinite()) ready.push_back(t);
  }
  Rational lb = current_max;
  for (int t = 0; t < (int)tasks.size(); ++t) {
    if (done[t]) continue;
    Rational from(0);
    int walk = t;
    std::vector<int> rev;
    while (walk >= 0 && !done[walk]) {
      rev.push_back(walk);
      walk = tasks[walk].pred;
    }
    if (walk >= 0) from = end[walk];
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) from += tasks[*it].duration;
    // `from` is now the chain completion; add the tail after t.
    lb = max(lb, from + tasks[t].tail);
  }
  if (!(lb < best)) return;

  // Giffler-Thompson: find the minimal earliest completion, branch over the
  // conflict set on its resource.
  int pick = -1;
  Rational pick_completion;
  auto est = [&](int t) {
    Rational s = tasks[t].pred >= 0 ? end[tasks[t].pred] : Rational(0);
    return max(s, r_avail[tasks[t].resource]);
  };
  for (int t : ready) {
    Rational c = est(t) + tasks[t].duration;
    if (pick < 0 || c < pick_completion) {
      pick = t;
      pick_completion = c;
    }
  }
  if (pick < 0) return;
  int res = tasks[pick].resource;
  for (int t : ready) {
    if (tasks[t].resource != res) continue;
    Rational s = est(t);
    if (!(s < pick_completion)) continue;
    Rational saved_avail = r_avail[res];
    done[t] = 1;
    end[t] = s + tasks[t].duration;
    r_avail[res] = end[t];
    enumerate_active(tasks, done, end, r_avail, remaining - 1, max(current_max, end[t]),
                     best);
    done[t] = 0;
    r_avail[res] = saved_avail;
  }
}

inline Rational optimal_makespan(const std::vector<OTask>& tasks, Rational best) {
  std::vector<char> done(tasks.size(), 0);
  std::vector<Rational> end(tasks.size(), Rational(0));
  int maxres = -1;
  for (const OTask& t : tasks) maxres = std::max(maxres, t.resource);
  std::vector<Rational> r_avail(maxres + 1, Rational(0));
  enumerate_active(tasks, done, end, r_avail, (int)tasks.size(), Rational(0), best);
  return best;
}

}  // namespace oracle

// Exhaustive optimum over every per-demand simple-path combination and every
// task ordering per link. Guarded to small instances.
inline Rational oracle_solve(const Network& net, const Request& req) {
  NormalizedRequest norm = validate_request(net, req);
  if (net.site_count() > 6 || net.link_count() > 10 || (int)norm.demands.size() > 4)
    throw InputError("oracle instance too large");
  if (norm.demands.empty()) return Rational(0);

  std::vector<std::vector<std::vector<int>>> choices;
  for (const NormalizedDemand& d : norm.demands) {
    choices.push_back(oracle::simple_paths(net, d.origins, norm.destination));
    if (choices.back().empty())
      throw InfeasibleError("unroutable demand " + d.id);
  }

  Rational best = Rational::infinity();
  std::vector<int> combo(choices.size(), 0);
  for (;;) {
    std::vector<oracle::OTask> tasks;
    Rational combo_lb(0);
    std::vector<Rational> link_load(net.link_count(), Rational(0));
    for (std::size_t d = 0; d < combo.size(); ++d) {
      const std::vector<int>& path = choices[d][combo[d]];
      Rational chain(0);
      int pred = -1;
      for (int e : path) {
        oracle::OTask t;
        t.resource = e;
        t.duration = transfer_duration(norm.demands[d].size, net.link(e).weight);
        t.pred = pred;
        pred = (int)tasks.size();
        tasks.push_back(t);
        chain += t.duration;
        link_load[e] += t.duration;
      }
      combo_lb = max(combo_lb, chain);
    }
    // Tails: total duration strictly after each task on its chain.
    {
      std::vector<Rational> tail_after(tasks.size(), Rational(0));
      for (int i = (int)tasks.size() - 1; i >= 0; --i)
        if (tasks[i].pred >= 0)
          tail_after[tasks[i].pred] = tail_after[i] + tasks[i].duration;
      for (std::size_t i = 0; i < tasks.size(); ++i) tasks[i].tail = tail_after[i];
    }
    for (int e = 0; e < net.link_count(); ++e) combo_lb = max(combo_lb, link_load[e]);
    if (combo_lb < best) {
      Rational mk = oracle::optimal_makespan(tasks, best);
      if (mk < best) best = mk;
    }
    // Next combination.
    std::size_t i = 0;
    while (i < combo.size() && ++combo[i] == (int)choices[i].size()) combo[i++] = 0;
    if (i == combo.size()) break;
  }
  return best;
}

}  // namespace dtplan

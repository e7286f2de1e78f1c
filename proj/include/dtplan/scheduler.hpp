#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtplan/io.hpp"
#include "dtplan/network.hpp"
#include "dtplan/plan.hpp"

namespace dtplan {

// One transfer of one demand over one link. Tasks of a demand form a chain
// following its path; every task runs on the unary resource of its link.
struct Task {
  int demand = -1;       // index into ScheduleProblem::demand_ids
  int link = -1;         // network link index
  std::string link_id;
  Rational duration;
  int pred = -1;         // previous task on the chain, -1 for the first
  int resource = -1;     // dense unary resource index
  Rational tail;         // total duration strictly after this task on its chain
};

// Site occupancy of a demand passing through a capacity-limited site:
// spans from the start of the incoming transfer to the end of the outgoing.
struct Occupancy {
  int cum = -1;          // index into ScheduleProblem::cumulative
  int demand = -1;
  Rational usage;
  int inc_task = -1;
  int out_task = -1;
};

struct CumResource {
  int site = -1;
  std::string site_id;
  Rational capacity;
};

struct ScheduleProblem {
  std::vector<std::string> demand_ids;
  std::vector<Rational> demand_sizes;
  std::vector<Task> tasks;
  std::vector<std::vector<int>> chains;         // per demand, in path order
  std::vector<int> resource_links;              // resource -> link index
  std::vector<std::string> resource_ids;
  std::vector<std::vector<int>> tasks_by_resource;
  std::vector<CumResource> cumulative;
  std::vector<Occupancy> occupancies;
  std::vector<std::vector<int>> opened_by_task;  // occupancies whose inc task is t
  std::vector<std::vector<int>> closed_by_task;
};

struct Schedule {
  std::vector<Rational> start;  // per task
  Rational makespan;
};

inline ScheduleProblem build_problem(const Network& net, const Plan& plan) {
  ScheduleProblem p;
  std::map<int, int> resource_of_link;
  for (const PlanEntry& pe : plan.entries) {
    int d = (int)p.demand_ids.size();
    p.demand_ids.push_back(pe.demand);
    p.demand_sizes.push_back(pe.size);
    p.chains.emplace_back();
    int pred = -1;
    for (int e : pe.links) {
      if (e < 0 || e >= net.link_count())
        throw InputError("plan references unknown link (demand " + pe.demand + ")");
      auto [it, fresh] = resource_of_link.emplace(e, (int)p.resource_links.size());
      if (fresh) {
        p.resource_links.push_back(e);
        p.resource_ids.push_back(net.link(e).id);
        p.tasks_by_resource.emplace_back();
      }
      Task t;
      t.demand = d;
      t.link = e;
      t.link_id = net.link(e).id;
      t.duration = transfer_duration(pe.size, net.link(e).weight);
      t.pred = pred;
      t.resource = it->second;
      pred = (int)p.tasks.size();
      p.chains[d].push_back(pred);
      p.tasks_by_resource[t.resource].push_back(pred);
      p.tasks.push_back(std::move(t));
    }
    // Tail durations for bounds and tie-breaking.
    Rational tail(0);
    for (int i = (int)p.chains[d].size() - 1; i >= 0; --i) {
      p.tasks[p.chains[d][i]].tail = tail;
      tail += p.tasks[p.chains[d][i]].duration;
    }
    // Occupancy tasks at capacity-limited transit sites (origin and
    // destination do not count).
    for (std::size_t i = 0; i + 1 < pe.links.size(); ++i) {
      int site = net.link(pe.links[i]).to;
      if (!net.site(site).storage_capacity) continue;
      int cum = -1;
      for (int c = 0; c < (int)p.cumulative.size(); ++c)
        if (p.cumulative[c].site == site) cum = c;
      if (cum < 0) {
        cum = (int)p.cumulative.size();
        p.cumulative.push_back(
            CumResource{site, net.site(site).id, *net.site(site).storage_capacity});
      }
      Occupancy o;
      o.cum = cum;
      o.demand = d;
      o.usage = pe.size;
      o.inc_task = p.chains[d][i];
      o.out_task = p.chains[d][i + 1];
      p.occupancies.push_back(o);
    }
  }
  p.opened_by_task.resize(p.tasks.size());
  p.closed_by_task.resize(p.tasks.size());
  for (int i = 0; i < (int)p.occupancies.size(); ++i) {
    p.opened_by_task[p.occupancies[i].inc_task].push_back(i);
    p.closed_by_task[p.occupancies[i].out_task].push_back(i);
  }
  return p;
}

// Independent re-check of every schedule invariant; returns violations,
// empty meaning the schedule is sound. Every search result goes through it.
inline std::vector<std::string> verify_schedule(const ScheduleProblem& p,
                                                const Schedule& s) {
  std::vector<std::string> bad;
  if (s.start.size() != p.tasks.size()) {
    bad.push_back("schedule does not cover every task");
    return bad;
  }
  Rational maxend(0);
  for (int t = 0; t < (int)p.tasks.size(); ++t) {
    if (s.start[t].is_negative())
      bad.push_back("negative start for task of demand " + p.demand_ids[p.tasks[t].demand]);
    if (p.tasks[t].pred >= 0) {
      int q = p.tasks[t].pred;
      if (s.start[t] < s.start[q] + p.tasks[q].duration)
        bad.push_back("precedence violated for demand " + p.demand_ids[p.tasks[t].demand] +
                      " before link " + p.tasks[t].link_id);
    }
    maxend = max(maxend, s.start[t] + p.tasks[t].duration);
  }
  for (int r = 0; r < (int)p.resource_links.size(); ++r) {
    std::vector<int> ts = p.tasks_by_resource[r];
    std::sort(ts.begin(), ts.end(),
              [&](int a, int b) { return s.start[a] < s.start[b]; });
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
      if (s.start[ts[i + 1]] < s.start[ts[i]] + p.tasks[ts[i]].duration)
        bad.push_back("unary overlap on " + p.resource_ids[r]);
  }
  for (int c = 0; c < (int)p.cumulative.size(); ++c) {
    // Time-table sweep over occupancy intervals [start(inc), end(out)).
    std::vector<std::pair<Rational, Rational>> events;  // (time, +/-usage)
    for (const Occupancy& o : p.occupancies) {
      if (o.cum != c) continue;
      Rational a = s.start[o.inc_task];
      Rational b = s.start[o.out_task] + p.tasks[o.out_task].duration;
      events.emplace_back(a, o.usage);
      events.emplace_back(b, Rational(0) - o.usage);
    }
    std::sort(events.begin(), events.end(), [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first < y.first;
      return x.second < y.second;  // releases before claims at equal times
    });
    Rational level(0);
    for (const auto& [time, delta] : events) {
      level += delta;
      if (p.cumulative[c].capacity < level) {
        bad.push_back("capacity exceeded at " + p.cumulative[c].site_id);
        break;
      }
    }
  }
  if (s.makespan != maxend) bad.push_back("makespan footer does not match task ends");
  return bad;
}

namespace detail {

using BusyList = std::vector<std::pair<Rational, Rational>>;  // sorted [start,end)

inline Rational earliest_unary_fit(const BusyList& busy, Rational from,
                                   const Rational& dur) {
  for (const auto& [a, b] : busy) {
    if (from + dur <= a) return from;
    if (b > from) from = b;
  }
  return from;
}

inline void insert_interval(BusyList& busy, const Rational& a, const Rational& b) {
  auto it = std::lower_bound(busy.begin(), busy.end(), std::make_pair(a, b));
  busy.insert(it, {a, b});
}

inline void remove_interval(BusyList& busy, const Rational& a, const Rational& b) {
  auto it = std::find(busy.begin(), busy.end(), std::make_pair(a, b));
  if (it != busy.end()) busy.erase(it);
}

struct CumState {
  // Materialized occupancy intervals (both bounding tasks scheduled).
  std::vector<std::pair<std::pair<Rational, Rational>, Rational>> closed;
  // Open occupancies: inc task scheduled, out task not; treated as
  // extending to infinity until closed.
  std::vector<std::pair<Rational, Rational>> open;  // (start, usage)
};

// Earliest start >= from such that adding `usage` over [t, t+window) keeps
// the peak occupancy profile within capacity. `window` is the task duration
// for the optimistic search variant and infinity for the pessimistic one.
// Returns infinity when open occupancies alone saturate the site.
inline Rational earliest_capacity_fit(const CumState& cs, const Rational& cap,
                                      const Rational& usage, Rational from,
                                      const Rational& window) {
  auto feasible = [&](const Rational& t) {
    Rational wend = window.is_infinite() ? Rational::infinity() : t + window;
    std::vector<std::pair<Rational, Rational>> events;  // (time, +/-usage)
    auto add = [&](Rational a, const Rational& b, const Rational& u) {
      if (a < t) a = t;
      if (!(a < b)) return;
      events.emplace_back(a, u);
      if (!b.is_infinite()) events.emplace_back(b, Rational(0) - u);
    };
    for (const auto& [start, u] : cs.open) add(start, wend, u);
    for (const auto& [iv, u] : cs.closed) add(iv.first, min(iv.second, wend), u);
    std::sort(events.begin(), events.end(), [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first < y.first;
      return x.second < y.second;
    });
    Rational level(0);
    for (const auto& [time, delta] : events) {
      level += delta;
      if (cap < level + usage) return false;
    }
    return usage <= cap;
  };
  for (;;) {
    if (feasible(from)) return from;
    // Levels only drop at closed-interval ends; open occupancies never
    // release within one search node.
    Rational next = Rational::infinity();
    for (const auto& [iv, u] : cs.closed)
      if (iv.second > from && iv.second < next) next = iv.second;
    if (next.is_infinite()) return Rational::infinity();
    from = next;
  }
}

}  // namespace detail

// List scheduler: repeatedly places the precedence-ready task with the
// earliest feasible start (ties by demand id, then link id). Demands are
// admitted into capacity-limited regions only when every such site on
// their remaining path has room, so the result is always feasible.
inline Schedule greedy_schedule(const ScheduleProblem& p) {
  for (const Occupancy& o : p.occupancies)
    if (p.cumulative[o.cum].capacity < o.usage)
      throw InfeasibleError("demand " + p.demand_ids[o.demand] +
                            " exceeds site capacity at " +
                            p.cumulative[o.cum].site_id);

  const int T = (int)p.tasks.size();
  Schedule s;
  s.start.assign(T, Rational(0));
  s.makespan = Rational(0);
  std::vector<char> placed(T, 0);
  std::vector<detail::BusyList> busy(p.resource_links.size());
  std::vector<detail::CumState> cum(p.cumulative.size());
  // Reservation gate: a demand holds one slot at every capacitated site on
  // its path from its first placed task until the occupancy there closes.
  std::vector<Rational> reserved(p.cumulative.size(), Rational(0));
  std::vector<char> admitted(p.demand_ids.size(), 0);

  int remaining = T;
  while (remaining > 0) {
    int pick = -1;
    Rational pick_est;
    for (int d = 0; d < (int)p.chains.size(); ++d) {
      int t = -1;
      for (int ct : p.chains[d])
        if (!placed[ct]) {
          t = ct;
          break;
        }
      if (t < 0 || (p.tasks[t].pred >= 0 && !placed[p.tasks[t].pred])) continue;
      if (!admitted[d] && !p.occupancies.empty()) {
        bool room = true;
        for (const Occupancy& o : p.occupancies)
          if (o.demand == d &&
              p.cumulative[o.cum].capacity < reserved[o.cum] + o.usage)
            room = false;
        if (!room) continue;
      }
      Rational ready = p.tasks[t].pred >= 0
                           ? s.start[p.tasks[t].pred] + p.tasks[p.tasks[t].pred].duration
                           : Rational(0);
      Rational est = ready;
      for (;;) {
        Rational u = detail::earliest_unary_fit(busy[p.tasks[t].resource], est,
                                                p.tasks[t].duration);
        Rational c = u;
        for (int oi : p.opened_by_task[t])
          c = max(c, detail::earliest_capacity_fit(
                         cum[p.occupancies[oi].cum],
                         p.cumulative[p.occupancies[oi].cum].capacity,
                         p.occupancies[oi].usage, c, Rational::infinity()));
        if (c == u || c.is_infinite()) {
          est = c;
          break;
        }
        est = c;
      }
      if (est.is_infinite()) continue;
      if (pick < 0 || est < pick_est ||
          (est == pick_est &&
           std::make_pair(p.demand_ids[p.tasks[t].demand], p.tasks[t].link_id) <
               std::make_pair(p.demand_ids[p.tasks[pick].demand], p.tasks[pick].link_id)))
        pick = t, pick_est = est;
    }
    if (pick < 0)
      throw InfeasibleError("storage capacity deadlock in greedy scheduler");

    int d = p.tasks[pick].demand;
    if (!admitted[d]) {
      admitted[d] = 1;
      for (const Occupancy& o : p.occupancies)
        if (o.demand == d) reserved[o.cum] += o.usage;
    }
    s.start[pick] = pick_est;
    placed[pick] = 1;
    --remaining;
    detail::insert_interval(busy[p.tasks[pick].resource], pick_est,
                            pick_est + p.tasks[pick].duration);
    for (int oi : p.opened_by_task[pick])
      cum[p.occupancies[oi].cum].open.emplace_back(pick_est, p.occupancies[oi].usage);
    for (int oi : p.closed_by_task[pick]) {
      const Occupancy& o = p.occupancies[oi];
      detail::CumState& c = cum[o.cum];
      Rational a = s.start[o.inc_task];
      for (std::size_t k = 0; k < c.open.size(); ++k)
        if (c.open[k] == std::make_pair(a, o.usage)) {
          c.open.erase(c.open.begin() + k);
          break;
        }
      c.closed.push_back({{a, pick_est + p.tasks[pick].duration}, o.usage});
      reserved[o.cum] -= o.usage;
    }
    s.makespan = max(s.makespan, pick_est + p.tasks[pick].duration);
  }
  return s;
}

struct SearchLimits {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  long node_cap = 0;  // 0 = unlimited
};

struct BBResult {
  std::optional<Schedule> schedule;
  bool proven = true;        // false when the search hit a limit
  Rational lower_bound;      // valid lower bound on the problem optimum
  long nodes = 0;
};

namespace detail {

class SetTimesSearch {
 public:
  SetTimesSearch(const ScheduleProblem& p, Rational strict_upper, SearchLimits limits)
      : p_(p),
        best_bound_(strict_upper),
        limits_(limits),
        start_(p.tasks.size(), Rational(0)),
        scheduled_(p.tasks.size(), 0),
        forced_min_(p.tasks.size(), Rational(0)),
        postponed_at_(p.tasks.size(), Rational(0)),
        postponed_(p.tasks.size(), 0),
        busy_(p.resource_links.size()),
        cum_(p.cumulative.size()) {}

  BBResult run() {
    BBResult res;
    res.lower_bound = root_bound();
    // The strict upper often sits at or below the root bound when the
    // optimizer probes a candidate plan; reject without scheduling anything.
    if (!(res.lower_bound < best_bound_)) return res;
    // Greedy incumbent: often matches the root bound, closing the search
    // without branching.
    try {
      Schedule g = greedy_schedule(p_);
      if (g.makespan < best_bound_) {
        best_ = g;
        best_bound_ = g.makespan;
      }
    } catch (const InfeasibleError&) {
    }
    if (best_ && best_->makespan == res.lower_bound) {
      res.schedule = best_;
      res.proven = true;
      return res;
    }
    dfs();
    res.schedule = best_;
    res.proven = !aborted_;
    res.nodes = nodes_;
    if (res.proven && best_) res.lower_bound = best_->makespan;
    return res;
  }

 private:
  struct Eligible {
    int task;
    Rational est;
  };

  Rational chain_ready(int t) const {
    const Task& task = p_.tasks[t];
    if (task.pred < 0) return forced_min_[t];
    if (scheduled_[task.pred])
      return max(start_[task.pred] + p_.tasks[task.pred].duration, forced_min_[t]);
    return max(chain_ready(task.pred) + p_.tasks[task.pred].duration, forced_min_[t]);
  }

  Rational root_bound() const { return bound(); }

  // max over unary resources of (min ready + total remaining duration +
  // min tail), plus the committed makespan and per-task completions.
  Rational bound() const {
    Rational lb = committed_makespan_;
    for (int r = 0; r < (int)p_.resource_links.size(); ++r) {
      Rational mn = Rational::infinity(), tail = Rational::infinity(), total(0);
      bool any = false;
      for (int t : p_.tasks_by_resource[r]) {
        if (scheduled_[t]) continue;
        any = true;
        mn = min(mn, chain_ready(t));
        tail = min(tail, p_.tasks[t].tail);
        total += p_.tasks[t].duration;
      }
      if (any) lb = max(lb, mn + total + tail);
    }
    for (int t = 0; t < (int)p_.tasks.size(); ++t)
      if (!scheduled_[t])
        lb = max(lb, chain_ready(t) + p_.tasks[t].duration + p_.tasks[t].tail);
    return lb;
  }

  Rational est(int t) const {
    Rational from = chain_ready(t);
    for (;;) {
      Rational u = earliest_unary_fit(busy_[p_.tasks[t].resource], from,
                                      p_.tasks[t].duration);
      Rational c = u;
      for (int oi : p_.opened_by_task[t])
        c = max(c, earliest_capacity_fit(cum_[p_.occupancies[oi].cum],
                                         p_.cumulative[p_.occupancies[oi].cum].capacity,
                                         p_.occupancies[oi].usage, c,
                                         p_.tasks[t].duration));
      if (c == u || c.is_infinite()) return c;
      from = c;
    }
  }

  void place(int t, const Rational& at) {
    start_[t] = at;
    scheduled_[t] = 1;
    insert_interval(busy_[p_.tasks[t].resource], at, at + p_.tasks[t].duration);
    for (int oi : p_.opened_by_task[t])
      cum_[p_.occupancies[oi].cum].open.emplace_back(at, p_.occupancies[oi].usage);
    for (int oi : p_.closed_by_task[t]) {
      const Occupancy& o = p_.occupancies[oi];
      CumState& c = cum_[o.cum];
      Rational a = start_[o.inc_task];
      for (std::size_t k = 0; k < c.open.size(); ++k)
        if (c.open[k] == std::make_pair(a, o.usage)) {
          c.open.erase(c.open.begin() + k);
          break;
        }
      c.closed.push_back({{a, at + p_.tasks[t].duration}, o.usage});
    }
  }

  void unplace(int t) {
    for (int oi : p_.closed_by_task[t]) {
      const Occupancy& o = p_.occupancies[oi];
      CumState& c = cum_[o.cum];
      c.closed.pop_back();
      c.open.emplace_back(start_[o.inc_task], o.usage);
    }
    for (int oi : p_.opened_by_task[t]) {
      CumState& c = cum_[p_.occupancies[oi].cum];
      auto needle = std::make_pair(start_[t], p_.occupancies[oi].usage);
      for (std::size_t k = c.open.size(); k-- > 0;)
        if (c.open[k] == needle) {
          c.open.erase(c.open.begin() + k);
          break;
        }
    }
    remove_interval(busy_[p_.tasks[t].resource], start_[t],
                    start_[t] + p_.tasks[t].duration);
    scheduled_[t] = 0;
  }

  // Event points a postponed task may wait for: boundaries of committed
  // intervals on its resource, closed occupancy boundaries at sites it
  // would open, and the earliest starts of competing eligible tasks.
  Rational next_event(int t, const Rational& after,
                      const std::vector<Eligible>& elig) const {
    Rational nxt = Rational::infinity();
    auto consider = [&](const Rational& v) {
      if (after < v && v < nxt) nxt = v;
    };
    for (const auto& [a, b] : busy_[p_.tasks[t].resource]) {
      consider(a);
      consider(b);
    }
    for (int oi : p_.opened_by_task[t]) {
      const CumState& c = cum_[p_.occupancies[oi].cum];
      for (const auto& [iv, u] : c.closed) {
        consider(iv.first);
        consider(iv.second);
      }
    }
    for (const Eligible& e : elig)
      if (e.task != t) consider(e.est);
    return nxt;
  }

  bool out_of_budget() {
    if (limits_.node_cap > 0 && nodes_ >= limits_.node_cap) return aborted_ = true;
    if (limits_.deadline && (nodes_ & 63) == 0 &&
        std::chrono::steady_clock::now() >= *limits_.deadline)
      return aborted_ = true;
    return aborted_;
  }

  void dfs() {
    ++nodes_;
    if (out_of_budget()) return;
    if (!(bound() < best_bound_)) return;

    std::vector<Eligible> elig;
    int unscheduled = 0;
    for (int d = 0; d < (int)p_.chains.size(); ++d) {
      int front = -1;
      for (int t : p_.chains[d])
        if (!scheduled_[t]) {
          front = t;
          break;
        }
      if (front < 0) continue;
      unscheduled += 1;
      Rational e = est(front);
      if (e.is_infinite()) continue;
      // Postponement dominance: a postponed task stays out of the eligible
      // set until commitments move its earliest start.
      if (postponed_[front] && e == postponed_at_[front]) continue;
      elig.push_back({front, e});
    }
    if (unscheduled == 0) {
      // All chains complete. Construction respects precedence and unary
      // exclusivity; re-verify capacity before accepting the leaf.
      Schedule s;
      s.start = start_;
      s.makespan = committed_makespan_;
      if (!p_.cumulative.empty() && !verify_schedule(p_, s).empty()) return;
      if (s.makespan < best_bound_) {
        best_ = s;
        best_bound_ = s.makespan;
      }
      return;
    }
    if (elig.empty()) return;

    int pick = -1;
    for (int i = 0; i < (int)elig.size(); ++i) {
      if (pick < 0) {
        pick = i;
        continue;
      }
      const Eligible &a = elig[i], &b = elig[pick];
      if (a.est != b.est) {
        if (a.est < b.est) pick = i;
        continue;
      }
      const Task &ta = p_.tasks[a.task], &tb = p_.tasks[b.task];
      if (ta.tail != tb.tail) {
        if (tb.tail < ta.tail) pick = i;
        continue;
      }
      if (p_.demand_ids[ta.demand] < p_.demand_ids[tb.demand]) pick = i;
    }
    int t = elig[pick].task;
    Rational at = elig[pick].est;

    Rational saved_makespan = committed_makespan_;
    place(t, at);
    committed_makespan_ = max(committed_makespan_, at + p_.tasks[t].duration);
    dfs();
    committed_makespan_ = saved_makespan;
    unplace(t);
    if (aborted_) return;

    // Postpone branch: the task becomes eligible again once its earliest
    // start moves.
    {
      bool saved_flag = postponed_[t];
      Rational saved_at = postponed_at_[t];
      postponed_[t] = 1;
      postponed_at_[t] = at;
      dfs();
      postponed_[t] = saved_flag;
      postponed_at_[t] = saved_at;
    }
    if (aborted_ || p_.cumulative.empty()) return;

    // With storage occupancies an optimal start may sit past a capacity
    // event without anything moving this task's earliest start; jump there
    // explicitly.
    Rational bump = next_event(t, at, elig);
    if (!bump.is_infinite()) {
      Rational saved = forced_min_[t];
      bool saved_flag = postponed_[t];
      forced_min_[t] = bump;
      postponed_[t] = 0;
      dfs();
      forced_min_[t] = saved;
      postponed_[t] = saved_flag;
    }
  }

  const ScheduleProblem& p_;
  Rational best_bound_;
  SearchLimits limits_;
  std::optional<Schedule> best_;
  std::vector<Rational> start_;
  std::vector<char> scheduled_;
  std::vector<Rational> forced_min_;
  std::vector<Rational> postponed_at_;
  std::vector<char> postponed_;
  std::vector<BusyList> busy_;
  std::vector<CumState> cum_;
  Rational committed_makespan_;
  long nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace detail

// Branch-and-bound makespan minimization with chronological SetTimes
// branching: schedule the minimal-earliest-start ready task now, or
// postpone it past the next resource event. Returns the minimal-makespan
// schedule strictly below `strict_upper`, or nothing if none exists.
inline BBResult optimal_schedule_ex(const ScheduleProblem& p, Rational strict_upper,
                                    SearchLimits limits = {}) {
  for (const Occupancy& o : p.occupancies)
    if (p.cumulative[o.cum].capacity < o.usage) {
      BBResult r;
      r.lower_bound = Rational::infinity();
      return r;
    }
  return detail::SetTimesSearch(p, strict_upper, limits).run();
}

inline std::optional<Schedule> optimal_schedule(const ScheduleProblem& p,
                                                Rational strict_upper,
                                                SearchLimits limits = {}) {
  return optimal_schedule_ex(p, strict_upper, limits).schedule;
}

inline std::vector<TransferRow> schedule_rows(const ScheduleProblem& p,
                                              const Schedule& s) {
  std::vector<TransferRow> rows;
  for (int t = 0; t < (int)p.tasks.size(); ++t)
    rows.push_back({p.demand_ids[p.tasks[t].demand], p.tasks[t].link_id, s.start[t],
                    s.start[t] + p.tasks[t].duration});
  std::sort(rows.begin(), rows.end(), [](const TransferRow& a, const TransferRow& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.demand != b.demand) return a.demand < b.demand;
    return a.link < b.link;
  });
  return rows;
}

}  // namespace dtplan

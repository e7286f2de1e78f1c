#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dtplan/network.hpp"
#include "dtplan/plan.hpp"
#include "dtplan/planner.hpp"
#include "dtplan/scheduler.hpp"

namespace dtplan {

struct SolveOptions {
  Heuristic heuristic = Heuristic::MinPath;
  ValueOrder value_order = ValueOrder::Decreasing;
  std::optional<double> time_limit_seconds;
  std::uint64_t seed = 0;  // reserved; the core search is deterministic
  // 0 = adaptive: generous on small problems where the branch-and-bound
  // proves per-plan optima, a bounded polish pass on large ones where the
  // greedy incumbent carries the improvement.
  long scheduler_node_cap = 0;
  std::function<void(const std::string&)> trace_sink;  // planner decision trace
};

enum class ProofStatus { Optimal, TimeLimit };

inline const char* to_string(ProofStatus s) {
  return s == ProofStatus::Optimal ? "optimal" : "time-limit";
}

struct TracePoint {
  long wall_ms;
  Rational makespan;
};

struct Solution {
  Plan best_plan;
  ScheduleProblem problem;
  Schedule best_schedule;
  Rational best_makespan;
  ProofStatus status = ProofStatus::Optimal;
  std::vector<TracePoint> trace;  // one entry per incumbent improvement
  long best_time_ms = 0;
  long plans_examined = 0;
};

inline std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::ostringstream out;
  out << "ms,makespan\n";
  for (const TracePoint& t : trace)
    out << t.wall_ms << "," << t.makespan.to_string() << "\n";
  return out.str();
}

// The planning/scheduling iteration: seed the bound with a greedy schedule
// of the first plan, then repeatedly ask the planner for the next plan under
// the incumbent bound and the scheduler for a strictly better schedule. The
// planner search is resumed across bound tightenings rather than restarted.
inline Solution solve(const Network& net, const Request& request,
                      const SolveOptions& options = {}) {
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return (long)std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (options.time_limit_seconds)
    deadline = t0 + std::chrono::microseconds(
                        (long long)(*options.time_limit_seconds * 1e6));

  NormalizedRequest norm = validate_request(net, request);
  Solution sol;
  if (norm.demands.empty()) {
    sol.best_plan.destination = norm.destination;
    sol.best_makespan = Rational(0);
    sol.best_schedule.makespan = Rational(0);
    sol.trace.push_back({elapsed_ms(), Rational(0)});
    return sol;
  }

  PlannerState planner(net, norm);
  if (options.trace_sink) planner.set_trace_sink(options.trace_sink);

  Rational bound = Rational::infinity();
  bool have_incumbent = false;
  bool schedules_proven = true;

  // The first descent runs without the deadline so a time-limited solve
  // always leaves with an incumbent.
  std::optional<Plan> plan = planner.next_plan(options.heuristic, options.value_order);
  if (!plan) throw InfeasibleError("no feasible plan");
  planner.set_deadline(deadline);

  while (plan) {
    ++sol.plans_examined;
    ScheduleProblem problem = build_problem(net, *plan);
    if (!have_incumbent) {
      try {
        Schedule g = greedy_schedule(problem);
        if (g.makespan < bound) {
          sol.best_plan = *plan;
          sol.problem = problem;
          sol.best_schedule = g;
          sol.best_makespan = g.makespan;
          bound = g.makespan;
          have_incumbent = true;
          sol.best_time_ms = elapsed_ms();
          sol.trace.push_back({sol.best_time_ms, bound});
          planner.set_makespan_bound(bound);
        }
      } catch (const InfeasibleError&) {
        // plan unschedulable under storage capacities; keep searching
      }
    }
    SearchLimits limits;
    limits.deadline = deadline;
    limits.node_cap = options.scheduler_node_cap > 0
                          ? options.scheduler_node_cap
                          : (long)problem.tasks.size() <= 24
                                ? 2000000
                                : 2000 + 8 * (long)problem.tasks.size();
    BBResult res = optimal_schedule_ex(problem, bound, limits);
    if (!res.proven) schedules_proven = false;
    if (res.schedule && res.schedule->makespan < bound) {
      sol.best_plan = *plan;
      sol.problem = problem;
      sol.best_schedule = *res.schedule;
      sol.best_makespan = res.schedule->makespan;
      bound = res.schedule->makespan;
      have_incumbent = true;
      sol.best_time_ms = elapsed_ms();
      sol.trace.push_back({sol.best_time_ms, bound});
      planner.set_makespan_bound(bound);
      // Restart the descent so the tightened cut prunes from the root; the
      // stale deep prefix would otherwise pin the search to near-identical
      // plans.
      planner.restart_search();
    }
    if (deadline && std::chrono::steady_clock::now() >= *deadline) break;
    plan = planner.next_plan(options.heuristic, options.value_order);
  }

  if (!have_incumbent) throw InfeasibleError("no feasible plan");
  bool exhausted = !plan && !planner.aborted();
  sol.status = exhausted && schedules_proven ? ProofStatus::Optimal
                                             : ProofStatus::TimeLimit;
  return sol;
}

}  // namespace dtplan

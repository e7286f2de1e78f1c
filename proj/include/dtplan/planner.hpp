#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dtplan/network.hpp"
#include "dtplan/plan.hpp"

namespace dtplan {

enum class Heuristic { FastestLink, MinPath };
enum class ValueOrder { Increasing, Decreasing };

inline const char* to_string(Heuristic h) {
  return h == Heuristic::FastestLink ? "fastestlink" : "minpath";
}
inline const char* to_string(ValueOrder v) {
  return v == ValueOrder::Increasing ? "inc" : "dec";
}

// Link-based constraint model over routing variables X[d,e] in {0,1} and
// start lower bounds P[d,e]. Propagation maintains:
//   (a) path degree sums per demand (origins, destination, flow balance),
//   (b) start-bound chaining over incoming candidates, with a horizon rule
//       that starves isolated loops,
//   (c) conditional precedence once consecutive links are committed,
//   (d) the per-link makespan cut against the incumbent bound.
// next_plan runs a resumable depth-first search with chronological
// backtracking over the X variables and extracts one transfer path per
// demand from each consistent full assignment.
class PlannerState {
 public:
  PlannerState(const Network& net, const NormalizedRequest& request,
               Rational makespan_bound = Rational::infinity())
      : net_(net), req_(request), bound_(makespan_bound) {
    demand_count_ = (int)req_.demands.size();
    link_count_ = net_.link_count();
    site_count_ = net_.site_count();
    dom_.assign(demand_count_ * link_count_, 3);
    plow_.assign(demand_count_ * link_count_, Rational(0));
    dur_.resize(demand_count_ * link_count_);
    is_origin_.assign(demand_count_ * site_count_, 0);
    sp_ = shortest_path_table(net_, req_.destination);
    for (int d = 0; d < demand_count_; ++d) {
      for (int s : req_.demands[d].origins) is_origin_[d * site_count_ + s] = 1;
      for (int e = 0; e < link_count_; ++e)
        dur_[d * link_count_ + e] =
            transfer_duration(req_.demands[d].size, net_.link(e).weight);
    }
    out_of_origins_.resize(demand_count_);
    for (int d = 0; d < demand_count_; ++d)
      for (int s : req_.demands[d].origins)
        for (int e : net_.out(s)) out_of_origins_[d].push_back(e);

    in_degq_.assign(demand_count_ * (site_count_ + 2), 0);
    in_bq_.assign(demand_count_ * site_count_, 0);
    in_cutq_.assign(link_count_, 0);

    // Structurally forced zeros: no link may enter an origin of d, none may
    // leave the destination.
    bool ok = true;
    for (int d = 0; d < demand_count_ && ok; ++d) {
      for (int s : req_.demands[d].origins)
        for (int e : net_.in(s))
          if (!remove_one(d, e)) ok = false;
      for (int e : net_.out(req_.destination))
        if (!remove_one(d, e)) ok = false;
    }
    // Greedy horizon: total of the heaviest admissible transfer per link.
    // An upper bound on every start bound reachable by a simple-path plan;
    // anything propagated past it can only belong to a loop.
    greedy_horizon_ = Rational(0);
    for (int e = 0; e < link_count_; ++e) {
      Rational heaviest(0);
      for (int d = 0; d < demand_count_; ++d)
        if (dom_[d * link_count_ + e] & 2)
          heaviest = max(heaviest, dur_[d * link_count_ + e]);
      greedy_horizon_ += heaviest;
    }
    if (ok) {
      enqueue_all(/*with_cut=*/false);
      ok = run_queues(/*with_cut=*/false);
    }
    if (!ok) throw InfeasibleError("no feasible routing");
    trail_.clear();  // init deductions are permanent
  }

  int demand_count() const { return demand_count_; }
  const NormalizedRequest& request() const { return req_; }
  Rational makespan_bound() const { return bound_; }
  Rational horizon() const {
    return bound_.is_infinite() ? greedy_horizon_ : min(bound_, greedy_horizon_);
  }
  bool aborted() const { return aborted_; }

  void set_makespan_bound(const Rational& b) {
    bound_ = b;
    bound_refresh_ = true;
  }

  // Drops the current search position and restarts the next descent from
  // the root. With a tightened bound the cut then prunes near the top of
  // the tree instead of deep inside the stale prefix.
  void restart_search() {
    undo_to(0);
    stack_.clear();
    clear_queues();
    started_ = false;
    exhausted_ = false;
    bound_refresh_ = true;
  }
  void set_deadline(std::optional<std::chrono::steady_clock::time_point> dl) {
    deadline_ = dl;
  }
  void set_trace_sink(std::function<void(const std::string&)> sink) {
    trace_sink_ = std::move(sink);
  }

  // Domain introspection (tests and tracing).
  std::pair<bool, bool> x_domain(const std::string& demand, const std::string& link) const {
    int v = var_of(demand, link);
    return {(dom_[v] & 1) != 0, (dom_[v] & 2) != 0};
  }
  Rational p_lower(const std::string& demand, const std::string& link) const {
    return plow_[var_of(demand, link)];
  }

  // Apply an assignment and propagate; false when it makes the state
  // infeasible. Meant for slicing the model from tests and diagnostics.
  bool assume(const std::string& demand, const std::string& link, int value) {
    int v = var_of(demand, link);
    int d = v / link_count_, e = v % link_count_;
    bool ok = value == 1 ? assign_one(d, e) : remove_one(d, e);
    if (!ok) {
      clear_queues();
      return false;
    }
    return propagate();
  }

  // Writes a domain without propagation or trailing. Exists so tests can
  // corrupt an assignment and exercise the defensive loop check.
  void set_domain_unchecked(const std::string& demand, const std::string& link,
                            int value) {
    dom_[var_of(demand, link)] = value == 1 ? 2 : 1;
    clear_queues();
  }

  std::size_t trail_size() const { return trail_.size(); }

  long propagate_count() const { return propagate_count_; }

  // Fixpoint of rules (a)-(d); false means the current node is infeasible.
  bool propagate() {
    ++propagate_count_;
    if (bound_refresh_) {
      bound_refresh_ = false;
      if (!bound_.is_infinite()) {
        for (int v = 0; v < (int)dom_.size(); ++v)
          if ((dom_[v] & 2) && plow_[v] >= bound_)
            if (!remove_one(v / link_count_, v % link_count_)) {
              clear_queues();
              return false;
            }
        for (int e = 0; e < link_count_; ++e) enqueue_cut(e);
      }
    }
    return run_queues(/*with_cut=*/true);
  }

  // Unassigned routing variable minimizing the heuristic score, ties by
  // (demand id, link id); nothing once every variable is assigned.
  std::optional<std::pair<int, int>> select_variable(Heuristic h) const {
    int bd = -1, be = -1;
    Rational best_score;
    for (int d = 0; d < demand_count_; ++d)
      for (int e = 0; e < link_count_; ++e) {
        int v = d * link_count_ + e;
        if (dom_[v] != 3) continue;
        Rational score = h == Heuristic::MinPath
                             ? plow_[v] + dur_[v] + sp_[e] * req_.demands[d].size
                             : dur_[v];
        if (bd < 0 || score < best_score ||
            (score == best_score && tie_less(d, e, bd, be))) {
          bd = d;
          be = e;
          best_score = score;
        }
      }
    if (bd < 0) return std::nullopt;
    return std::make_pair(bd, be);
  }

  std::optional<std::pair<std::string, std::string>> select_variable_ids(
      Heuristic h) const {
    auto v = select_variable(h);
    if (!v) return std::nullopt;
    return std::make_pair(req_.demands[v->first].id, net_.link(v->second).id);
  }

  // Next consistent full assignment under the current makespan bound, as a
  // Plan; nothing when the search tree is exhausted. The state stays
  // positioned so the following call yields the next distinct plan.
  std::optional<Plan> next_plan(Heuristic h, ValueOrder order) {
    if (exhausted_ || aborted_) return std::nullopt;
    if (!started_) {
      started_ = true;
      if (!propagate()) {
        exhausted_ = true;
        return std::nullopt;
      }
    } else {
      if (!advance()) return std::nullopt;
    }
    for (;;) {
      if (hit_deadline()) return std::nullopt;
      auto pick = select_variable(h);
      if (!pick) return extract_paths();
      push_decision(pick->first, pick->second, order);
      if (!apply_top_decision() && !advance()) return std::nullopt;
    }
  }

  // Reads the routed path of every demand off a full assignment. The walk
  // must consume every 1-assigned link; anything left over is a loop that
  // propagation should have starved, hence the hard failure.
  Plan extract_paths() const {
    Plan plan;
    plan.destination = req_.destination;
    for (int d = 0; d < demand_count_; ++d) {
      std::vector<int> head_of_tail(site_count_, -1);
      int ones = 0, start_link = -1;
      for (int e = 0; e < link_count_; ++e) {
        if (dom_[d * link_count_ + e] != 2) continue;
        ++ones;
        int tail = net_.link(e).from;
        if (head_of_tail[tail] != -1) throw std::logic_error("loop detected");
        head_of_tail[tail] = e;
        if (is_origin_[d * site_count_ + tail]) start_link = e;
      }
      if (start_link < 0) throw std::logic_error("loop detected");
      PlanEntry pe;
      pe.demand = req_.demands[d].id;
      pe.size = req_.demands[d].size;
      pe.origin = net_.link(start_link).from;
      int at = pe.origin;
      int steps = 0;
      while (at != req_.destination) {
        int e = head_of_tail[at];
        if (e < 0 || ++steps > link_count_) throw std::logic_error("loop detected");
        pe.links.push_back(e);
        at = net_.link(e).to;
      }
      if ((int)pe.links.size() != ones) throw std::logic_error("loop detected");
      plan.entries.push_back(std::move(pe));
    }
    return plan;
  }

 private:
  struct TrailEntry {
    int var;
    std::uint8_t old_dom;
    bool is_plow;
    Rational old_low;
  };
  struct Decision {
    int var;
    int first_value;   // value tried first per the order
    int tried;         // 1 after first branch, 2 after both
    std::size_t mark;  // trail size before the first application
  };

  int var_of(const std::string& demand, const std::string& link) const {
    for (int d = 0; d < demand_count_; ++d)
      if (req_.demands[d].id == demand) return d * link_count_ + net_.require_link(link);
    throw InputError("unknown demand: " + demand);
  }

  bool tie_less(int d1, int e1, int d2, int e2) const {
    const std::string &a = req_.demands[d1].id, &b = req_.demands[d2].id;
    if (a != b) return a < b;
    return net_.link(e1).id < net_.link(e2).id;
  }

  // --- domain updates -------------------------------------------------

  bool set_dom(int d, int e, std::uint8_t nd) {
    int v = d * link_count_ + e;
    if (dom_[v] == nd) return true;
    trail_.push_back({v, dom_[v], false, Rational(0)});
    dom_[v] = nd;
    if (nd == 0) return false;
    on_x_changed(d, e);
    return true;
  }
  bool remove_one(int d, int e) {
    std::uint8_t cur = dom_[d * link_count_ + e];
    if (!(cur & 2)) return true;
    return set_dom(d, e, cur & std::uint8_t(~2));
  }
  bool assign_one(int d, int e) {
    std::uint8_t cur = dom_[d * link_count_ + e];
    if (cur == 2) return true;
    return set_dom(d, e, cur & std::uint8_t(~1));
  }

  bool raise_plow(int d, int e, const Rational& v, bool with_cut) {
    int idx = d * link_count_ + e;
    if (!(plow_[idx] < v)) return true;
    trail_.push_back({idx, 0, true, plow_[idx]});
    plow_[idx] = v;
    on_p_changed(d, e);
    if (dom_[idx] & 2) {
      bool over_bound = with_cut && !bound_.is_infinite() && v >= bound_;
      if (over_bound || greedy_horizon_ < v) return remove_one(d, e);
    }
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const TrailEntry& t = trail_.back();
      if (t.is_plow)
        plow_[t.var] = t.old_low;
      else
        dom_[t.var] = t.old_dom;
      trail_.pop_back();
    }
  }

  // --- propagation queues ----------------------------------------------

  void enqueue_degree(int d, int n) {
    int key;
    if (n == req_.destination)
      key = d * (site_count_ + 2) + site_count_ + 1;
    else if (is_origin_[d * site_count_ + n])
      key = d * (site_count_ + 2) + site_count_;
    else
      key = d * (site_count_ + 2) + n;
    if (!in_degq_[key]) {
      in_degq_[key] = 1;
      degq_.push_back(key);
    }
  }
  void enqueue_b(int d, int n) {
    int key = d * site_count_ + n;
    if (!in_bq_[key]) {
      in_bq_[key] = 1;
      bq_.push_back(key);
    }
  }
  void enqueue_cut(int e) {
    if (!in_cutq_[e]) {
      in_cutq_[e] = 1;
      cutq_.push_back(e);
    }
  }
  void on_x_changed(int d, int e) {
    enqueue_degree(d, net_.link(e).from);
    enqueue_degree(d, net_.link(e).to);
    enqueue_b(d, net_.link(e).to);
    enqueue_cut(e);
  }
  void on_p_changed(int d, int e) {
    enqueue_b(d, net_.link(e).to);
    enqueue_cut(e);
  }
  void enqueue_all(bool with_cut) {
    for (int d = 0; d < demand_count_; ++d) {
      enqueue_degree(d, req_.destination);
      for (int s : req_.demands[d].origins) enqueue_degree(d, s);
      for (int n = 0; n < site_count_; ++n) {
        enqueue_degree(d, n);
        enqueue_b(d, n);
      }
    }
    if (with_cut)
      for (int e = 0; e < link_count_; ++e) enqueue_cut(e);
  }
  void clear_queues() {
    for (int k : degq_) in_degq_[k] = 0;
    for (int k : bq_) in_bq_[k] = 0;
    for (int e : cutq_) in_cutq_[e] = 0;
    degq_.clear();
    bq_.clear();
    cutq_.clear();
  }

  bool run_queues(bool with_cut) {
    for (;;) {
      if (!degq_.empty()) {
        int key = degq_.back();
        degq_.pop_back();
        in_degq_[key] = 0;
        int d = key / (site_count_ + 2), n = key % (site_count_ + 2);
        bool ok = n == site_count_       ? check_origin(d)
                  : n == site_count_ + 1 ? check_destination(d)
                                         : check_intermediate(d, n);
        if (!ok) {
          clear_queues();
          return false;
        }
        continue;
      }
      if (!bq_.empty()) {
        int key = bq_.back();
        bq_.pop_back();
        in_bq_[key] = 0;
        if (!check_chaining(key / site_count_, key % site_count_, with_cut)) {
          clear_queues();
          return false;
        }
        continue;
      }
      if (!cutq_.empty()) {
        int e = cutq_.back();
        cutq_.pop_back();
        in_cutq_[e] = 0;
        if (with_cut && !check_cut(e)) {
          clear_queues();
          return false;
        }
        continue;
      }
      return true;
    }
  }

  // Rule (a): 0/1 sum filtering over a link set that must sum to exactly 1.
  bool exactly_one(int d, const std::vector<int>& links) {
    int assigned = -1, candidates = 0;
    for (int e : links) {
      std::uint8_t dm = dom_[d * link_count_ + e];
      if (dm == 2) {
        if (assigned >= 0) return false;
        assigned = e;
      }
      if (dm & 2) ++candidates;
    }
    if (assigned >= 0) {
      for (int e : links)
        if (e != assigned && !remove_one(d, e)) return false;
      return true;
    }
    if (candidates == 0) return false;
    if (candidates == 1)
      for (int e : links)
        if (dom_[d * link_count_ + e] & 2) return assign_one(d, e);
    return true;
  }

  bool check_origin(int d) { return exactly_one(d, out_of_origins_[d]); }
  bool check_destination(int d) { return exactly_one(d, net_.in(req_.destination)); }

  bool check_intermediate(int d, int n) {
    int a_in = 0, c_in = 0, a_out = 0, c_out = 0;
    for (int e : net_.in(n)) {
      std::uint8_t dm = dom_[d * link_count_ + e];
      if (dm == 2) ++a_in;
      if (dm & 2) ++c_in;
    }
    for (int e : net_.out(n)) {
      std::uint8_t dm = dom_[d * link_count_ + e];
      if (dm == 2) ++a_out;
      if (dm & 2) ++c_out;
    }
    if (a_in > 1 || a_out > 1) return false;
    if (a_in == 1)
      for (int e : net_.in(n))
        if (dom_[d * link_count_ + e] == 3 && !remove_one(d, e)) return false;
    if (a_out == 1)
      for (int e : net_.out(n))
        if (dom_[d * link_count_ + e] == 3 && !remove_one(d, e)) return false;
    // Flow balance: both sums are 0/1 and must agree.
    if (a_in == 1) {
      if (c_out == 0) return false;
      if (a_out == 0 && c_out == 1)
        for (int e : net_.out(n))
          if ((dom_[d * link_count_ + e] & 2) && !assign_one(d, e)) return false;
    }
    if (a_out == 1) {
      if (c_in == 0) return false;
      if (a_in == 0 && c_in == 1)
        for (int e : net_.in(n))
          if ((dom_[d * link_count_ + e] & 2) && !assign_one(d, e)) return false;
    }
    if (c_in == 0 && (a_out > 0 || c_out > 0))
      for (int e : net_.out(n))
        if (!remove_one(d, e)) return false;
    if (c_out == 0 && (a_in > 0 || c_in > 0))
      for (int e : net_.in(n))
        if (!remove_one(d, e)) return false;
    return true;
  }

  // Rules (b) and (c) around node n for demand d.
  bool check_chaining(int d, int n, bool with_cut) {
    if (is_origin_[d * site_count_ + n]) return true;
    Rational min_in = Rational::infinity();
    int assigned_in = -1;
    for (int f : net_.in(n)) {
      std::uint8_t dm = dom_[d * link_count_ + f];
      if (!(dm & 2)) continue;
      min_in = min(min_in, plow_[d * link_count_ + f] + dur_[d * link_count_ + f]);
      if (dm == 2) assigned_in = f;
    }
    for (int e : net_.out(n)) {
      int v = d * link_count_ + e;
      if (!(dom_[v] & 2)) continue;
      if (min_in.is_infinite()) {
        if (!remove_one(d, e)) return false;
        continue;
      }
      if (!raise_plow(d, e, min_in, with_cut)) return false;
      if (dom_[v] == 2 && assigned_in >= 0) {
        Rational chained = plow_[d * link_count_ + assigned_in] +
                           dur_[d * link_count_ + assigned_in];
        if (!raise_plow(d, e, chained, with_cut)) return false;
      }
    }
    return true;
  }

  // Rule (d): the per-link cut against the incumbent makespan bound. Prunes
  // a candidate when committing it would push the link's completion bound
  // strictly past the incumbent.
  bool check_cut(int e) {
    if (bound_.is_infinite()) return true;
    Rational min_low = Rational::infinity(), min_size = Rational::infinity();
    Rational assigned_dur(0);
    bool any_assigned = false;
    for (int d = 0; d < demand_count_; ++d) {
      int v = d * link_count_ + e;
      if (!(dom_[v] & 2)) continue;
      min_low = min(min_low, plow_[v]);
      min_size = min(min_size, req_.demands[d].size);
      if (dom_[v] == 2) {
        assigned_dur += dur_[v];
        any_assigned = true;
      }
    }
    if (min_low.is_infinite()) return true;  // no demand may use e
    Rational sp_term = sp_[e].is_infinite() ? Rational::infinity() : sp_[e] * min_size;
    Rational base = min_low + assigned_dur + sp_term;
    if (any_assigned && !(base < bound_)) return false;
    for (int d = 0; d < demand_count_; ++d) {
      int v = d * link_count_ + e;
      if (dom_[v] != 3) continue;
      if (base.is_infinite() || !(base + dur_[v] < bound_))
        if (!remove_one(d, e)) return false;
    }
    return true;
  }

  // --- search -----------------------------------------------------------

  bool hit_deadline() {
    if (!deadline_) return false;
    if ((++tick_ & 15) != 0) return false;
    if (std::chrono::steady_clock::now() < *deadline_) return false;
    return aborted_ = true;
  }

  void push_decision(int d, int e, ValueOrder order) {
    Decision dec;
    dec.var = d * link_count_ + e;
    dec.first_value = order == ValueOrder::Decreasing ? 1 : 0;
    dec.tried = 0;
    dec.mark = trail_.size();
    stack_.push_back(dec);
  }

  bool apply_value(int var, int value) {
    int d = var / link_count_, e = var % link_count_;
    bool ok = value == 1 ? assign_one(d, e) : remove_one(d, e);
    ok = ok && propagate();
    if (trace_sink_) {
      std::string line = "depth=" + std::to_string(stack_.size()) + " X[" +
                         req_.demands[d].id + "," + net_.link(e).id +
                         "]=" + std::to_string(value) + (ok ? " ok" : " dead") +
                         " bound=" + bound_.to_string();
      trace_sink_(line);
    }
    return ok;
  }

  bool apply_top_decision() {
    Decision& dec = stack_.back();
    dec.tried = 1;
    return apply_value(dec.var, dec.first_value);
  }

  // Flip or pop decisions until a consistent node is reached; false once the
  // tree is exhausted (or the deadline fired).
  bool advance() {
    while (!stack_.empty()) {
      if (hit_deadline()) return false;
      Decision& dec = stack_.back();
      undo_to(dec.mark);
      if (dec.tried >= 2) {
        stack_.pop_back();
        continue;
      }
      dec.tried = 2;
      if (apply_value(dec.var, 1 - dec.first_value)) return true;
    }
    exhausted_ = true;
    return false;
  }

  Network net_;
  NormalizedRequest req_;
  Rational bound_;
  Rational greedy_horizon_;
  int demand_count_ = 0, link_count_ = 0, site_count_ = 0;

  std::vector<std::uint8_t> dom_;
  std::vector<Rational> plow_;
  std::vector<Rational> dur_;
  std::vector<Rational> sp_;
  std::vector<char> is_origin_;
  std::vector<std::vector<int>> out_of_origins_;

  std::vector<TrailEntry> trail_;
  std::vector<Decision> stack_;
  std::vector<int> degq_, bq_, cutq_;
  std::vector<char> in_degq_, in_bq_, in_cutq_;

  bool started_ = false;
  bool exhausted_ = false;
  bool aborted_ = false;
  bool bound_refresh_ = true;
  long propagate_count_ = 0;
  unsigned tick_ = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::function<void(const std::string&)> trace_sink_;
};

}  // namespace dtplan

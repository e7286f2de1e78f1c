#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "dtplan/oracle.hpp"
#include "dtplan/planner.hpp"
#include "fixtures.hpp"

using namespace dtplan;

namespace {

std::vector<std::vector<int>> plan_paths(const Plan& p) {
  std::vector<std::vector<int>> out;
  for (const PlanEntry& e : p.entries) out.push_back(e.links);
  return out;
}

std::set<std::vector<std::vector<int>>> enumerate_plans(
    const Network& net, const NormalizedRequest& req, Rational bound,
    Heuristic h = Heuristic::MinPath, ValueOrder order = ValueOrder::Decreasing) {
  PlannerState state(net, req, bound);
  std::set<std::vector<std::vector<int>>> plans;
  while (auto p = state.next_plan(h, order)) {
    REQUIRE(validate_plan(net, req, *p).empty());
    bool fresh = plans.insert(plan_paths(*p)).second;
    CHECK(fresh);  // each full assignment appears once
  }
  return plans;
}

std::set<std::vector<std::vector<int>>> brute_force_plans(const Network& net,
                                                          const NormalizedRequest& req) {
  std::vector<std::vector<std::vector<int>>> choices;
  for (const NormalizedDemand& d : req.demands)
    choices.push_back(oracle::simple_paths(net, d.origins, req.destination));
  std::set<std::vector<std::vector<int>>> combos;
  std::vector<int> idx(choices.size(), 0);
  for (;;) {
    std::vector<std::vector<int>> combo;
    for (std::size_t i = 0; i < idx.size(); ++i) combo.push_back(choices[i][idx[i]]);
    combos.insert(combo);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == (int)choices[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return combos;
}

}  // namespace

TEST_CASE("init leaves D1 unforced with propagated start bounds") {
  Network net = fixtures::d1();
  NormalizedRequest req = validate_request(net, fixtures::one_demand());
  PlannerState state(net, req);
  for (const char* l : {"L1", "L2", "L3"}) {
    auto [zero, one] = state.x_domain("f", l);
    CHECK(zero);
    CHECK(one);
  }
  CHECK(state.p_lower("f", "L1") == Rational(0));
  CHECK(state.p_lower("f", "L3") == Rational(0));
  CHECK(state.p_lower("f", "L2") == Rational(2));
}

TEST_CASE("init throws when the destination has no incoming links") {
  Network net = load_network_text(R"({
    "sites": ["S", "T"],
    "links": [{"id": "ts", "from": "T", "to": "S", "weight": 1}]
  })")
                    .network;
  NormalizedRequest req;
  req.destination = net.require_site("T");
  req.demands.push_back({"f", Rational(1), {net.require_site("S")}});
  CHECK_THROWS_WITH_AS(PlannerState(net, req), doctest::Contains("no feasible routing"),
                       InfeasibleError);
}

TEST_CASE("unique path is forced at init") {
  Network net = load_network_text(R"({
    "sites": ["A", "T"],
    "links": [{"id": "at", "from": "A", "to": "T", "weight": 1}]
  })")
                    .network;
  NormalizedRequest req = validate_request(net, [&] {
    Request r;
    r.destination = "T";
    r.demands.push_back({"f", Rational(1), {"A"}});
    return r;
  }());
  PlannerState state(net, req);
  auto [zero, one] = state.x_domain("f", "at");
  CHECK_FALSE(zero);
  CHECK(one);
}

TEST_CASE("cut propagation under a finite bound") {
  Network net = fixtures::d1();
  NormalizedRequest req = validate_request(net, fixtures::one_demand());
  SUBCASE("bound 5 prunes the direct link and forces the M path") {
    PlannerState state(net, req, Rational(5));
    REQUIRE(state.propagate());
    CHECK(state.x_domain("f", "L3") == std::make_pair(true, false));
    CHECK(state.x_domain("f", "L1") == std::make_pair(false, true));
    CHECK(state.x_domain("f", "L2") == std::make_pair(false, true));
  }
  SUBCASE("infinite bound keeps everything") {
    PlannerState state(net, req);
    REQUIRE(state.propagate());
    CHECK(state.x_domain("f", "L3") == std::make_pair(true, true));
  }
}

TEST_CASE("conditional precedence once consecutive links commit") {
  Network net = fixtures::d1();
  NormalizedRequest req = validate_request(net, fixtures::one_demand());
  PlannerState state(net, req);
  REQUIRE(state.assume("f", "L1", 1));
  auto [zero, one] = state.x_domain("f", "L2");
  CHECK(one);
  CHECK_FALSE(zero);  // flow balance at M forces the continuation
  CHECK(state.p_lower("f", "L2") == Rational(2));
}

TEST_CASE("select_variable scores and ties") {
  Network net = fixtures::d1();
  NormalizedRequest req = validate_request(net, fixtures::one_demand());
  PlannerState state(net, req);
  REQUIRE(state.propagate());
  SUBCASE("MinPath") {
    auto pick = state.select_variable_ids(Heuristic::MinPath);
    REQUIRE(pick.has_value());
    CHECK(pick->first == "f");
    CHECK(pick->second == "L1");  // score 4 beats the direct link's 5
  }
  SUBCASE("FastestLink tie broken by link id") {
    auto pick = state.select_variable_ids(Heuristic::FastestLink);
    REQUIRE(pick.has_value());
    CHECK(pick->second == "L1");  // dur 2 tie between L1 and L2
  }
  SUBCASE("exhausted once all variables are assigned") {
    PlannerState s2(net, req);
    REQUIRE(s2.next_plan(Heuristic::MinPath, ValueOrder::Decreasing).has_value());
    CHECK_FALSE(s2.select_variable(Heuristic::MinPath).has_value());
  }
}

TEST_CASE("next_plan on D1") {
  Network net = fixtures::d1();
  NormalizedRequest req = validate_request(net, fixtures::one_demand());
  SUBCASE("decreasing MinPath finds the M path first") {
    PlannerState state(net, req);
    auto plan = state.next_plan(Heuristic::MinPath, ValueOrder::Decreasing);
    REQUIRE(plan.has_value());
    REQUIRE(plan->entries.size() == 1);
    CHECK(plan->entries[0].links ==
          std::vector<int>{net.require_link("L1"), net.require_link("L2")});
  }
  SUBCASE("increasing order reaches the direct path first") {
    PlannerState state(net, req);
    auto plan = state.next_plan(Heuristic::MinPath, ValueOrder::Increasing);
    REQUIRE(plan.has_value());
    CHECK(plan->entries[0].links == std::vector<int>{net.require_link("L3")});
  }
  SUBCASE("bound 5 only ever yields the M path") {
    PlannerState state(net, req, Rational(5));
    auto plans = enumerate_plans(net, req, Rational(5));
    REQUIRE(plans.size() == 1);
    CHECK(*plans.begin() ==
          std::vector<std::vector<int>>{
              {net.require_link("L1"), net.require_link("L2")}});
  }
  SUBCASE("bound 2 yields nothing") {
    CHECK(enumerate_plans(net, req, Rational(2)).empty());
  }
}

TEST_CASE("extract_paths reads off assignments and rejects loops") {
  Network net = fixtures::d1();
  NormalizedRequest req = validate_request(net, fixtures::one_demand());
  SUBCASE("direct readout") {
    PlannerState state(net, req);
    REQUIRE(state.assume("f", "L3", 1));
    REQUIRE(state.assume("f", "L1", 0));
    Plan plan = state.extract_paths();
    CHECK(plan.entries[0].links == std::vector<int>{net.require_link("L3")});
  }
  SUBCASE("corrupted two-cycle off the path trips the defensive check") {
    Network cyc = load_network_text(R"({
      "sites": ["S", "A", "B", "T"],
      "links": [
        {"id": "st", "from": "S", "to": "T", "weight": 1},
        {"id": "ab", "from": "A", "to": "B", "weight": 1},
        {"id": "ba", "from": "B", "to": "A", "weight": 1}
      ]
    })")
                      .network;
    NormalizedRequest r2;
    r2.destination = cyc.require_site("T");
    r2.demands.push_back({"f", Rational(1), {cyc.require_site("S")}});
    PlannerState state(cyc, r2);
    state.set_domain_unchecked("f", "st", 1);
    state.set_domain_unchecked("f", "ab", 1);
    state.set_domain_unchecked("f", "ba", 1);
    CHECK_THROWS_WITH_AS(state.extract_paths(), doctest::Contains("loop detected"),
                         std::logic_error);
  }
}

TEST_CASE("exhaustive enumeration matches brute force") {
  SUBCASE("one demand on D1") {
    Network net = fixtures::d1();
    NormalizedRequest req = validate_request(net, fixtures::one_demand());
    auto plans = enumerate_plans(net, req, Rational::infinity());
    CHECK(plans == brute_force_plans(net, req));
    CHECK(plans.size() == 2);
  }
  SUBCASE("two demands on D1") {
    Network net = fixtures::d1();
    NormalizedRequest req = validate_request(net, fixtures::two_demands());
    auto plans = enumerate_plans(net, req, Rational::infinity());
    CHECK(plans == brute_force_plans(net, req));
    CHECK(plans.size() == 4);
  }
  SUBCASE("cycle in the graph is starved, never routed") {
    Network net = load_network_text(R"({
      "sites": ["S", "A", "B", "T"],
      "links": [
        {"id": "sa", "from": "S", "to": "A", "weight": 1},
        {"id": "ab", "from": "A", "to": "B", "weight": 1},
        {"id": "ba", "from": "B", "to": "A", "weight": 1},
        {"id": "at", "from": "A", "to": "T", "weight": 2},
        {"id": "bt", "from": "B", "to": "T", "weight": 3},
        {"id": "st", "from": "S", "to": "T", "weight": 6}
      ]
    })")
                      .network;
    NormalizedRequest req = validate_request(net, [&] {
      Request r;
      r.destination = "T";
      r.demands.push_back({"f", Rational(1), {"S"}});
      return r;
    }());
    auto plans = enumerate_plans(net, req, Rational::infinity());
    auto truth = brute_force_plans(net, req);
    CHECK(plans == truth);
    CHECK(plans.size() == 3);
  }
  SUBCASE("both heuristics and orders agree on the plan set") {
    Network net = fixtures::d1();
    NormalizedRequest req = validate_request(net, fixtures::two_demands());
    auto a = enumerate_plans(net, req, Rational::infinity(), Heuristic::MinPath,
                             ValueOrder::Decreasing);
    auto b = enumerate_plans(net, req, Rational::infinity(), Heuristic::FastestLink,
                             ValueOrder::Increasing);
    CHECK(a == b);
  }
}

TEST_CASE("parallel links count as distinct routes") {
  Network net = load_network_text(R"({
    "sites": ["S", "T"],
    "links": [
      {"id": "fast", "from": "S", "to": "T", "weight": 2},
      {"id": "slow", "from": "S", "to": "T", "weight": 7}
    ]
  })")
                    .network;
  NormalizedRequest req = validate_request(net, [&] {
    Request r;
    r.destination = "T";
    r.demands.push_back({"f", Rational(1), {"S"}});
    return r;
  }());
  auto plans = enumerate_plans(net, req, Rational::infinity());
  CHECK(plans.size() == 2);
  CHECK(plans == brute_force_plans(net, req));
}

TEST_CASE("multiple origins choose one departure") {
  Network net = load_network_text(R"({
    "sites": ["A", "B", "T"],
    "links": [
      {"id": "at", "from": "A", "to": "T", "weight": 3},
      {"id": "bt", "from": "B", "to": "T", "weight": 1}
    ]
  })")
                    .network;
  NormalizedRequest req = validate_request(net, [&] {
    Request r;
    r.destination = "T";
    r.demands.push_back({"f", Rational(1), {"A", "B"}});
    return r;
  }());
  auto plans = enumerate_plans(net, req, Rational::infinity());
  CHECK(plans.size() == 2);  // one per origin
  PlannerState state(net, req);
  auto plan = state.next_plan(Heuristic::MinPath, ValueOrder::Decreasing);
  REQUIRE(plan.has_value());
  CHECK(plan->entries[0].origin == net.require_site("B"));  // cheaper departure
}

TEST_CASE("start bounds are monotone and restored on backtrack") {
  Network net = fixtures::d1();
  NormalizedRequest req = validate_request(net, fixtures::two_demands());
  PlannerState state(net, req);
  REQUIRE(state.propagate());
  Rational before = state.p_lower("f1", "L2");
  std::size_t mark = state.trail_size();
  REQUIRE(state.assume("f1", "L1", 1));
  CHECK(state.p_lower("f1", "L2") >= before);
  (void)mark;
}

TEST_CASE("decision trace emission") {
  Network net = fixtures::d1();
  NormalizedRequest req = validate_request(net, fixtures::one_demand());
  PlannerState state(net, req);
  std::vector<std::string> lines;
  state.set_trace_sink([&](const std::string& l) { lines.push_back(l); });
  REQUIRE(state.next_plan(Heuristic::MinPath, ValueOrder::Decreasing).has_value());
  REQUIRE_FALSE(lines.empty());
  CHECK(lines[0].find("depth=1") != std::string::npos);
  CHECK(lines[0].find("X[f,L1]=1") != std::string::npos);
  CHECK(lines[0].find("bound=") != std::string::npos);
}

TEST_CASE("tightening the bound between plans prunes later plans") {
  Network net = fixtures::d1();
  NormalizedRequest req = validate_request(net, fixtures::one_demand());
  PlannerState state(net, req);
  auto first = state.next_plan(Heuristic::MinPath, ValueOrder::Increasing);
  REQUIRE(first.has_value());
  CHECK(first->entries[0].links.size() == 1);  // direct path, makespan 5
  state.set_makespan_bound(Rational(5));       // strict: must beat 5 now
  auto second = state.next_plan(Heuristic::MinPath, ValueOrder::Increasing);
  REQUIRE(second.has_value());
  CHECK(second->entries[0].links.size() == 2);  // M path, makespan 4
  state.set_makespan_bound(Rational(4));
  CHECK_FALSE(state.next_plan(Heuristic::MinPath, ValueOrder::Increasing).has_value());
}

#include <atomic>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dtplan/execsim.hpp"
#include "dtplan/io.hpp"
#include "dtplan/optimizer.hpp"
#include "dtplan/p2p.hpp"
#include "dtplan/plan.hpp"
#include "dtplan/workload.hpp"

namespace fs = std::filesystem;
using namespace dtplan;

namespace {

constexpr const char* kVersion = "dtplan 0.1.0";

// Exit codes: 0 success, 1 usage or input error, 2 infeasible instance.
constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kInfeasible = 2;

struct Manifest {
  std::string command;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json options = nlohmann::json::object();
  std::uint64_t seed = 0;
  long wall_ms = 0;
};

void write_manifest(const fs::path& dir, const Manifest& m) {
  nlohmann::json doc;
  doc["command"] = m.command;
  doc["inputs"] = m.inputs;
  doc["options"] = m.options;
  doc["seed"] = m.seed;
  doc["tool_version"] = kVersion;
  doc["wall_time_ms"] = m.wall_ms;
  write_file((dir / "manifest.json").string(), doc.dump(2) + "\n");
}

Heuristic parse_heuristic(const std::string& name) {
  if (name == "minpath") return Heuristic::MinPath;
  if (name == "fastestlink") return Heuristic::FastestLink;
  throw InputError("unknown heuristic: " + name + " (expected minpath|fastestlink)");
}

ValueOrder parse_value_order(const std::string& name) {
  if (name == "dec") return ValueOrder::Decreasing;
  if (name == "inc") return ValueOrder::Increasing;
  throw InputError("unknown value order: " + name + " (expected inc|dec)");
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ','))
    if (!part.empty()) out.push_back(part);
  return out;
}

OriginDistribution parse_distribution(const std::string& text) {
  OriginDistribution dist;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto eq = part.find('=');
    if (eq == std::string::npos)
      throw InputError("bad distribution entry: " + part + " (expected SITE=PROB)");
    dist.probability[part.substr(0, eq)] = std::stod(part.substr(eq + 1));
  }
  return dist;
}

struct SolveRun {
  Solution solution;
  long wall_ms = 0;
};

SolveRun run_solve(const Network& net, const Request& req, const SolveOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  SolveRun run;
  run.solution = solve(net, req, opt);
  run.wall_ms = (long)std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return run;
}

void write_solve_outputs(const fs::path& dir, const Network& net, const SolveRun& run) {
  const Solution& sol = run.solution;
  write_file((dir / "plan.json").string(),
             plan_to_json(net, sol.best_plan, &sol.best_makespan).dump(2) + "\n");
  write_file((dir / "schedule.csv").string(),
             transfer_log_csv(schedule_rows(sol.problem, sol.best_schedule),
                              sol.best_makespan));
  write_file((dir / "trace.csv").string(), trace_csv(sol.trace));
}

int cmd_solve(const std::string& network_path, const std::string& request_path,
              const std::string& heuristic, const std::string& value_order,
              double time_limit, std::uint64_t seed, const std::string& out,
              bool verbose) {
  Network net = load_network_file(network_path).network;
  Request req = load_request_file(request_path);
  SolveOptions opt;
  opt.heuristic = parse_heuristic(heuristic);
  opt.value_order = parse_value_order(value_order);
  if (time_limit > 0) opt.time_limit_seconds = time_limit;
  opt.seed = seed;
  if (verbose)
    opt.trace_sink = [](const std::string& line) { std::cerr << line << "\n"; };

  SolveRun run = run_solve(net, req, opt);
  fs::create_directories(out);
  write_solve_outputs(out, net, run);
  Manifest m;
  m.command = "solve";
  m.inputs = {{"network", network_path}, {"request", request_path}};
  m.options = {{"heuristic", heuristic},
               {"value_order", value_order},
               {"time_limit",
                time_limit > 0 ? nlohmann::json(time_limit) : nlohmann::json()}};
  m.seed = seed;
  m.wall_ms = run.wall_ms;
  write_manifest(out, m);

  std::cout << "makespan " << run.solution.best_makespan.to_string() << "\n"
            << "best at " << run.solution.best_time_ms << " ms\n"
            << "status " << to_string(run.solution.status) << "\n";
  return kOk;
}

int cmd_p2p(const std::string& network_path, const std::string& request_path,
            std::uint64_t seed, const std::string& out) {
  Network net = load_network_file(network_path).network;
  Request req = load_request_file(request_path);
  auto t0 = std::chrono::steady_clock::now();
  P2PResult res = simulate_p2p(net, req, seed);
  fs::create_directories(out);
  write_file((fs::path(out) / "transfers.csv").string(),
             transfer_log_csv(res.transfers, res.makespan));
  Manifest m;
  m.command = "p2p";
  m.inputs = {{"network", network_path}, {"request", request_path}};
  m.seed = seed;
  m.wall_ms = (long)std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  write_manifest(out, m);
  std::cout << "makespan " << res.makespan.to_string() << "\n";
  return kOk;
}

int cmd_simulate(const std::string& network_path, const std::string& plan_path,
                 int max_streams, std::uint64_t seed, const std::string& out) {
  NetworkDocument doc = load_network_file(network_path);
  Network net = doc.network;
  if (max_streams > 0) {
    std::vector<Site> sites = net.sites();
    std::vector<Link> links = net.links();
    for (Link& l : links) l.max_streams = max_streams;
    net = Network(std::move(sites), std::move(links));
  }
  PlanDocument plan = load_plan_file(net, plan_path);
  auto t0 = std::chrono::steady_clock::now();
  ExecResult res = simulate_execution(net, plan.plan, seed);
  fs::create_directories(out);
  write_file((fs::path(out) / "transfers.csv").string(),
             transfer_log_csv(res.transfers, res.makespan));
  Manifest m;
  m.command = "simulate";
  m.inputs = {{"network", network_path}, {"plan", plan_path}};
  m.options = {{"max_streams", max_streams}};
  m.seed = seed;
  m.wall_ms = (long)std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  write_manifest(out, m);
  std::cout << "makespan " << res.makespan.to_string() << "\n";
  if (plan.schedule_makespan) {
    Rational gap = compare_makespans(*plan.schedule_makespan, res.makespan);
    std::cout << "scheduled " << plan.schedule_makespan->to_string() << "\n"
              << "gap " << (gap.is_infinite() ? "inf" : std::to_string(gap.to_double()))
              << "\n";
  }
  return kOk;
}

int cmd_gen(int count, std::uint64_t seed, const std::string& dist_text,
            const std::string& destination, const std::string& out) {
  OriginDistribution dist =
      dist_text.empty() ? default_origin_distribution() : parse_distribution(dist_text);
  auto t0 = std::chrono::steady_clock::now();
  Request req = generate_demands(count, dist, seed, destination);
  fs::create_directories(out);
  write_file((fs::path(out) / "request.json").string(),
             request_to_json(req).dump(2) + "\n");
  Manifest m;
  m.command = "gen";
  m.options = {{"count", count}, {"destination", destination}};
  for (const auto& [site, p] : dist.probability) m.options["distribution"][site] = p;
  m.seed = seed;
  m.wall_ms = (long)std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  write_manifest(out, m);
  std::cout << "wrote " << count << " demands\n";
  return kOk;
}

struct BenchRow {
  int size = 0;
  std::uint64_t seed = 0;
  std::string heuristic;
  std::string makespan;  // "error: ..." when the sub-run failed
  long best_ms = 0;
  std::string status;
  std::string p2p_makespan;
  std::string exec_makespan;
  std::string gap;
};

int cmd_bench(const std::string& network_path, const std::vector<int>& sizes,
              const std::vector<std::uint64_t>& seeds, double time_limit,
              const std::string& out, int jobs) {
  Network net = network_path.empty() ? benchmark_network()
                                     : load_network_file(network_path).network;
  fs::create_directories(out);

  struct Job {
    int size;
    std::uint64_t seed;
  };
  std::vector<Job> grid;
  for (int n : sizes)
    for (std::uint64_t s : seeds) grid.push_back({n, s});

  std::vector<std::vector<BenchRow>> results(grid.size());
  auto worker = [&](std::size_t idx) {
    const Job& job = grid[idx];
    Request req = generate_demands(job.size, default_origin_distribution(), job.seed);
    std::string p2p_text = "infeasible";
    try {
      p2p_text = simulate_p2p(net, req, job.seed).makespan.to_string();
    } catch (const std::exception& e) {
      p2p_text = std::string("error: ") + e.what();
    }
    for (Heuristic h : {Heuristic::FastestLink, Heuristic::MinPath}) {
      BenchRow row;
      row.size = job.size;
      row.seed = job.seed;
      row.heuristic = to_string(h);
      row.p2p_makespan = p2p_text;
      try {
        SolveOptions opt;
        opt.heuristic = h;
        if (time_limit > 0) opt.time_limit_seconds = time_limit;
        opt.seed = job.seed;
        SolveRun run = run_solve(net, req, opt);
        row.makespan = run.solution.best_makespan.to_string();
        row.best_ms = run.solution.best_time_ms;
        row.status = to_string(run.solution.status);
        fs::path run_dir = fs::path(out) / ("run-" + std::to_string(job.size) + "-" +
                                            std::to_string(job.seed) + "-" + to_string(h));
        fs::create_directories(run_dir);
        write_solve_outputs(run_dir, net, run);
        Manifest rm;
        rm.command = "bench/solve";
        rm.options = {{"files", job.size}, {"heuristic", to_string(h)},
                      {"time_limit", time_limit}};
        rm.seed = job.seed;
        rm.wall_ms = run.wall_ms;
        write_manifest(run_dir, rm);
        ExecResult exec = simulate_execution(net, run.solution.best_plan);
        row.exec_makespan = exec.makespan.to_string();
        Rational gap = compare_makespans(run.solution.best_makespan, exec.makespan);
        row.gap = gap.is_infinite() ? "inf" : gap.to_string();
      } catch (const std::exception& e) {
        row.makespan = std::string("error: ") + e.what();
      }
      results[idx].push_back(row);
    }
  };

  if (jobs < 1) jobs = (int)std::thread::hardware_concurrency();
  if (jobs < 1) jobs = 1;
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t idx = next.fetch_add(1);
        if (idx >= grid.size()) return;
        worker(idx);
      }
    });
  for (std::thread& t : pool) t.join();

  std::ostringstream csv;
  csv << "files,seed,heuristic,makespan,best_time_ms,status,p2p_makespan,"
         "exec_makespan,exec_gap\n";
  for (const auto& rows : results)
    for (const BenchRow& r : rows)
      csv << r.size << "," << r.seed << "," << r.heuristic << "," << r.makespan << ","
          << r.best_ms << "," << r.status << "," << r.p2p_makespan << ","
          << r.exec_makespan << "," << r.gap << "\n";
  write_file((fs::path(out) / "bench.csv").string(), csv.str());

  Manifest m;
  m.command = "bench";
  m.inputs = {{"network",
               network_path.empty() ? "<builtin benchmark fixture>" : network_path}};
  m.options["sizes"] = sizes;
  m.options["seeds"] = seeds;
  m.options["time_limit"] = time_limit;
  m.options["jobs"] = jobs;
  write_manifest(out, m);
  std::cout << "wrote " << (grid.size() * 2) << " rows to "
            << (fs::path(out) / "bench.csv").string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-source file transfer planning and scheduling"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string network, request, plan_path, out = ".";
  std::string heuristic = "minpath", value_order = "dec", dist_text,
              destination = "Prague";
  double time_limit = 0;
  std::uint64_t seed = 0;
  int max_streams = 0, count = 0, jobs = 0;
  bool verbose = false;
  std::string sizes_text = "25,50,100,150,200";
  std::string seeds_text = "1,2,3,4,5";

  CLI::App* solve_cmd = app.add_subcommand("solve", "plan and schedule a request");
  solve_cmd->add_option("--network", network, "network document")->required();
  solve_cmd->add_option("--request", request, "request document")->required();
  solve_cmd->add_option("--heuristic", heuristic, "minpath|fastestlink");
  solve_cmd->add_option("--value-order", value_order, "inc|dec");
  solve_cmd->add_option("--time-limit", time_limit, "wall seconds");
  solve_cmd->add_option("--seed", seed, "seed (reserved)");
  solve_cmd->add_option("--out", out, "output directory")->required();
  solve_cmd->add_flag("-v,--verbose", verbose, "emit the planner decision trace");

  CLI::App* p2p_cmd = app.add_subcommand("p2p", "run the direct-link baseline");
  p2p_cmd->add_option("--network", network, "network document")->required();
  p2p_cmd->add_option("--request", request, "request document")->required();
  p2p_cmd->add_option("--seed", seed, "tie-breaking seed");
  p2p_cmd->add_option("--out", out, "output directory")->required();

  CLI::App* sim_cmd = app.add_subcommand("simulate", "greedy execution of a stored plan");
  sim_cmd->add_option("--network", network, "network document")->required();
  sim_cmd->add_option("--plan", plan_path, "plan document")->required();
  sim_cmd->add_option("--max-streams", max_streams, "override per-link stream cap");
  sim_cmd->add_option("--seed", seed, "seed (reserved)");
  sim_cmd->add_option("--out", out, "output directory")->required();

  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a benchmark request");
  gen_cmd->add_option("--count", count, "number of demands")->required();
  gen_cmd->add_option("--seed", seed, "generator seed");
  gen_cmd->add_option("--dist", dist_text, "SITE=PROB[,SITE=PROB...]");
  gen_cmd->add_option("--dest", destination, "destination site");
  gen_cmd->add_option("--out", out, "output directory")->required();

  CLI::App* bench_cmd = app.add_subcommand("bench", "heuristics vs P2P sweep");
  bench_cmd->add_option("--network", network,
                        "network document (default: built-in fixture)");
  bench_cmd->add_option("--sizes", sizes_text, "comma-separated demand counts");
  bench_cmd->add_option("--seeds", seeds_text, "comma-separated seeds");
  bench_cmd->add_option("--time-limit", time_limit, "per-solve wall seconds");
  bench_cmd->add_option("--jobs", jobs, "parallel runs (default: hardware)");
  bench_cmd->add_option("--out", out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed())
      return cmd_solve(network, request, heuristic, value_order, time_limit, seed, out,
                       verbose);
    if (p2p_cmd->parsed()) return cmd_p2p(network, request, seed, out);
    if (sim_cmd->parsed())
      return cmd_simulate(network, plan_path, max_streams, seed, out);
    if (gen_cmd->parsed()) return cmd_gen(count, seed, dist_text, destination, out);
    if (bench_cmd->parsed()) {
      std::vector<int> sizes;
      for (const std::string& t : split_csv(sizes_text)) sizes.push_back(std::stoi(t));
      std::vector<std::uint64_t> seeds;
      for (const std::string& t : split_csv(seeds_text)) seeds.push_back(std::stoull(t));
      return cmd_bench(network, sizes, seeds, time_limit <= 0 ? 30.0 : time_limit, out,
                       jobs);
    }
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

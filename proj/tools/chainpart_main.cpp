// Command-line front end: solve instances, generate corpora, cross-verify
// the fast solver against the oracles, and benchmark scaling.
//
// Exit codes: 0 success, 1 verification mismatch, 2 input error.

#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chainpart/instance.hpp"
#include "chainpart/oracle.hpp"
#include "chainpart/solver.hpp"

using namespace chainpart;

namespace {

struct VerifyFailure {
  int64_t index = -1;
  std::string text;
  std::string detail;
};

uint64_t mix(uint64_t a, uint64_t b) {
  uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

GenParams verify_params(uint64_t seed, int64_t index, int32_t n_max) {
  GenParams p;
  uint64_t h = mix(seed, uint64_t(index));
  p.shape = TreeShape(index % 5);
  p.w0_mode = (index / 5) % 2 ? W0Mode::Loose : W0Mode::Tight;
  p.n = 1 + int32_t(h % uint64_t(n_max));
  p.w_max = 1 + Weight(mix(h, 1) % 10);
  p.s_max = Cost(mix(h, 2) % 50);
  p.seed = mix(h, 3);
  return p;
}

// Runs one verification instance; returns true when everything agrees.
bool verify_one(const GenParams& p, std::string& detail) {
  Instance inst = generate_random(p);
  AugmentedTree t = augment(inst);
  Solver sv(t);
  Solution fast = sv.solve();
  Solution ref = oracle::naive_solve(t);
  for (VertexId v = 1; v <= inst.n; ++v) {
    if (fast.F[v] != ref.F[v]) {
      detail = "F[" + std::to_string(v) + "]: fast=" + std::to_string(fast.F[v]) +
               " naive=" + std::to_string(ref.F[v]);
      return false;
    }
  }
  if (inst.n <= 10) {
    Cost ex = oracle::exhaustive_solve(inst);
    if (ex != fast.optimal) {
      detail = "optimal: fast=" + std::to_string(fast.optimal) +
               " exhaustive=" + std::to_string(ex);
      return false;
    }
  }
  EvalResult ev = evaluate_partition(inst, reconstruct(t, fast));
  if (!ev.feasible) {
    detail = "reconstructed partition infeasible: " + ev.violation;
    return false;
  }
  if (ev.cost != fast.optimal) {
    detail = "reconstructed cost " + std::to_string(ev.cost) + " != optimal " +
             std::to_string(fast.optimal);
    return false;
  }
  for (VertexId v = 1; v <= inst.n; ++v) {
    if (sv.counters().window_exits[v] > 1 || sv.counters().smax_losses[v] > 1) {
      detail = "amortized counter exceeded at vertex " + std::to_string(v);
      return false;
    }
  }
  return true;
}

int cmd_solve(const std::string& path, const std::string& algorithm, bool emit_partition,
              bool as_json) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return 2;
  }
  Instance inst;
  try {
    inst = parse_text(in);
  } catch (const ParseError& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return 2;
  }
  AugmentedTree t = augment(inst);

  Cost optimal = 0;
  const std::vector<Cost>* F = nullptr;
  Partition part;
  bool have_solution = false;
  Solution sol;
  if (algorithm == "fast") {
    sol = solve(t);
  } else if (algorithm == "naive") {
    sol = oracle::naive_solve(t);
  } else if (algorithm == "exhaustive") {
    try {
      optimal = oracle::exhaustive_solve(inst);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  } else {
    std::cerr << "error: unknown algorithm " << algorithm << "\n";
    return 2;
  }
  if (algorithm != "exhaustive") {
    have_solution = true;
    optimal = sol.optimal;
    F = &sol.F;
    part = reconstruct(t, sol);
  }

  if (as_json) {
    nlohmann::json out;
    out["optimal_cost"] = optimal;
    if (have_solution) {
      out["F"] = std::vector<Cost>(F->begin() + 1, F->end());
      nlohmann::json chains = nlohmann::json::array();
      for (const auto& c : part.chains) chains.push_back(c);
      out["chains"] = chains;
    }
    std::cout << out.dump() << "\n";
  } else {
    std::cout << optimal << "\n";
    if (emit_partition && have_solution) {
      for (const auto& c : part.chains) {
        for (size_t k = 0; k < c.size(); ++k) std::cout << (k ? " " : "") << c[k];
        std::cout << "\n";
      }
    }
  }
  return 0;
}

int cmd_verify(int64_t count, int32_t n_max, uint64_t seed, int workers) {
  std::atomic<int64_t> next{0};
  std::atomic<int64_t> passed{0};
  std::mutex fail_mu;
  VerifyFailure first_fail;

  auto worker = [&]() {
    for (;;) {
      int64_t k = next.fetch_add(1);
      if (k >= count) return;
      {
        std::lock_guard<std::mutex> lk(fail_mu);
        if (first_fail.index >= 0 && first_fail.index < k) return;
      }
      GenParams p = verify_params(seed, k, n_max);
      std::string detail;
      if (verify_one(p, detail)) {
        passed.fetch_add(1);
      } else {
        std::lock_guard<std::mutex> lk(fail_mu);
        if (first_fail.index < 0 || k < first_fail.index)
          first_fail = {k, emit_text(generate_random(p)), detail};
      }
    }
  };

  int nthreads = std::max(1, workers);
  std::vector<std::thread> pool;
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  if (first_fail.index >= 0) {
    std::cerr << "mismatch on instance " << first_fail.index << ": " << first_fail.detail << "\n"
              << first_fail.text;
    std::cout << passed.load() << "/" << count << " OK\n";
    return 1;
  }
  std::cout << count << "/" << count << " OK\n";
  return 0;
}

int cmd_bench(const std::string& sizes_csv, const std::string& shape_tok, int reps,
              uint64_t seed) {
  TreeShape shape;
  if (!shape_from_token(shape_tok, shape)) {
    std::cerr << "error: unknown shape " << shape_tok << "\n";
    return 2;
  }
  std::vector<int64_t> sizes;
  std::stringstream ss(sizes_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      int64_t n = std::stoll(tok);
      if (n < 1) throw std::invalid_argument("size");
      sizes.push_back(n);
    } catch (...) {
      std::cerr << "error: bad size token '" << tok << "'\n";
      return 2;
    }
  }
  if (sizes.empty()) {
    std::cerr << "error: empty size list\n";
    return 2;
  }
  std::cout << "n,shape,seed,rep,solve_ms\n";
  for (int64_t n : sizes) {
    GenParams p;
    p.n = int32_t(n);
    p.shape = shape;
    p.w0_mode = W0Mode::Tight;
    p.w_max = 1000;
    p.s_max = 1000000;
    p.seed = mix(seed, uint64_t(n));
    Instance inst = generate_random(p);
    AugmentedTree t = augment(inst);
    for (int rep = -1; rep < reps; ++rep) {  // rep -1 is the discarded warm-up
      auto t0 = std::chrono::steady_clock::now();
      Solution sol = solve(t);
      auto t1 = std::chrono::steady_clock::now();
      if (sol.optimal < 0) std::cerr << "";  // keep the solve observable
      if (rep < 0) continue;
      double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      std::cout << n << "," << shape_tok << "," << seed << "," << rep << ","
                << ms << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sum-of-max chain partition solver"};
  app.require_subcommand(1);

  auto* sc_solve = app.add_subcommand("solve", "solve an instance file");
  std::string input, algorithm = "fast";
  bool emit_partition = false, as_json = false;
  sc_solve->add_option("--input", input, "instance file")->required();
  sc_solve->add_option("--algorithm", algorithm, "fast|naive|exhaustive")
      ->check(CLI::IsMember({"fast", "naive", "exhaustive"}));
  sc_solve->add_flag("--emit-partition", emit_partition, "print the optimal chains");
  sc_solve->add_flag("--json", as_json, "JSON output");

  auto* sc_gen = app.add_subcommand("gen", "generate a random instance");
  GenParams gen;
  std::string shape_tok = "uniform-attach", w0_mode_tok = "tight";
  sc_gen->add_option("--n", gen.n, "vertex count")->required()->check(CLI::PositiveNumber);
  sc_gen->add_option("--seed", gen.seed, "random seed")->required();
  sc_gen->add_option("--shape", shape_tok, "uniform-attach|path|star|caterpillar|binary")
      ->required()
      ->check(CLI::IsMember({"uniform-attach", "path", "star", "caterpillar", "binary"}));
  sc_gen->add_option("--w-max", gen.w_max, "maximum vertex weight")->check(CLI::PositiveNumber);
  sc_gen->add_option("--s-max", gen.s_max, "maximum vertex cost")->check(CLI::NonNegativeNumber);
  sc_gen->add_option("--w0-mode", w0_mode_tok, "tight|loose")
      ->check(CLI::IsMember({"tight", "loose"}));

  auto* sc_verify = app.add_subcommand("verify", "cross-check fast vs oracle solvers");
  int64_t count = 100;
  int32_t n_max = 200;
  uint64_t vseed = 0;
  int workers = 1;
  sc_verify->add_option("--count", count, "number of instances")->check(CLI::NonNegativeNumber);
  sc_verify->add_option("--n-max", n_max, "maximum n")->check(CLI::PositiveNumber);
  sc_verify->add_option("--seed", vseed, "base seed");
  sc_verify->add_option("--workers", workers, "parallel workers")->check(CLI::PositiveNumber);

  auto* sc_bench = app.add_subcommand("bench", "time the fast solver");
  std::string sizes = "10000";
  std::string bench_shape = "uniform-attach";
  int reps = 3;
  uint64_t bseed = 0;
  sc_bench->add_option("--sizes", sizes, "comma-separated instance sizes")->required();
  sc_bench->add_option("--shape", bench_shape, "tree shape");
  sc_bench->add_option("--reps", reps, "measured repetitions")->check(CLI::PositiveNumber);
  sc_bench->add_option("--seed", bseed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sc_solve->parsed()) return cmd_solve(input, algorithm, emit_partition, as_json);
    if (sc_gen->parsed()) {
      shape_from_token(shape_tok, gen.shape);
      gen.w0_mode = w0_mode_tok == "loose" ? W0Mode::Loose : W0Mode::Tight;
      std::cout << emit_text(generate_random(gen));
      return 0;
    }
    if (sc_verify->parsed()) return cmd_verify(count, n_max, vseed, workers);
    if (sc_bench->parsed()) return cmd_bench(sizes, bench_shape, reps, bseed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

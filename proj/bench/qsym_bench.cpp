// Serial reference kernels against their OpenMP versions.
//
//   qsym_bench [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "qsym/benchgen.hpp"
#include "qsym/breaker.hpp"
#include "qsym/kernels.hpp"

using namespace qsym;

namespace {

double seconds(const std::function<void()>& body, int repeats) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) body();
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return elapsed.count() / repeats;
}

void row(const char* name, double serial, double parallel, bool agree) {
  std::printf("%-34s %10.4f %10.4f %7.2fx  %s\n", name, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0, agree ? "agree" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("threads: %d, repeats: %d\n", kernels::max_threads(), repeats);
  std::printf("%-34s %10s %10s %8s\n", "kernel", "serial s", "omp s", "speedup");
  bool all_agree = true;

  {
    // breaker formula against itself after simplification-free rebuild
    RandomQbfOptions opts;
    opts.seed = 7;
    opts.vars = 16;
    opts.clauses = 40;
    opts.planted = true;
    const auto q = gen_random_qbf(opts);
    const std::vector<SignedPermutation> gens{*q.planted};
    const Formula psi = lex_leader_formula(q.instance.prefix, gens).formula();
    const Formula phi = q.instance.matrix_formula();
    const auto vars = q.instance.prefix.order();
    bool a = false, b = false;
    const double s = seconds([&] { a = kernels::equivalent_serial(phi && psi, psi && phi, vars); }, repeats);
    const double p = seconds([&] { b = kernels::equivalent_parallel(phi && psi, psi && phi, vars); }, repeats);
    row("truth-table equivalence, n=16", s, p, a == b);
    all_agree &= a == b;
  }

  for (const char* pattern : {"a1e2a2e1", "e2a2e2", "e2a3e4"}) {
    RandomQbfOptions opts;
    opts.seed = 11;
    opts.blocks = parse_block_pattern(pattern);
    opts.vars = 0;
    for (const auto& blk : opts.blocks) opts.vars += blk.size;
    opts.clauses = 12;
    const auto q = gen_random_qbf(opts);
    const Formula phi = q.instance.matrix_formula();
    for (Player role : {Player::Existential, Player::Universal}) {
      if (!count_strategies(q.instance.prefix, role).at_most(1u << 16)) continue;
      std::uint64_t a = 0, b = 0;
      const double s = seconds([&] { a = kernels::count_winning_serial(q.instance.prefix, phi, role, 1u << 16); }, repeats);
      const double p = seconds([&] { b = kernels::count_winning_parallel(q.instance, role, 1u << 16); }, repeats);
      char name[64];
      std::snprintf(name, sizeof name, "winning strategies %s %s", pattern,
                    role == Player::Existential ? "E" : "A");
      row(name, s, p, a == b);
      all_agree &= a == b;
    }
  }
  return all_agree ? 0 : 1;
}

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qsym/benchgen.hpp"
#include "qsym/breaker.hpp"
#include "qsym/detect.hpp"
#include "qsym/error.hpp"
#include "qsym/kernels.hpp"
#include "qsym/qdimacs.hpp"
#include "support/oracles.hpp"

using namespace qsym;

namespace {

const TruthOptions kWide{.max_vars = 64};

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Tallies cases and keeps the first failure for the report line.
struct Tally {
  int total = 0;
  int failed = 0;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    ++total;
    if (ok) return;
    if (failed++ == 0) first_failure = what;
  }
  Outcome outcome(const std::string& extra = {}) const {
    std::string d = std::to_string(total - failed) + "/" + std::to_string(total) + " agree";
    if (!extra.empty()) d += ", " + extra;
    if (failed) d += "; first failure: " + first_failure;
    return {failed == 0 && total > 0, d};
  }
};

GeneratedQbf planted(std::uint64_t seed, int vars, int clauses) {
  RandomQbfOptions opts;
  opts.seed = seed;
  opts.vars = vars;
  opts.clauses = clauses;
  opts.planted = true;
  return gen_random_qbf(opts);
}

QbfInstance normalized(const QbfInstance& q) { return parse_qdimacs(serialize_qdimacs(q)); }

QbfInstance apply_to_matrix(const SignedPermutation& g, const QbfInstance& q) {
  QbfInstance out = q;
  for (auto& c : out.matrix) c = g.apply(c);
  return out;
}

// Planted corpus shared by the breaker criteria: n in 6..10.
std::vector<GeneratedQbf> planted_corpus() {
  std::vector<GeneratedQbf> out;
  for (std::uint64_t seed = 0; seed < 200; ++seed)
    out.push_back(planted(1000 + seed, 6 + int(seed % 5), 5 + int(seed % 8)));
  return out;
}

Outcome oracle_agreement() {
  constexpr std::uint64_t cap = 1u << 12;
  oracle::Random rnd(101);
  Tally t;
  int skipped = 0;
  for (int i = 0; i < 500; ++i) {
    QbfInstance q;
    const int n = rnd.uniform(1, 8);
    if (i % 2 == 0) {
      q = normalized(rnd.instance(n, rnd.uniform(0, 12)));
    } else {
      RandomQbfOptions opts;
      opts.seed = std::uint64_t(i);
      opts.vars = n;
      opts.clauses = rnd.uniform(0, 12);
      q = gen_random_qbf(opts).instance;
    }
    if (!count_strategies(q.prefix, Player::Existential).at_most(cap) ||
        !count_strategies(q.prefix, Player::Universal).at_most(cap)) {
      ++skipped;
      continue;
    }
    const bool truth = qbf_truth(q);
    const bool e_wins = kernels::exists_winning_parallel(q, Player::Existential, cap);
    const bool a_wins = kernels::exists_winning_parallel(q, Player::Universal, cap);
    t.check(truth == e_wins && e_wins != a_wins, "instance " + std::to_string(i));
  }
  return t.outcome(std::to_string(skipped) + " above 2^12 strategies skipped");
}

Outcome truth_invariance() {
  oracle::Random rnd(102);
  Tally t;
  for (int i = 0; i < 200; ++i) {
    const int n = rnd.uniform(1, 12);
    const QbfInstance q = normalized(rnd.instance(n, rnd.uniform(1, 14)));
    const SignedPermutation g = rnd.block_permutation(q.prefix, q.num_vars);
    t.check(qbf_truth(q) == qbf_truth(apply_to_matrix(g, q)), "pair " + std::to_string(i));
  }
  return t.outcome();
}

Outcome breaker_preservation(const std::vector<GeneratedQbf>& corpus) {
  Tally t;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const QbfInstance& q = corpus[i].instance;
    const std::vector<SignedPermutation> gens{*corpus[i].planted};
    const std::string tag = "instance " + std::to_string(i);
    const bool truth = qbf_truth(q);
    const Formula phi = q.matrix_formula();
    const Formula psi_e = lex_leader_formula(q.prefix, gens).formula();
    const Formula psi_a = universal_lex_leader_formula(q.prefix, gens).formula();
    t.check(qbf_truth(q.prefix, phi && psi_e) == truth, tag + " conjoin");
    t.check(qbf_truth(q.prefix, phi || psi_a) == truth, tag + " attach");
    t.check(qbf_truth(q.prefix, (phi || psi_a) && psi_e) == truth, tag + " combined");

    const auto e = encode_existential_cnf(q.prefix, q.num_vars, gens);
    const auto u = encode_universal_dnf(q.prefix, q.num_vars, gens, {.first_aux = e.num_vars + 1});
    const auto ae = augment_instance(q, std::span(&e, 1), AugmentMode::ConjoinCnf);
    const auto u_alone = encode_universal_dnf(q.prefix, q.num_vars, gens);
    const auto au = augment_instance(q, std::span(&u_alone, 1), AugmentMode::AttachDnf);
    const std::vector<EncodedBreaker> both{e, u};
    const auto ac = augment_instance(q, both, AugmentMode::Combined);
    t.check(qbf_truth(ae.instance, kWide) == truth, tag + " conjoin (encoded)");
    t.check(qbf_truth(au.instance, *au.cubes, kWide) == truth, tag + " attach (encoded)");
    t.check(qbf_truth(ac.instance, *ac.cubes, kWide) == truth, tag + " combined (encoded)");
  }
  return t.outcome();
}

Outcome breaker_polarity(const std::vector<GeneratedQbf>& corpus) {
  Tally t;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const QbfInstance& q = corpus[i].instance;
    std::vector<std::vector<SignedPermutation>> sets{{*corpus[i].planted}};
    const Detection d = detect_symmetries(q);
    if (!d.generators.empty()) sets.push_back(d.generators);
    for (const auto& gens : sets) {
      const std::string tag = "instance " + std::to_string(i);
      t.check(qbf_truth(q.prefix, lex_leader_formula(q.prefix, gens).formula()), tag + " exists");
      t.check(!qbf_truth(q.prefix, universal_lex_leader_formula(q.prefix, gens).formula()), tag + " forall");
      const auto e = encode_existential_cnf(q.prefix, q.num_vars, gens);
      QbfInstance ce;
      ce.num_vars = e.num_vars;
      ce.prefix = e.extended;
      ce.matrix = e.clauses;
      t.check(qbf_truth(ce, kWide), tag + " exists (encoded)");
      const auto u = encode_universal_dnf(q.prefix, q.num_vars, gens);
      QbfInstance cu;
      cu.num_vars = u.num_vars;
      cu.prefix = u.extended;
      cu.matrix = {Clause{}};  // empty clause: the cubes alone decide
      t.check(!qbf_truth(cu, u.cubes, kWide), tag + " forall (encoded)");
    }
  }
  return t.outcome();
}

Outcome duality() {
  constexpr std::uint64_t cap = 1u << 10;
  oracle::Random rnd(105);
  Tally t;
  int both_pass = 0, both_fail = 0;
  for (int prefixes = 0; prefixes < 100;) {
    const int n = rnd.uniform(1, 5);
    const Prefix p = rnd.prefix(n);
    if (!count_strategies(p, Player::Existential).at_most(cap) ||
        !count_strategies(p, Player::Universal).at_most(cap))
      continue;
    ++prefixes;
    std::vector<SignedPermutation> gens;
    for (int k = rnd.uniform(1, 2); k > 0; --k) gens.push_back(rnd.block_permutation(p, n));
    const Formula generated = lex_leader_formula(p, gens).formula();
    const Formula arbitrary = rnd.formula(n, 3);
    for (const Formula& psi : {generated, arbitrary}) {
      const bool e = verify_breaker(p, gens, psi).passed();
      const bool a = verify_universal_breaker(p.flipped(), gens, !psi).passed();
      (e ? both_pass : both_fail) += e == a;
      t.check(e == a, "prefix " + p.to_string());
    }
  }
  return t.outcome(std::to_string(both_pass) + " covering, " + std::to_string(both_fail) + " non-covering");
}

Outcome example_orbits() {
  const Prefix p({{Quantifier::Forall, {1}}, {Quantifier::Exists, {2, 3}}});
  const std::vector<SignedPermutation> gens{parse_cycle_notation("(2 3)", 3),
                                            parse_cycle_notation("(-2)(-3)", 3)};
  const OrbitPartition part = semantic_orbits(p, gens, Player::Existential);
  const BreakerReport r = verify_breaker(p, gens, !Formula::var(2));
  // each orbit must contain a strategy choosing y = ⊥ on both branches
  bool witness = true;
  for (const auto& orbit : part.orbits) {
    bool found = false;
    for (std::size_t s : orbit) {
      const auto masks = part.strategies[s].path_masks();
      bool y_false = true;
      for (auto m : masks) y_false &= (m & 0b010u) == 0;
      found |= y_false;
    }
    witness &= found;
  }
  const bool ok = part.orbits.size() == 4 && r.orbits == 4 && r.passed() && witness;
  return {ok, std::to_string(part.orbits.size()) + " orbits, not y covers " + std::to_string(r.covered) + "/" +
                  std::to_string(r.orbits) +
                  (witness ? "" : ", an orbit has no strategy with y = false on both branches")};
}

Outcome strategy_counts() {
  const Prefix p({{Quantifier::Forall, {1}}, {Quantifier::Exists, {2}}});
  const auto e = count_strategies(p, Player::Existential);
  const auto a = count_strategies(p, Player::Universal);
  const auto es = enumerate_strategies(p, Player::Existential).size();
  const auto as = enumerate_strategies(p, Player::Universal).size();
  const bool ok = e.to_string() == "4" && a.to_string() == "2" && es == 4 && as == 2;
  return {ok, "existential " + e.to_string() + " (" + std::to_string(es) + " enumerated), universal " +
                  a.to_string() + " (" + std::to_string(as) + " enumerated)"};
}

Outcome common_paths() {
  oracle::Random rnd(108);
  Tally t;
  while (t.total < 1000) {
    const Prefix p = rnd.prefix(rnd.uniform(1, 8));
    const auto es = std::make_shared<const StrategyShape>(p, Player::Existential);
    const auto us = std::make_shared<const StrategyShape>(p, Player::Universal);
    if (es->label_count() > 62 || us->label_count() > 62) continue;
    auto draw = [&](const std::shared_ptr<const StrategyShape>& shape) {
      const auto bits = shape->label_count_small();
      const std::uint64_t mask = bits == 0 ? 0 : (~std::uint64_t{0} >> (64 - bits));
      return Strategy::from_index(shape, rnd.rng() & mask);
    };
    const Strategy s = draw(es), u = draw(us);
    const Assignment sigma = common_path(s, u);
    t.check(s.has_path(sigma) && u.has_path(sigma), "prefix " + p.to_string());
  }
  return t.outcome();
}

Outcome detection() {
  Tally t;
  oracle::Random rnd(109);
  int generators = 0;
  for (int i = 0; i < 300; ++i) {
    const QbfInstance q = normalized(rnd.instance(rnd.uniform(1, 6), rnd.uniform(0, 6)));
    const Detection d = detect_symmetries(q);
    bool sound = d.complete;
    for (const auto& g : d.generators) sound &= is_syntactic_symmetry(g, q);
    generators += int(d.generators.size());
    t.check(sound && oracle::close_group(d.generators, q.num_vars) == oracle::brute_force_symmetries(q),
            "small instance " + std::to_string(i));
  }
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto gen = planted(2000 + seed, 8 + int(seed % 9), 10 + int(seed % 11));
    const Detection d = detect_symmetries(gen.instance);
    bool sound = !d.generators.empty();
    for (const auto& g : d.generators) sound &= is_syntactic_symmetry(g, gen.instance);
    t.check(sound, "planted seed " + std::to_string(2000 + seed));
  }
  return t.outcome(std::to_string(generators) + " generators on small instances");
}

Outcome kbkf() {
  Tally t;
  std::string sizes;
  for (int n = 1; n <= 4; ++n) {
    const QbfInstance q = gen_kbkf(n);
    const std::string tag = "n=" + std::to_string(n);
    t.check(!qbf_truth(q), tag + " truth");
    t.check(!oracle::naive_truth(q), tag + " recursion");
    const Detection d = detect_symmetries(q);
    bool nontrivial = false;
    for (const auto& g : d.generators) nontrivial |= !g.is_identity();
    t.check(nontrivial, tag + " generators");
    sizes += (sizes.empty() ? "" : ",") + std::to_string(d.generators.size());
    if (d.generators.empty()) continue;
    const auto e = encode_existential_cnf(q.prefix, q.num_vars, d.generators);
    const auto aug = augment_instance(q, std::span(&e, 1), AugmentMode::ConjoinCnf);
    t.check(!qbf_truth(aug.instance, kWide), tag + " augmented");
    const Formula psi = lex_leader_formula(q.prefix, d.generators).formula();
    t.check(!qbf_truth(q.prefix, q.matrix_formula() && psi), tag + " formula-level");
  }
  return t.outcome("generators per n: " + sizes);
}

}  // namespace

int main() {
  const auto corpus = planted_corpus();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle agreement", oracle_agreement},
      {"truth invariance under admissible maps", truth_invariance},
      {"breakers preserve truth", [&] { return breaker_preservation(corpus); }},
      {"breaker polarity", [&] { return breaker_polarity(corpus); }},
      {"existential/universal duality", duality},
      {"orbits of forall x exists y z . y <-> z", example_orbits},
      {"strategy counts of forall x1 exists x2", strategy_counts},
      {"common path lies on both strategies", common_paths},
      {"detection soundness and completeness", detection},
      {"KBKF", kbkf},
  };
  int failures = 0;
  const auto suite_start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double limit = i == 0 ? 60.0 : 120.0;
    if (secs > limit) {
      o.pass = false;
      o.detail += "; over the " + std::to_string(int(limit)) + " s limit";
    }
    failures += !o.pass;
    std::printf("criterion %2zu %-40s %s (%s; %.2f s)\n", i + 1, criteria[i].first.c_str(),
                o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - suite_start).count();
  std::printf("%d/%zu criteria passed in %.2f s\n", int(criteria.size()) - failures, criteria.size(), total);
  return failures == 0 ? 0 : 1;
}

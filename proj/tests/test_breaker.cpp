#include <doctest.h>

#include "qsym/benchgen.hpp"
#include "qsym/breaker.hpp"
#include "qsym/error.hpp"
#include "qsym/qdimacs.hpp"
#include "support/oracles.hpp"

using namespace qsym;

namespace {

const Prefix kAxEyz({{Quantifier::Forall, {1}}, {Quantifier::Exists, {2, 3}}});
const std::vector<Var> kXyz{1, 2, 3};

SignedPermutation cyc(const char* text, Var degree = 3) { return parse_cycle_notation(text, degree); }

// Random instance with a random block-respecting permutation; the matrix is
// not required to be symmetric.
struct Case {
  QbfInstance q;
  std::vector<SignedPermutation> gens;
};

Case random_case(oracle::Random& rnd, int max_vars, int max_clauses) {
  Case c;
  const int n = rnd.uniform(1, max_vars);
  c.q = parse_qdimacs(serialize_qdimacs(rnd.instance(n, rnd.uniform(0, max_clauses))));
  for (int k = rnd.uniform(0, 2); k > 0; --k) c.gens.push_back(rnd.block_permutation(c.q.prefix, n));
  return c;
}

GeneratedQbf planted(std::uint64_t seed, int vars, int clauses) {
  RandomQbfOptions opts;
  opts.seed = seed;
  opts.vars = vars;
  opts.clauses = clauses;
  opts.planted = true;
  return gen_random_qbf(opts);
}

}  // namespace

TEST_CASE("lex-leader formula for a single swap") {
  const std::vector<SignedPermutation> gens{cyc("(2 3)")};
  const BreakerFormula psi = lex_leader_formula(kAxEyz, gens);
  REQUIRE(psi.conjuncts.size() == 1);
  CHECK(psi.conjuncts[0].size() == 2);  // one per existential variable
  const Formula y = Formula::var(2), z = Formula::var(3);
  CHECK(equivalent(psi.formula(), !y || z, kXyz));
  CHECK(equivalent(psi.formula(), Formula::implies(y, z) &&
                                      Formula::implies(Formula::iff(y, z), Formula::implies(z, y)),
                   kXyz));
}

TEST_CASE("swap and negation give not y") {
  const std::vector<SignedPermutation> gens{cyc("(2 3)"), cyc("(-2)(-3)")};
  const Formula psi = lex_leader_formula(kAxEyz, gens).formula();
  const Formula y = Formula::var(2), z = Formula::var(3);
  CHECK(equivalent(psi, !y && (!y || z), kXyz));
  CHECK(equivalent(psi, !y, kXyz));
}

TEST_CASE("empty generator set gives true") {
  const BreakerFormula psi = lex_leader_formula(kAxEyz, {});
  CHECK(psi.formula().is_true());
  CHECK(equivalent(universal_lex_leader_formula(kAxEyz, {}).formula(), Formula::bottom(), kXyz));
}

TEST_CASE("inadmissible generators are rejected") {
  const std::vector<SignedPermutation> bad{cyc("(1 2)")};
  CHECK_THROWS_AS(lex_leader_formula(kAxEyz, bad), ValidationError);
  CHECK_THROWS_AS(encode_existential_cnf(kAxEyz, 3, bad), ValidationError);
}

TEST_CASE("universal formula is the negated breaker of the flipped prefix") {
  const std::vector<SignedPermutation> gens{cyc("(2 3)")};
  const Formula flipped = lex_leader_formula(kAxEyz.flipped(), gens).formula();
  const BreakerFormula u = universal_lex_leader_formula(kAxEyz, gens);
  CHECK(u.polarity == Player::Universal);
  CHECK(structurally_equal(u.conjunction(), flipped));
  CHECK(equivalent(u.formula(), !flipped, kXyz));
}

TEST_CASE("chain encoding of a swap") {
  const std::vector<SignedPermutation> gens{cyc("(2 3)")};
  const EncodedBreaker plain = encode_existential_cnf(kAxEyz, 3, gens, {.compress_identity = false});
  CHECK(plain.clauses.size() == 7);
  CHECK(plain.aux.size() == 3);
  CHECK(plain.num_vars == 6);
  // y0 outermost, y1 after ∀x, y2 after the ∃ block
  CHECK(plain.aux[0].after_block == -1);
  CHECK(plain.aux[1].after_block == 0);
  CHECK(plain.aux[2].after_block == 1);
  CHECK(plain.extended ==
        Prefix({{Quantifier::Exists, {4}}, {Quantifier::Forall, {1}}, {Quantifier::Exists, {5, 2, 3, 6}}}));
  CHECK(std::count(plain.clauses.begin(), plain.clauses.end(), Clause{Literal(4)}) == 1);

  const EncodedBreaker packed = encode_existential_cnf(kAxEyz, 3, gens);
  CHECK(packed.aux.size() == 2);
  CHECK(packed.clauses.size() == 5);
}

TEST_CASE("identity generators encode to nothing") {
  const std::vector<SignedPermutation> id{SignedPermutation::identity(3)};
  for (bool compress : {true, false}) {
    const auto e = encode_existential_cnf(kAxEyz, 3, id, {.compress_identity = compress});
    CHECK(e.clauses.empty());
    CHECK(e.aux.empty());
    CHECK(e.extended == kAxEyz);
  }
  CHECK(encode_universal_dnf(kAxEyz, 3, {}).cubes.empty());
}

TEST_CASE("encoding is deterministic") {
  const auto gen = planted(3, 8, 10);
  const std::vector<SignedPermutation> gens{*gen.planted, *gen.planted * *gen.planted};
  const auto a = encode_existential_cnf(gen.instance.prefix, 8, gens, {.selection = {Selection::Policy::FullGroup}});
  const auto b = encode_existential_cnf(gen.instance.prefix, 8, gens, {.selection = {Selection::Policy::FullGroup}});
  CHECK(a.clauses == b.clauses);
  CHECK(a.extended == b.extended);
}

TEST_CASE("Tseitin encodings are equisatisfiable with the formula") {
  oracle::Random rnd(51);
  for (int round = 0; round < 300; ++round) {
    const Case c = random_case(rnd, 6, 6);
    const Formula phi = c.q.matrix_formula();
    const bool compress = rnd.coin();
    const EncodeOptions opts{.compress_identity = compress};

    const auto e = encode_existential_cnf(c.q.prefix, c.q.num_vars, c.gens, opts);
    const auto psi_e = lex_leader_formula(c.q.prefix, c.gens).formula();
    const auto ae = augment_instance(c.q, std::span(&e, 1), AugmentMode::ConjoinCnf);
    REQUIRE(qbf_truth(ae.instance) == qbf_truth(c.q.prefix, phi && psi_e));

    const auto u = encode_universal_dnf(c.q.prefix, c.q.num_vars, c.gens, opts);
    const auto psi_a = universal_lex_leader_formula(c.q.prefix, c.gens).formula();
    const auto au = augment_instance(c.q, std::span(&u, 1), AugmentMode::AttachDnf);
    REQUIRE(qbf_truth(au.instance, *au.cubes) == qbf_truth(c.q.prefix, phi || psi_a));
  }
}

TEST_CASE("cube encoding mirrors the clause encoding of the flipped prefix") {
  oracle::Random rnd(52);
  for (int round = 0; round < 100; ++round) {
    const Case c = random_case(rnd, 8, 4);
    const auto u = encode_universal_dnf(c.q.prefix, c.q.num_vars, c.gens);
    const auto e = encode_existential_cnf(c.q.prefix.flipped(), c.q.num_vars, c.gens);
    REQUIRE(u.cubes.size() == e.clauses.size());
    for (std::size_t i = 0; i < u.cubes.size(); ++i)
      for (std::size_t k = 0; k < u.cubes[i].size(); ++k) CHECK(u.cubes[i][k] == -e.clauses[i][k]);
    for (const auto& a : u.aux) CHECK(a.quantifier == Quantifier::Forall);
    CHECK(u.extended.flipped() == e.extended);
  }
}

TEST_CASE("breakers preserve truth on symmetric instances") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto gen = planted(seed, 6 + int(seed % 5), 6 + int(seed % 7));
    const QbfInstance& q = gen.instance;
    const std::vector<SignedPermutation> gens{*gen.planted};
    const bool truth = qbf_truth(q);
    const Formula phi = q.matrix_formula();
    const Formula psi_e = lex_leader_formula(q.prefix, gens).formula();
    const Formula psi_a = universal_lex_leader_formula(q.prefix, gens).formula();
    CHECK(qbf_truth(q.prefix, phi && psi_e) == truth);
    CHECK(qbf_truth(q.prefix, phi || psi_a) == truth);
    CHECK(qbf_truth(q.prefix, (phi || psi_a) && psi_e) == truth);

    std::vector<EncodedBreaker> both{encode_existential_cnf(q.prefix, q.num_vars, gens)};
    both.push_back(encode_universal_dnf(q.prefix, q.num_vars, gens, {.first_aux = both[0].num_vars + 1}));
    const auto aug = augment_instance(q, both, AugmentMode::Combined);
    CHECK(qbf_truth(aug.instance, *aug.cubes, {.max_vars = 64}) == truth);
  }
}

TEST_CASE("breaker polarity") {
  oracle::Random rnd(53);
  for (int round = 0; round < 200; ++round) {
    const Case c = random_case(rnd, 8, 1);
    CHECK(qbf_truth(c.q.prefix, lex_leader_formula(c.q.prefix, c.gens).formula()));
    CHECK_FALSE(qbf_truth(c.q.prefix, universal_lex_leader_formula(c.q.prefix, c.gens).formula()));
  }
}

TEST_CASE("orbit coverage for the swap and negation example") {
  const std::vector<SignedPermutation> gens{cyc("(2 3)"), cyc("(-2)(-3)")};
  const auto not_y = verify_breaker(kAxEyz, gens, !Formula::var(2));
  CHECK(not_y.orbits == 4);
  CHECK(not_y.passed());
  CHECK(verify_breaker(kAxEyz, gens, Formula::top()).passed());
  const auto y_and_z = verify_breaker(kAxEyz, gens, Formula::var(2) && !Formula::var(3));
  CHECK_FALSE(y_and_z.passed());
  CHECK(verify_breaker(kAxEyz, gens, lex_leader_formula(kAxEyz, gens).formula()).passed());
}

TEST_CASE("generated breakers and their sub-conjunctions cover every orbit") {
  oracle::Random rnd(54);
  int checked = 0;
  for (int round = 0; round < 150; ++round) {
    const Case c = random_case(rnd, 5, 1);
    const Prefix& p = c.q.prefix;
    if (!count_strategies(p, Player::Existential).at_most(1u << 10) ||
        !count_strategies(p, Player::Universal).at_most(1u << 10))
      continue;
    ++checked;
    const BreakerFormula psi = lex_leader_formula(p, c.gens);
    CHECK(verify_breaker(p, c.gens, psi.formula()).passed());
    CHECK(verify_universal_breaker(p, c.gens, universal_lex_leader_formula(p, c.gens).formula()).passed());
    std::vector<Formula> some;
    for (const auto& per : psi.conjuncts)
      for (const auto& f : per)
        if (rnd.coin()) some.push_back(f);
    CHECK(verify_breaker(p, c.gens, Formula::conj(some)).passed());
  }
  CHECK(checked > 50);
}

TEST_CASE("element selection") {
  const std::vector<SignedPermutation> gens{cyc("(2 3)"), cyc("(-2)(-3)"), cyc("(2 3)")};
  CHECK(select_elements(gens).size() == 2);
  const auto products = select_elements(gens, {Selection::Policy::Products, 2});
  CHECK(products.size() == 3);
  const auto full = select_elements(gens, {Selection::Policy::FullGroup});
  CHECK(full.size() == 3);
  for (const auto& g : full) CHECK_FALSE(g.is_identity());
  CHECK(verify_breaker(kAxEyz, gens, lex_leader_formula(kAxEyz, gens, {Selection::Policy::FullGroup}).formula())
            .passed());
  CHECK_THROWS_AS(select_elements(gens, {Selection::Policy::FullGroup, 1, 2}), SizeError);
}

TEST_CASE("augmentation checks its inputs") {
  const QbfInstance q = parse_qdimacs("p cnf 3 1\na 1 0\ne 2 3 0\n2 3 0\n");
  const std::vector<SignedPermutation> gens{cyc("(2 3)")};
  const auto e = encode_existential_cnf(q.prefix, 3, gens);
  const auto u = encode_universal_dnf(q.prefix, 3, gens);
  CHECK_THROWS_AS(augment_instance(q, std::span(&e, 1), AugmentMode::AttachDnf), ValidationError);
  const QbfInstance pairs = parse_qdimacs("p cnf 4 1\na 1 2 0\ne 3 4 0\n3 4 0\n");
  const std::vector<SignedPermutation> swap{parse_cycle_notation("(1 2)(3 4)", 4)};
  const std::vector<EncodedBreaker> clash{encode_existential_cnf(pairs.prefix, 4, swap),
                                          encode_universal_dnf(pairs.prefix, 4, swap)};
  REQUIRE_FALSE(clash[0].aux.empty());
  REQUIRE_FALSE(clash[1].aux.empty());  // both start at id 5
  CHECK_THROWS_AS(augment_instance(pairs, clash, AugmentMode::Combined), ValidationError);

  const QbfInstance other = parse_qdimacs("p cnf 3 1\ne 1 2 3 0\n2 3 0\n");
  CHECK_THROWS_AS(augment_instance(other, std::span(&e, 1), AugmentMode::ConjoinCnf), ValidationError);

  const auto ok = augment_instance(q, std::span(&e, 1), AugmentMode::ConjoinCnf);
  CHECK(ok.instance.matrix.size() == 1 + e.clauses.size());
  CHECK(ok.dnf().empty());
  const auto back = parse_qdimacs(ok.qdimacs());
  CHECK(back.structurally_equal(ok.instance));
}

#include <doctest.h>

#include "qsym/error.hpp"
#include "qsym/formula.hpp"
#include "qsym/kernels.hpp"
#include "support/oracles.hpp"

using namespace qsym;

namespace {
const Formula x = Formula::var(1), y = Formula::var(2), a = Formula::var(3), b = Formula::var(4);

Assignment assign(std::initializer_list<std::pair<Var, bool>> values) {
  Assignment s;
  for (auto [v, t] : values) s.set(v, t);
  return s;
}
}  // namespace

TEST_CASE("evaluate follows the connective tables") {
  CHECK(evaluate(Formula::iff(x, y), assign({{1, true}, {2, true}})));
  CHECK(evaluate(Formula::bottom() || Formula::top(), Assignment{}));
  const Formula phi = Formula::iff(x, a) && Formula::iff(y, b);
  CHECK_FALSE(evaluate(phi, assign({{1, true}, {2, false}, {3, true}, {4, true}})));
  CHECK(evaluate(Formula::implies(x, y), assign({{1, false}, {2, false}})));
  CHECK_FALSE(evaluate(Formula::exclusive_or(x, y), assign({{1, true}, {2, true}})));
  CHECK(evaluate(Formula::conj({}), Assignment{}));
  CHECK_FALSE(evaluate(Formula::disj({}), Assignment{}));
}

TEST_CASE("evaluate reports unbound variables") {
  CHECK_THROWS_AS(evaluate(x && y, assign({{1, true}})), MissingAssignmentError);
  // no short-circuit hides a missing variable
  CHECK_THROWS_AS(evaluate(x && y, assign({{1, false}})), MissingAssignmentError);
  CHECK_THROWS_AS(assign({{1, true}}).get(2), MissingAssignmentError);
}

TEST_CASE("evaluate_partial decides only when forced") {
  CHECK(evaluate_partial(x || y, assign({{1, true}})) == std::optional<bool>(true));
  CHECK_FALSE(evaluate_partial(x && y, assign({{1, true}})).has_value());
  CHECK(evaluate_partial(x && y, assign({{2, false}})) == std::optional<bool>(false));
}

TEST_CASE("substitute removes the assigned variables") {
  const Formula s = substitute(Formula::iff(x, y), assign({{1, true}}));
  CHECK(equivalent(s, y, std::vector<Var>{2}));
  CHECK(variables(s) == std::vector<Var>{2});

  const Formula phi = Formula::iff(x, a);
  CHECK(structurally_equal(substitute(phi, Assignment{}), phi));

  const Formula z = Formula::var(3);
  const Formula cnf = (x || y) && (!x || z);
  const Formula r = substitute(cnf, assign({{1, false}}));
  CHECK(equivalent(r, y, std::vector<Var>{2, 3}));
  CHECK(variables(r) == std::vector<Var>{2});
}

TEST_CASE("equivalent compares truth tables") {
  CHECK(equivalent(x && y, y && x, std::vector<Var>{1, 2}));
  CHECK_FALSE(equivalent(x, !x, std::vector<Var>{1}));
  CHECK_THROWS_AS(equivalent(x, x, std::vector<Var>{1}, {.max_vars = 0}), SizeError);
  CHECK_THROWS_AS(equivalent(x, y, std::vector<Var>{1}), MissingAssignmentError);
}

TEST_CASE("xor map preserves (x<->a) & (y<->b)") {
  const Formula phi = Formula::iff(x, a) && Formula::iff(y, b);
  const Formula image = rename(phi, [](Var v) {
    switch (v) {
      case 2: return Formula::exclusive_or(Formula::var(1), Formula::var(2));
      case 4: return Formula::exclusive_or(Formula::var(3), Formula::var(4));
      default: return Formula::var(v);
    }
  });
  CHECK(equivalent(image, phi, std::vector<Var>{1, 2, 3, 4}));
  for (bool parallel : {false, true})
    CHECK(equivalent(image, phi, std::vector<Var>{1, 2, 3, 4}, {.max_vars = 20, .parallel = parallel}));
}

TEST_CASE("substitute then evaluate agrees with evaluate on the extension") {
  oracle::Random rnd(1);
  for (int round = 0; round < 1000; ++round) {
    const int n = rnd.uniform(1, 12);
    const Formula f = rnd.formula(n, 5);
    Assignment total, partial, rest;
    for (Var v = 1; v <= n; ++v) {
      const bool value = rnd.coin();
      total.set(v, value);
      (rnd.coin() ? partial : rest).set(v, value);
    }
    const Formula s = substitute(f, partial);
    for (Var v : variables(s)) REQUIRE_FALSE(partial.has(v));
    REQUIRE(evaluate(s, rest) == evaluate(f, total));
  }
}

TEST_CASE("equivalence is an equivalence relation") {
  oracle::Random rnd(2);
  const std::vector<Var> vars{1, 2, 3, 4};
  for (int round = 0; round < 200; ++round) {
    const Formula f = rnd.formula(4, 3), g = rnd.formula(4, 3), h = rnd.formula(4, 3);
    CHECK(equivalent(f, f, vars));
    CHECK(equivalent(f, g, vars) == equivalent(g, f, vars));
    if (equivalent(f, g, vars) && equivalent(g, h, vars)) CHECK(equivalent(f, h, vars));
  }
}

TEST_CASE("De Morgan holds on every assignment") {
  oracle::Random rnd(3);
  const std::vector<Var> vars{1, 2, 3, 4, 5};
  for (int round = 0; round < 50; ++round) {
    const Formula f = rnd.formula(5, 3), g = rnd.formula(5, 3);
    for (std::uint64_t bits = 0; bits < 32; ++bits) {
      const Assignment s = oracle::from_bits(vars, bits);
      CHECK(evaluate(!(f && g), s) == evaluate(!f || !g, s));
      CHECK(evaluate(!(f || g), s) == evaluate(!f && !g, s));
    }
  }
}

TEST_CASE("compiled formulas match the tree evaluator") {
  oracle::Random rnd(4);
  const std::vector<Var> vars{1, 2, 3, 4, 5, 6};
  for (int round = 0; round < 100; ++round) {
    const Formula f = rnd.formula(6, 5);
    const kernels::CompiledFormula c(f);
    for (std::uint64_t bits = 0; bits < 64; ++bits)
      REQUIRE(c.evaluate_mask(bits) == evaluate(f, oracle::from_bits(vars, bits)));
  }
}

TEST_CASE("serial and parallel equivalence kernels agree") {
  oracle::Random rnd(5);
  for (int round = 0; round < 200; ++round) {
    const int n = rnd.uniform(1, 9);
    std::vector<Var> vars;
    for (Var v = 1; v <= n; ++v) vars.push_back(v);
    const Formula f = rnd.formula(n, 3);
    const Formula g = rnd.coin() ? rnd.formula(n, 3) : !!f;
    CHECK(kernels::equivalent_serial(f, g, vars) == kernels::equivalent_parallel(f, g, vars));
  }
}

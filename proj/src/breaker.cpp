#include "qsym/breaker.hpp"

#include <algorithm>
#include <set>

#include "qsym/error.hpp"
#include "qsym/qdimacs.hpp"

namespace qsym {
namespace {

void require_admissible(const Prefix& prefix, std::span<const SignedPermutation> generators) {
  for (const auto& g : generators)
    if (!is_block_respecting(g, prefix))
      throw ValidationError("generator " + to_cycle_notation(g) +
                            " does not respect the quantifier blocks");
}

}  // namespace

std::vector<SignedPermutation> select_elements(std::span<const SignedPermutation> generators,
                                               const Selection& selection) {
  Var degree = 0;
  for (const auto& g : generators) degree = std::max(degree, g.degree());
  std::vector<SignedPermutation> gens;
  for (const auto& g : generators) gens.push_back(g.extended(degree));

  std::vector<SignedPermutation> out;
  std::set<SignedPermutation> seen;
  auto keep = [&](const SignedPermutation& g) {
    if (g.is_identity() || !seen.insert(g).second) return;
    out.push_back(g);
    if (selection.policy != Selection::Policy::Generators && out.size() > selection.group_cap)
      throw SizeError("element selection exceeds " + std::to_string(selection.group_cap) +
                      " elements");
  };

  switch (selection.policy) {
    case Selection::Policy::Generators:
      for (const auto& g : gens) keep(g);
      break;
    case Selection::Policy::Products: {
      std::vector<SignedPermutation> level = gens;
      std::set<SignedPermutation> level_seen(level.begin(), level.end());
      for (std::size_t length = 1; length <= selection.max_length && !level.empty(); ++length) {
        for (const auto& g : level) keep(g);
        if (length == selection.max_length) break;
        std::vector<SignedPermutation> next;
        std::set<SignedPermutation> next_seen;
        for (const auto& w : level)
          for (const auto& g : gens) {
            SignedPermutation p = w * g;
            if (next_seen.insert(p).second) next.push_back(std::move(p));
          }
        level = std::move(next);
      }
      break;
    }
    case Selection::Policy::FullGroup:
      for (const auto& g : group_closure(gens, selection.group_cap + 1)) keep(g);
      break;
  }
  return out;
}

// ---- formula ----

Formula BreakerFormula::conjunction() const {
  std::vector<Formula> all;
  for (const auto& per_element : conjuncts) all.insert(all.end(), per_element.begin(), per_element.end());
  return Formula::conj(std::move(all));
}

Formula BreakerFormula::formula() const {
  return polarity == Player::Existential ? conjunction() : Formula::negation(conjunction());
}

namespace {

BreakerFormula build_lex_leader(const Prefix& prefix, const Prefix& quantifiers,
                                std::span<const SignedPermutation> generators,
                                const Selection& selection, Player polarity) {
  require_admissible(prefix, generators);
  BreakerFormula out;
  out.polarity = polarity;
  out.prefix = prefix;
  out.elements = select_elements(generators, selection);
  const auto order = quantifiers.order();
  for (const auto& g : out.elements) {
    std::vector<Formula> per_element;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (quantifiers.quantifier_of(order[i]) != Quantifier::Exists) continue;
      std::vector<Formula> equal;
      for (std::size_t j = 0; j < i; ++j)
        equal.push_back(Formula::iff(Formula::var(order[j]), Formula::literal(g.image(order[j]))));
      const Formula step =
          Formula::implies(Formula::var(order[i]), Formula::literal(g.image(order[i])));
      per_element.push_back(Formula::implies(Formula::conj(std::move(equal)), step));
    }
    out.conjuncts.push_back(std::move(per_element));
  }
  return out;
}

}  // namespace

BreakerFormula lex_leader_formula(const Prefix& prefix,
                                  std::span<const SignedPermutation> generators,
                                  const Selection& selection) {
  return build_lex_leader(prefix, prefix, generators, selection, Player::Existential);
}

BreakerFormula universal_lex_leader_formula(const Prefix& prefix,
                                            std::span<const SignedPermutation> generators,
                                            const Selection& selection) {
  return build_lex_leader(prefix, prefix.flipped(), generators, selection, Player::Universal);
}

// ---- Tseitin encoding ----

namespace {

struct ElementEncoding {
  std::vector<Clause> clauses;       // aux literals use ids 1..aux_count shifted by `base`
  std::vector<AuxVariable> aux;      // var holds the local index 0..aux_count-1
};

// Local aux index k is written as the literal of variable (base + k); `base`
// lies above every formula variable so local and final numbering never mix.
ElementEncoding encode_element(const Prefix& prefix, const SignedPermutation& g,
                               bool compress, Var base) {
  ElementEncoding out;
  const auto order = prefix.order();
  std::vector<std::size_t> chain;
  for (std::size_t i = 0; i < order.size(); ++i)
    if (!compress || g.image(order[i]) != Literal::positive(order[i])) chain.push_back(i);

  // last existential position with a non-trivial I clause
  std::ptrdiff_t last = -1;
  for (std::size_t t = 0; t < chain.size(); ++t) {
    const Var x = order[chain[t]];
    if (prefix.quantifier_of(x) == Quantifier::Exists && g.image(x) != Literal::positive(x))
      last = std::ptrdiff_t(t);
  }
  if (last < 0) return out;
  chain.resize(std::size_t(last) + 1);

  auto y = [&](std::size_t t) { return Literal::positive(base + Var(t)); };
  auto add = [&](Clause c) {
    if (auto n = normalize_clause(c)) out.clauses.push_back(std::move(*n));
  };

  out.aux.push_back({0, Quantifier::Exists, -1, 0, 0});
  add({y(0)});
  for (std::size_t t = 0; t < chain.size(); ++t) {
    const Var x = order[chain[t]];
    const Literal xl = Literal::positive(x);
    const Literal gx = g.image(x);
    const bool exists = prefix.quantifier_of(x) == Quantifier::Exists;
    if (exists) add({-y(t), -xl, gx});
    if (t + 1 == chain.size()) break;
    out.aux.push_back({Var(t + 1), Quantifier::Exists, prefix.block_of(x), 0, int(t + 1)});
    if (exists) {
      add({y(t + 1), -y(t), -xl});
      add({y(t + 1), -y(t), gx});
    } else {
      add({y(t + 1), -y(t), -xl, -gx});
      add({y(t + 1), -y(t), xl, gx});
    }
  }
  return out;
}

Prefix extend_prefix(const Prefix& prefix, std::span<const AuxVariable> aux) {
  Prefix out;
  auto place = [&](int after) {
    for (const auto& a : aux)
      if (a.after_block == after && a.quantifier == Quantifier::Exists) out.append(a.quantifier, a.var);
    for (const auto& a : aux)
      if (a.after_block == after && a.quantifier == Quantifier::Forall) out.append(a.quantifier, a.var);
  };
  place(-1);
  for (std::size_t b = 0; b < prefix.block_count(); ++b) {
    for (Var v : prefix.blocks()[b].variables) out.append(prefix.blocks()[b].quantifier, v);
    place(int(b));
  }
  return out;
}

EncodedBreaker encode(const Prefix& prefix, Var num_vars,
                      std::span<const SignedPermutation> generators, const EncodeOptions& options) {
  require_admissible(prefix, generators);
  EncodedBreaker out;
  out.original = prefix;
  out.elements = select_elements(generators, options.selection);

  Var top = std::max(num_vars, prefix.max_var());
  for (const auto& g : out.elements) top = std::max(top, g.degree());
  const Var first = options.first_aux == 0 ? top + 1 : options.first_aux;
  if (first <= prefix.max_var() || first <= num_vars)
    throw ValidationError("auxiliary ids must start above the formula variables");
  const Var base = std::max(first, top + 1);  // scratch ids, remapped below

  const auto count = static_cast<long long>(out.elements.size());
  std::vector<ElementEncoding> parts(out.elements.size());
#pragma omp parallel for schedule(dynamic)
  for (long long e = 0; e < count; ++e)
    parts[e] = encode_element(prefix, out.elements[e], options.compress_identity, base);

  std::set<Clause> seen;
  Var next = first;
  for (std::size_t e = 0; e < parts.size(); ++e) {
    const Var offset = next;
    for (auto a : parts[e].aux) {
      a.var = offset + a.var;
      a.element = e;
      out.aux.push_back(a);
    }
    next += Var(parts[e].aux.size());
    for (Clause c : parts[e].clauses) {
      for (Literal& l : c)
        if (l.var() >= base) l = Literal::of(l.var() - base + offset, l.is_negative());
      if (seen.insert(sorted_literals(c)).second) out.clauses.push_back(std::move(c));
    }
  }
  out.num_vars = std::max(num_vars, next - 1);
  out.extended = extend_prefix(prefix, out.aux);
  return out;
}

}  // namespace

EncodedBreaker encode_existential_cnf(const Prefix& prefix, Var num_vars,
                                      std::span<const SignedPermutation> generators,
                                      const EncodeOptions& options) {
  return encode(prefix, num_vars, generators, options);
}

EncodedBreaker encode_universal_dnf(const Prefix& prefix, Var num_vars,
                                    std::span<const SignedPermutation> generators,
                                    const EncodeOptions& options) {
  EncodedBreaker out = encode(prefix.flipped(), num_vars, generators, options);
  out.polarity = Player::Universal;
  out.original = prefix;
  for (auto& a : out.aux) a.quantifier = Quantifier::Forall;
  out.extended = extend_prefix(prefix, out.aux);
  for (const auto& clause : out.clauses) {
    Cube cube;
    for (Literal l : clause) cube.push_back(-l);
    out.cubes.push_back(std::move(cube));
  }
  out.clauses.clear();
  return out;
}

// ---- augmentation ----

std::string AugmentedInstance::qdimacs() const { return serialize_qdimacs(instance); }

std::string AugmentedInstance::dnf() const {
  if (!cubes) return {};
  return serialize_dnf(instance.prefix, *cubes, instance.num_vars);
}

AugmentedInstance augment_instance(const QbfInstance& instance,
                                   std::span<const EncodedBreaker> encodings, AugmentMode mode) {
  const EncodedBreaker* exists = nullptr;
  const EncodedBreaker* forall = nullptr;
  for (const auto& e : encodings) {
    if (!(e.original == instance.prefix))
      throw ValidationError("breaker was encoded for a different prefix");
    (e.polarity == Player::Existential ? exists : forall) = &e;
  }
  const std::size_t expected = mode == AugmentMode::Combined ? 2 : 1;
  const bool shape_ok = encodings.size() == expected &&
                        (mode != AugmentMode::ConjoinCnf || exists) &&
                        (mode != AugmentMode::AttachDnf || forall) &&
                        (mode != AugmentMode::Combined || (exists && forall));
  if (!shape_ok) throw ValidationError("augmentation mode does not match the encodings given");

  std::vector<AuxVariable> aux;
  std::set<Var> ids;
  for (const auto& e : encodings)
    for (const auto& a : e.aux) {
      if (a.var <= instance.num_vars || instance.prefix.contains(a.var) || !ids.insert(a.var).second)
        throw ValidationError("auxiliary variable " + std::to_string(a.var) + " clashes");
      aux.push_back(a);
    }

  AugmentedInstance out;
  out.instance = instance;
  out.instance.prefix = extend_prefix(instance.prefix, aux);
  for (const auto& e : encodings) out.instance.num_vars = std::max(out.instance.num_vars, e.num_vars);
  if (exists)
    out.instance.matrix.insert(out.instance.matrix.end(), exists->clauses.begin(),
                               exists->clauses.end());
  if (forall) out.cubes = forall->cubes;
  return out;
}

// ---- verification ----

namespace {

BreakerReport cover(const Prefix& prefix, std::span<const SignedPermutation> generators,
                    const Formula& psi, Player role, const OrbitOptions& options) {
  const OrbitPartition partition = semantic_orbits(prefix, generators, role, options);
  const bool wanted = role == Player::Existential;
  BreakerReport report;
  report.orbits = partition.orbits.size();
  for (std::size_t o = 0; o < partition.orbits.size(); ++o) {
    const bool hit = std::any_of(
        partition.orbits[o].begin(), partition.orbits[o].end(), [&](std::size_t s) {
          return strategy_value(prefix, psi, partition.strategies[s]) == wanted;
        });
    if (hit) ++report.covered;
    else report.uncovered.push_back(o);
  }
  return report;
}

}  // namespace

BreakerReport verify_breaker(const Prefix& prefix, std::span<const SignedPermutation> generators,
                             const Formula& psi, const OrbitOptions& options) {
  return cover(prefix, generators, psi, Player::Existential, options);
}

BreakerReport verify_universal_breaker(const Prefix& prefix,
                                       std::span<const SignedPermutation> generators,
                                       const Formula& psi, const OrbitOptions& options) {
  return cover(prefix, generators, psi, Player::Universal, options);
}

}  // namespace qsym

#include "qsym/formula.hpp"

#include <algorithm>
#include <sstream>

#include "qsym/error.hpp"
#include "qsym/kernels.hpp"

namespace qsym {

// ---- Assignment ----

Assignment Assignment::from_mask(Var num_vars, std::uint64_t mask) {
  if (num_vars > 64) throw SizeError("packed assignments hold at most 64 variables");
  Assignment a;
  a.values_.assign(static_cast<std::size_t>(num_vars) + 1, -1);
  for (Var v = 1; v <= num_vars; ++v) a.values_[v] = (mask >> (v - 1)) & 1u;
  return a;
}

void Assignment::set(Var v, bool value) {
  if (v < 1) throw ValidationError("variable ids start at 1");
  if (static_cast<std::size_t>(v) >= values_.size()) values_.resize(v + 1, -1);
  values_[v] = value ? 1 : 0;
}

void Assignment::unset(Var v) {
  if (has(v)) values_[v] = -1;
}

bool Assignment::get(Var v) const {
  if (!has(v)) throw MissingAssignmentError(v);
  return values_[v] == 1;
}

std::vector<Var> Assignment::domain() const {
  std::vector<Var> out;
  for (std::size_t v = 1; v < values_.size(); ++v)
    if (values_[v] >= 0) out.push_back(Var(v));
  return out;
}

std::size_t Assignment::size() const {
  return std::count_if(values_.begin(), values_.end(), [](auto x) { return x >= 0; });
}

std::uint64_t Assignment::to_mask() const {
  std::uint64_t mask = 0;
  for (std::size_t v = 1; v < values_.size() && v <= 64; ++v)
    if (values_[v] == 1) mask |= std::uint64_t{1} << (v - 1);
  return mask;
}

bool operator==(const Assignment& a, const Assignment& b) {
  const std::size_t n = std::max(a.values_.size(), b.values_.size());
  for (std::size_t v = 1; v < n; ++v) {
    const int x = v < a.values_.size() ? a.values_[v] : -1;
    const int y = v < b.values_.size() ? b.values_[v] : -1;
    if (x != y) return false;
  }
  return true;
}

std::string Assignment::to_string() const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (std::size_t v = 1; v < values_.size(); ++v) {
    if (values_[v] < 0) continue;
    if (!first) out << ", ";
    first = false;
    out << 'x' << v << '=' << (values_[v] ? 'T' : 'F');
  }
  out << '}';
  return out.str();
}

// ---- Formula ----

struct Formula::Node {
  Connective kind;
  Var var = 0;
  std::vector<Formula> children;
};

Formula Formula::make(Connective kind, Var v, std::vector<Formula> children) {
  return Formula(std::make_shared<const Node>(Node{kind, v, std::move(children)}));
}

Formula::Formula() : Formula(top()) {}

Formula Formula::top() {
  static const std::shared_ptr<const Node> node =
      std::make_shared<const Node>(Node{Connective::True, 0, {}});
  return Formula(node);
}

Formula Formula::bottom() {
  static const std::shared_ptr<const Node> node =
      std::make_shared<const Node>(Node{Connective::False, 0, {}});
  return Formula(node);
}

Formula Formula::var(Var v) {
  if (v < 1) throw ValidationError("variable ids start at 1");
  return make(Connective::Variable, v, {});
}

Formula Formula::literal(Literal lit) {
  Formula f = var(lit.var());
  return lit.is_negative() ? negation(f) : f;
}

Formula Formula::negation(Formula f) { return make(Connective::Not, 0, {std::move(f)}); }

Formula Formula::conj(std::vector<Formula> children) {
  if (children.empty()) return top();
  if (children.size() == 1) return children.front();
  return make(Connective::And, 0, std::move(children));
}

Formula Formula::disj(std::vector<Formula> children) {
  if (children.empty()) return bottom();
  if (children.size() == 1) return children.front();
  return make(Connective::Or, 0, std::move(children));
}

Formula Formula::iff(Formula a, Formula b) {
  return make(Connective::Iff, 0, {std::move(a), std::move(b)});
}

Formula Formula::implies(Formula a, Formula b) {
  return make(Connective::Implies, 0, {std::move(a), std::move(b)});
}

Formula Formula::exclusive_or(Formula a, Formula b) {
  return make(Connective::Xor, 0, {std::move(a), std::move(b)});
}

Formula Formula::from_clauses(std::span<const std::vector<Literal>> clauses) {
  std::vector<Formula> conjuncts;
  conjuncts.reserve(clauses.size());
  for (const auto& clause : clauses) {
    std::vector<Formula> lits;
    for (Literal l : clause) lits.push_back(literal(l));
    conjuncts.push_back(disj(std::move(lits)));
  }
  return conj(std::move(conjuncts));
}

Formula Formula::from_cubes(std::span<const std::vector<Literal>> cubes) {
  std::vector<Formula> disjuncts;
  disjuncts.reserve(cubes.size());
  for (const auto& cube : cubes) {
    std::vector<Formula> lits;
    for (Literal l : cube) lits.push_back(literal(l));
    disjuncts.push_back(conj(std::move(lits)));
  }
  return disj(std::move(disjuncts));
}

Connective Formula::kind() const { return node_->kind; }
Var Formula::variable() const { return node_->var; }
std::span<const Formula> Formula::children() const { return node_->children; }

std::size_t Formula::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.node_count();
  return n;
}

std::string Formula::to_string() const {
  switch (kind()) {
    case Connective::True: return "T";
    case Connective::False: return "F";
    case Connective::Variable: return "x" + std::to_string(variable());
    case Connective::Not: return "~" + children()[0].to_string();
    default: break;
  }
  const char* op = " & ";
  switch (kind()) {
    case Connective::Or: op = " | "; break;
    case Connective::Iff: op = " <-> "; break;
    case Connective::Implies: op = " -> "; break;
    case Connective::Xor: op = " ^ "; break;
    default: break;
  }
  std::string out = "(";
  bool first = true;
  for (const auto& c : children()) {
    if (!first) out += op;
    first = false;
    out += c.to_string();
  }
  return out + ")";
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.variable() != b.variable()) return false;
  auto ca = a.children();
  auto cb = b.children();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!structurally_equal(ca[i], cb[i])) return false;
  return true;
}

// ---- evaluation ----

bool evaluate(const Formula& f, const Assignment& assignment) {
  auto c = f.children();
  switch (f.kind()) {
    case Connective::True: return true;
    case Connective::False: return false;
    case Connective::Variable: return assignment.get(f.variable());
    case Connective::Not: return !evaluate(c[0], assignment);
    // no short-circuiting: every variable must be bound, even in branches
    // that do not decide the value
    case Connective::And: {
      bool value = true;
      for (const auto& child : c) value = evaluate(child, assignment) && value;
      return value;
    }
    case Connective::Or: {
      bool value = false;
      for (const auto& child : c) value = evaluate(child, assignment) || value;
      return value;
    }
    case Connective::Iff: return evaluate(c[0], assignment) == evaluate(c[1], assignment);
    case Connective::Implies: {
      const bool a = evaluate(c[0], assignment);
      return evaluate(c[1], assignment) || !a;
    }
    case Connective::Xor: return evaluate(c[0], assignment) != evaluate(c[1], assignment);
  }
  return false;
}

std::optional<bool> evaluate_partial(const Formula& f, const Assignment& assignment) {
  auto c = f.children();
  switch (f.kind()) {
    case Connective::True: return true;
    case Connective::False: return false;
    case Connective::Variable:
      if (!assignment.has(f.variable())) return std::nullopt;
      return assignment.get(f.variable());
    case Connective::Not: {
      auto v = evaluate_partial(c[0], assignment);
      if (!v) return std::nullopt;
      return !*v;
    }
    case Connective::And: {
      bool unknown = false;
      for (const auto& child : c) {
        auto v = evaluate_partial(child, assignment);
        if (!v) unknown = true;
        else if (!*v) return false;
      }
      if (unknown) return std::nullopt;
      return true;
    }
    case Connective::Or: {
      bool unknown = false;
      for (const auto& child : c) {
        auto v = evaluate_partial(child, assignment);
        if (!v) unknown = true;
        else if (*v) return true;
      }
      if (unknown) return std::nullopt;
      return false;
    }
    case Connective::Implies: {
      auto a = evaluate_partial(c[0], assignment);
      if (a && !*a) return true;
      auto b = evaluate_partial(c[1], assignment);
      if (b && *b) return true;
      if (a && b) return false;
      return std::nullopt;
    }
    case Connective::Iff:
    case Connective::Xor: {
      auto a = evaluate_partial(c[0], assignment);
      if (!a) return std::nullopt;
      auto b = evaluate_partial(c[1], assignment);
      if (!b) return std::nullopt;
      return f.kind() == Connective::Iff ? *a == *b : *a != *b;
    }
  }
  return std::nullopt;
}

// ---- substitution ----

namespace {

Formula fold_not(Formula a) {
  if (a.is_true()) return Formula::bottom();
  if (a.is_false()) return Formula::top();
  if (a.kind() == Connective::Not) return a.children()[0];
  return Formula::negation(std::move(a));
}

Formula fold(const Formula& f, const Assignment& partial) {
  auto c = f.children();
  switch (f.kind()) {
    case Connective::True:
    case Connective::False: return f;
    case Connective::Variable:
      return partial.has(f.variable()) ? Formula::constant(partial.get(f.variable())) : f;
    case Connective::Not: return fold_not(fold(c[0], partial));
    case Connective::And:
    case Connective::Or: {
      const bool is_and = f.kind() == Connective::And;
      std::vector<Formula> kept;
      for (const auto& child : c) {
        Formula g = fold(child, partial);
        if (g.is_true() || g.is_false()) {
          if (g.is_true() == is_and) continue;  // neutral element
          return g;                             // absorbing element
        }
        kept.push_back(std::move(g));
      }
      return is_and ? Formula::conj(std::move(kept)) : Formula::disj(std::move(kept));
    }
    case Connective::Implies: {
      Formula a = fold(c[0], partial);
      Formula b = fold(c[1], partial);
      if (a.is_false() || b.is_true()) return Formula::top();
      if (a.is_true()) return b;
      if (b.is_false()) return fold_not(a);
      return Formula::implies(std::move(a), std::move(b));
    }
    case Connective::Iff:
    case Connective::Xor: {
      const bool is_iff = f.kind() == Connective::Iff;
      Formula a = fold(c[0], partial);
      Formula b = fold(c[1], partial);
      if (b.is_true() || b.is_false()) std::swap(a, b);
      if (a.is_true() || a.is_false()) {
        // a ↔ b is b when a = ⊤; a ⊕ b is b when a = ⊥
        return a.is_true() == is_iff ? b : fold_not(b);
      }
      return is_iff ? Formula::iff(std::move(a), std::move(b))
                    : Formula::exclusive_or(std::move(a), std::move(b));
    }
  }
  return f;
}

void collect_variables(const Formula& f, std::vector<Var>& out) {
  if (f.kind() == Connective::Variable) {
    out.push_back(f.variable());
    return;
  }
  for (const auto& c : f.children()) collect_variables(c, out);
}

}  // namespace

Formula substitute(const Formula& f, const Assignment& partial) { return fold(f, partial); }

Formula rename(const Formula& f, const std::function<Formula(Var)>& image) {
  switch (f.kind()) {
    case Connective::True:
    case Connective::False: return f;
    case Connective::Variable: return image(f.variable());
    case Connective::Not: return Formula::negation(rename(f.children()[0], image));
    case Connective::And:
    case Connective::Or: {
      std::vector<Formula> kids;
      for (const auto& c : f.children()) kids.push_back(rename(c, image));
      return f.kind() == Connective::And ? Formula::conj(std::move(kids))
                                         : Formula::disj(std::move(kids));
    }
    case Connective::Iff:
      return Formula::iff(rename(f.children()[0], image), rename(f.children()[1], image));
    case Connective::Implies:
      return Formula::implies(rename(f.children()[0], image), rename(f.children()[1], image));
    case Connective::Xor:
      return Formula::exclusive_or(rename(f.children()[0], image),
                                   rename(f.children()[1], image));
  }
  return f;
}

std::vector<Var> variables(const Formula& f) {
  std::vector<Var> out;
  collect_variables(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- equivalence ----

bool equivalent(const Formula& a, const Formula& b, std::span<const Var> vars,
                const EquivalenceOptions& options) {
  std::vector<Var> domain(vars.begin(), vars.end());
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  if (domain.size() > options.max_vars)
    throw SizeError("truth-table equivalence over " + std::to_string(domain.size()) +
                    " variables exceeds the cap of " + std::to_string(options.max_vars));
  for (const Formula* f : {&a, &b})
    for (Var v : variables(*f))
      if (!std::binary_search(domain.begin(), domain.end(), v)) throw MissingAssignmentError(v);
  return options.parallel ? kernels::equivalent_parallel(a, b, domain)
                          : kernels::equivalent_serial(a, b, domain);
}

bool equivalent(const Formula& a, const Formula& b, const EquivalenceOptions& options) {
  std::vector<Var> vars = variables(a);
  for (Var v : variables(b)) vars.push_back(v);
  return equivalent(a, b, vars, options);
}

}  // namespace qsym

#include <algorithm>

#include "qsym/error.hpp"
#include "qsym/kernels.hpp"

namespace qsym::kernels {

CompiledFormula::CompiledFormula(const Formula& f) {
  std::size_t depth = 0;
  auto emit = [&](auto&& self, const Formula& node) -> void {
    const auto children = node.children();
    switch (node.kind()) {
      case Connective::True:
        code_.push_back({Op::Const1, 0});
        ++depth;
        break;
      case Connective::False:
        code_.push_back({Op::Const0, 0});
        ++depth;
        break;
      case Connective::Variable:
        code_.push_back({Op::Load, static_cast<std::uint32_t>(node.variable())});
        max_var_ = std::max(max_var_, node.variable());
        ++depth;
        break;
      case Connective::Not:
        self(self, children[0]);
        code_.push_back({Op::Not, 1});
        break;
      default: {
        for (const auto& child : children) self(self, child);
        Op op = Op::And;
        switch (node.kind()) {
          case Connective::Or: op = Op::Or; break;
          case Connective::Iff: op = Op::Iff; break;
          case Connective::Implies: op = Op::Implies; break;
          case Connective::Xor: op = Op::Xor; break;
          default: break;
        }
        const auto arity = static_cast<std::uint32_t>(children.size());
        if (arity == 0) {
          code_.push_back({op == Op::And ? Op::Const1 : Op::Const0, 0});
          ++depth;
          break;
        }
        code_.push_back({op, arity});
        depth -= arity - 1;
        break;
      }
    }
    max_stack_ = std::max(max_stack_, depth);
  };
  emit(emit, f);
}

std::uint64_t CompiledFormula::evaluate_words(std::span<const std::uint64_t> var_words) const {
  if (static_cast<std::size_t>(max_var_) >= var_words.size())
    throw MissingAssignmentError(max_var_);
  std::vector<std::uint64_t> stack(max_stack_ + 1);
  std::size_t top = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::Const0: stack[top++] = 0; break;
      case Op::Const1: stack[top++] = ~std::uint64_t{0}; break;
      case Op::Load: stack[top++] = var_words[in.arg]; break;
      case Op::Not: stack[top - 1] = ~stack[top - 1]; break;
      case Op::And: {
        std::uint64_t acc = ~std::uint64_t{0};
        for (std::uint32_t i = 0; i < in.arg; ++i) acc &= stack[--top];
        stack[top++] = acc;
        break;
      }
      case Op::Or: {
        std::uint64_t acc = 0;
        for (std::uint32_t i = 0; i < in.arg; ++i) acc |= stack[--top];
        stack[top++] = acc;
        break;
      }
      case Op::Iff: {
        const std::uint64_t b = stack[--top];
        stack[top - 1] = ~(stack[top - 1] ^ b);
        break;
      }
      case Op::Implies: {
        const std::uint64_t b = stack[--top];
        stack[top - 1] = ~stack[top - 1] | b;
        break;
      }
      case Op::Xor: {
        const std::uint64_t b = stack[--top];
        stack[top - 1] ^= b;
        break;
      }
    }
  }
  return stack[0];
}

bool CompiledFormula::evaluate_mask(std::uint64_t mask) const {
  if (max_var_ > 64) throw SizeError("packed evaluation supports variables up to 64");
  std::vector<std::uint64_t> words(static_cast<std::size_t>(max_var_) + 1);
  for (Var v = 1; v <= max_var_; ++v) words[v] = ((mask >> (v - 1)) & 1u) ? ~std::uint64_t{0} : 0;
  return evaluate_words(words) & 1u;
}

CompiledCnf::CompiledCnf(std::span<const Clause> clauses) {
  pos_.reserve(clauses.size());
  neg_.reserve(clauses.size());
  for (const auto& clause : clauses) {
    std::uint64_t pos = 0, neg = 0;
    for (Literal l : clause) {
      if (l.var() > 64) throw SizeError("packed evaluation supports variables up to 64");
      const std::uint64_t bit = std::uint64_t{1} << (l.var() - 1);
      (l.is_negative() ? neg : pos) |= bit;
    }
    pos_.push_back(pos);
    neg_.push_back(neg);
  }
}

bool CompiledCnf::evaluate_mask(std::uint64_t mask) const {
  for (std::size_t i = 0; i < pos_.size(); ++i)
    if (((mask & pos_[i]) | (~mask & neg_[i])) == 0) return false;
  return true;
}

}  // namespace qsym::kernels

#include "cforge/surface.hpp"

namespace cforge {

namespace {

struct AlphaCmp {
  // Parallel binder stacks; a bound variable is identified by its depth.
  std::vector<std::string> left, right;

  static int depthOf(const std::vector<std::string>& stack, const std::string& x) {
    for (std::size_t i = stack.size(); i-- > 0;)
      if (stack[i] == x) return static_cast<int>(i);
    return -1;
  }

  static bool typeOptEq(const Type& a, const Type& b) {
    if (!a || !b) return !a && !b;
    return typeEq(a, b);
  }

  bool under(std::initializer_list<std::pair<std::string, std::string>> binds, const Term& a, const Term& b) {
    for (const auto& [l, r] : binds) {
      left.push_back(l);
      right.push_back(r);
    }
    bool ok = eq(a, b);
    for (std::size_t i = 0; i < binds.size(); ++i) {
      left.pop_back();
      right.pop_back();
    }
    return ok;
  }

  bool eq(const Term& a, const Term& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case TermKind::Const:
        return a->num == b->num && a->isBool == b->isBool;
      case TermKind::Var: {
        int da = depthOf(left, a->x), db = depthOf(right, b->x);
        if (da < 0 && db < 0) return a->x == b->x;
        return da == db;
      }
      case TermKind::Global:
      case TermKind::Blame:
        return a->x == b->x;
      case TermKind::CrcLit:
        return crcEq(a->c, b->c);
      case TermKind::Abs:
        return typeOptEq(a->tx, b->tx) && under({{a->x, b->x}}, a->a, b->a);
      case TermKind::Abs2:
        return typeOptEq(a->tx, b->tx) && typeOptEq(a->tk, b->tk) && under({{a->x, b->x}, {a->k, b->k}}, a->a, b->a);
      case TermKind::Let:
        return eq(a->a, b->a) && under({{a->x, b->x}}, a->b, b->b);
      case TermKind::Op:
        return a->op == b->op && eq(a->a, b->a) && eq(a->b, b->b);
      case TermKind::CrcApp:
      case TermKind::CoercedVal:
        return crcEq(a->c, b->c) && eq(a->a, b->a);
      case TermKind::App:
      case TermKind::App2:
      case TermKind::Compose:
      case TermKind::CrcAppX:
      case TermKind::If:
        return eq(a->a, b->a) && eq(a->b, b->b) && eq(a->d, b->d);
    }
    return false;
  }
};

}  // namespace

bool alphaEq(const Term& a, const Term& b) { return AlphaCmp{}.eq(a, b); }

bool alphaEqProgram(const Program& a, const Program& b) {
  if (a.dialect != b.dialect || a.defs.size() != b.defs.size()) return false;
  for (std::size_t i = 0; i < a.defs.size(); ++i) {
    if (a.defs[i].name != b.defs[i].name) return false;
    const Term& fa = a.defs[i].fn;
    const Term& fb = b.defs[i].fn;
    if (!alphaEq(fa, fb)) return false;
    // Declared codomains are part of a definition's signature.
    if (fa->kind == TermKind::Abs && !AlphaCmp::typeOptEq(fa->tk, fb->tk)) return false;
  }
  return alphaEq(a.main, b.main);
}

}  // namespace cforge

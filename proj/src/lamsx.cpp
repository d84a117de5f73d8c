#include "cforge/lamsx.hpp"

namespace cforge {

namespace {

using Status = StepResult::Status;

[[noreturn]] void fail(const std::string& rule, const std::string& what, const std::vector<int>& path) {
  throw TypeError(rule, rule + ": " + what, path);
}

Type need(const std::optional<Type>& t, const std::string& rule, const std::string& what,
          const std::vector<int>& path) {
  if (!t) fail(rule, what, path);
  return *t;
}

// Source and target of a coercion-typed term's type (holes stay holes).
std::pair<Type, Type> crcEnds(const Type& t, const std::string& rule, const std::vector<int>& path) {
  if (t->kind == TypeKind::Hole) return {holeT(), holeT()};
  if (t->kind != TypeKind::Crc) fail(rule, "expected a coercion", path);
  return {t->a, t->b};
}

struct CheckerX {
  const Program& prog;
  TyVarSupply vars;
  std::vector<int> path;

  Type child(const TypeEnv& env, const Term& m, int i) {
    path.push_back(i);
    Type t = infer(env, m);
    path.pop_back();
    return t;
  }

  std::pair<Type, Type> coercion(const Coercion& c, const std::string& rule) {
    try {
      return coercionType(c);
    } catch (const CoercionError& e) {
      fail(rule, e.what(), path);
    }
  }

  Type infer(const TypeEnv& env, const Term& m) {
    switch (m->kind) {
      case TermKind::Const:
        return m->isBool ? boolT() : intT();
      case TermKind::Var:
        for (auto it = env.rbegin(); it != env.rend(); ++it)
          if (it->first == m->x) return it->second;
        fail("T-Var", "unbound variable " + m->x, path);
      case TermKind::Global: {
        Type t = prog.globalType(m->x);
        if (!t) fail("T-Global", "unknown function " + m->x, path);
        return t;
      }
      case TermKind::Abs2: {
        if (hasVar(m->tx) || hasVar(m->tk))
          throw TypeError("T-Abs", "T-Abs: type variable in a declared type", path, "EscapedTyVar");
        Type x = vars.fresh();
        TypeEnv inner = env;
        inner.emplace_back(m->x, m->tx);
        inner.emplace_back(m->k, crcT(m->tk, x));
        Type body = child(inner, m->a, 0);
        need(meet(body, x), "T-Abs", "body does not return through its continuation", path);
        return fun2T(m->tx, m->tk);
      }
      case TermKind::Op: {
        Type l = child(env, m->a, 0);
        Type r = child(env, m->b, 1);
        need(meet(l, opArgType(m->op)), "T-Op", "left operand is not Int", path);
        need(meet(r, opArgType(m->op)), "T-Op", "right operand is not Int", path);
        return opResultType(m->op);
      }
      case TermKind::App2: {
        Type f = child(env, m->a, 0);
        Type a = child(env, m->b, 1);
        Type k = child(env, m->d, 2);
        Type dom = holeT(), cod = holeT();
        if (f->kind == TypeKind::Fun2) {
          dom = f->a;
          cod = f->b;
        } else if (f->kind != TypeKind::Hole) {
          fail("T-App", "applying a non-function", path);
        }
        need(meet(dom, a), "T-App", "argument type does not match the domain", path);
        auto [ks, kt] = crcEnds(k, "T-App", path);
        need(meet(cod, ks), "T-App", "continuation source does not match the result", path);
        return kt;
      }
      case TermKind::Let: {
        Type a = child(env, m->a, 0);
        TypeEnv inner = env;
        inner.emplace_back(m->x, a);
        return child(inner, m->b, 1);
      }
      case TermKind::Compose: {
        auto [a, b] = crcEnds(child(env, m->a, 0), "T-Cmp", path);
        auto [b2, c] = crcEnds(child(env, m->b, 1), "T-Cmp", path);
        need(meet(b, b2), "T-Cmp", "composed coercions do not meet", path);
        return crcT(a, c);
      }
      case TermKind::CrcAppX: {
        Type a = child(env, m->a, 0);
        auto [s, t] = crcEnds(child(env, m->b, 1), "T-Crc", path);
        need(meet(a, s), "T-Crc", "coercion source does not match the term type", path);
        return t;
      }
      case TermKind::CoercedVal: {
        if (!isUncoercedValue(m->a)) fail("T-CrcV", "coerced value over a non-value", path);
        if (!isDelayed(m->c)) fail("T-CrcV", "coerced value with a non-delayed coercion", path);
        Type a = child(env, m->a, 0);
        auto [s, t] = coercion(m->c, "T-CrcV");
        need(meet(a, s), "T-CrcV", "coercion source does not match the value type", path);
        return t;
      }
      case TermKind::CrcLit: {
        auto [s, t] = coercion(m->c, "T-Crcn");
        return crcT(s, t);
      }
      case TermKind::Blame:
        return holeT();
      case TermKind::If: {
        Type c = child(env, m->a, 0);
        need(meet(c, boolT()), "T-If", "condition is not Bool", path);
        Type t = child(env, m->b, 1);
        Type e = child(env, m->d, 2);
        return need(meet(t, e), "T-If", "branches have different types", path);
      }
      default:
        fail("T-Syntax", "construct not in lamSx", path);
    }
  }
};

StepResult stepped(char kind, std::string rule, Term next) {
  StepResult r;
  r.status = Status::Stepped;
  r.kind = kind;
  r.rule = std::move(rule);
  r.next = std::move(next);
  return r;
}

struct StepperX {
  const Program& prog;
  NameSupply& names;
  std::vector<int> path;

  [[noreturn]] void stuck(const std::string& why) { throw StuckError("stuck: " + why, path); }

  StepResult here(StepResult r) {
    r.path = path;
    return r;
  }

  StepResult inChild(const Term& m, int i) {
    path.push_back(i);
    StepResult r = go(childAt(m, i));
    if (r.status == Status::Blame) {
      StepResult a = stepped('e', "E-Abort", mkBlame(r.label));
      a.label = r.label;
      a.path = path;
      path.pop_back();
      return a;
    }
    path.pop_back();
    if (r.status != Status::Stepped) stuck("child did not step");
    if (r.rule == "E-Abort") return r;
    Term a = m->a, b = m->b, d = m->d;
    (i == 0 ? a : i == 1 ? b : d) = r.next;
    r.next = withChildren(m, a, b, d);
    return r;
  }

  StepResult go(const Term& m) {
    if (m->kind == TermKind::Blame) {
      StepResult r;
      r.status = Status::Blame;
      r.label = m->x;
      r.next = m;
      return r;
    }
    if (isValue(m)) {
      StepResult r;
      r.status = Status::Value;
      r.next = m;
      return r;
    }
    switch (m->kind) {
      case TermKind::Op:
        if (!isValue(m->a)) return inChild(m, 0);
        if (!isValue(m->b)) return inChild(m, 1);
        if (m->a->kind != TermKind::Const || m->b->kind != TermKind::Const || m->a->isBool || m->b->isBool)
          stuck("primitive applied to non-integers");
        return here(stepped('e', "R-Op", delta(m->op, m->a, m->b)));
      case TermKind::App2: {
        if (!isValue(m->a)) return inChild(m, 0);
        if (!isValue(m->b)) return inChild(m, 1);
        if (!isValue(m->d)) return inChild(m, 2);
        const Term& f = m->a;
        if (f->kind == TermKind::Abs2)
          return here(stepped('e', "R-Beta", substitute(f->a, {{f->x, m->b}, {f->k, m->d}}, names)));
        if (f->kind == TermKind::Global) {
          const Def* d = prog.find(f->x);
          if (!d) stuck("unknown function " + f->x);
          return here(stepped('e', "R-Unfold", mkApp2(d->fn, m->b, m->d)));
        }
        if (f->kind == TermKind::CoercedVal && f->c->kind == CrcKind::Fun) {
          std::string k = names.fresh();
          Term call = mkApp2(f->a, mkCrcAppX(m->b, mkCrcLit(f->c->c1)), mkVar(k));
          return here(stepped('e', "R-Wrap", mkLet(k, mkCompose(mkCrcLit(f->c->c2), m->d), call)));
        }
        stuck("application of a non-function value");
      }
      case TermKind::Let:
        if (!isValue(m->a)) return inChild(m, 0);
        return here(stepped('c', "R-Let", substitute(m->b, m->x, m->a, names)));
      case TermKind::Compose:
        if (!isValue(m->a)) return inChild(m, 0);
        if (!isValue(m->b)) return inChild(m, 1);
        if (m->a->kind != TermKind::CrcLit || m->b->kind != TermKind::CrcLit) stuck("composing non-coercions");
        try {
          return here(stepped('c', "R-Cmp", mkCrcLit(compose(m->a->c, m->b->c))));
        } catch (const CoercionError& e) {
          stuck(e.what());
        }
      case TermKind::CrcAppX: {
        if (!isValue(m->a)) return inChild(m, 0);
        if (!isValue(m->b)) return inChild(m, 1);
        if (m->b->kind != TermKind::CrcLit) stuck("coercion argument is not a coercion");
        const Term& u = m->a;
        const Coercion& t = m->b->c;
        if (isUncoercedValue(u)) {
          if (isIdentity(t)) return here(stepped('c', "R-Id", u));
          if (t->kind == CrcKind::Fail) {
            StepResult r = here(stepped('c', "R-Fail", mkBlame(t->label)));
            r.label = t->label;
            return r;
          }
          if (isDelayed(t)) return here(stepped('c', "R-Crc", mkCoerced(u, t)));
          stuck("coercion cannot apply to an uncoerced value");
        }
        if (u->kind == TermKind::CoercedVal)
          return here(stepped('c', "R-MergeV", mkCrcAppX(u->a, mkCompose(mkCrcLit(u->c), m->b))));
        stuck("coercion applied to a free variable");
      }
      case TermKind::If:
        if (!isValue(m->a)) return inChild(m, 0);
        if (m->a->kind != TermKind::Const || !m->a->isBool) stuck("condition is not a boolean");
        return here(stepped('e', m->a->num ? "R-IfTrue" : "R-IfFalse", m->a->num ? m->b : m->d));
      default:
        stuck("no rule applies");
    }
  }
};

// Number of leading children that are evaluation positions, given which
// earlier siblings are values.
bool evalChild(const Term& m, int i) {
  auto v = [&](int j) { return isValue(childAt(m, j)); };
  switch (m->kind) {
    case TermKind::Op:
    case TermKind::Compose:
    case TermKind::CrcAppX:
      return i == 0 || (i == 1 && v(0));
    case TermKind::App2:
      return i == 0 || (i == 1 && v(0)) || (i == 2 && v(0) && v(1));
    case TermKind::Let:
    case TermKind::If:
      return i == 0;
    default:
      return false;
  }
}

std::string classifyX(const Program& p, const Term& m, bool emptyContext) {
  auto lit = [](const Term& t) { return t->kind == TermKind::CrcLit; };
  switch (m->kind) {
    case TermKind::Blame:
      return emptyContext ? "" : "E-Abort";
    case TermKind::Op:
      return m->a->kind == TermKind::Const && m->b->kind == TermKind::Const ? "R-Op" : "";
    case TermKind::App2:
      if (!isValue(m->b) || !isValue(m->d)) return "";
      if (m->a->kind == TermKind::Abs2) return "R-Beta";
      if (m->a->kind == TermKind::Global && p.find(m->a->x)) return "R-Unfold";
      if (m->a->kind == TermKind::CoercedVal && m->a->c->kind == CrcKind::Fun) return "R-Wrap";
      return "";
    case TermKind::Let:
      return isValue(m->a) ? "R-Let" : "";
    case TermKind::Compose:
      return lit(m->a) && lit(m->b) ? "R-Cmp" : "";
    case TermKind::CrcAppX:
      if (!lit(m->b)) return "";
      if (m->a->kind == TermKind::CoercedVal) return "R-MergeV";
      if (!isUncoercedValue(m->a)) return "";
      if (isIdentity(m->b->c)) return "R-Id";
      if (m->b->c->kind == CrcKind::Fail) return "R-Fail";
      if (isDelayed(m->b->c)) return "R-Crc";
      return "";
    case TermKind::If:
      if (m->a->kind == TermKind::Const && m->a->isBool) return m->a->num ? "R-IfTrue" : "R-IfFalse";
      return "";
    default:
      return "";
  }
}

void enumerateX(const Program& p, const Term& m, std::vector<int>& path, std::vector<Decomposition>& out) {
  std::string rule = classifyX(p, m, path.empty());
  if (!rule.empty()) out.push_back({Decomposition::Kind::Redex, path, rule});
  for (int i = 0; i < 3; ++i) {
    if (!childAt(m, i) || !evalChild(m, i)) continue;
    path.push_back(i);
    enumerateX(p, childAt(m, i), path, out);
    path.pop_back();
  }
}

void metricPartsX(const Term& m, std::size_t& k, std::size_t& l, std::size_t& cm, std::size_t& cn,
                  std::size_t& cmp, std::size_t& lets) {
  if (!m) return;
  switch (m->kind) {
    case TermKind::CrcAppX: ++cm; break;
    case TermKind::CrcLit: k += coercionSize(m->c); break;
    case TermKind::CoercedVal:
      l += coercionSize(m->c);
      ++cn;
      break;
    case TermKind::Compose: ++cmp; break;
    case TermKind::Let: ++lets; break;
    default: break;
  }
  metricPartsX(m->a, k, l, cm, cn, cmp, lets);
  metricPartsX(m->b, k, l, cm, cn, cmp, lets);
  metricPartsX(m->d, k, l, cm, cn, cmp, lets);
}

}  // namespace

Type typecheckX(const Program& p, const TypeEnv& env, const Term& m) {
  CheckerX ck{p, {}, {}};
  return ck.infer(env, m);
}

Type typecheckProgramX(const Program& p) {
  for (const auto& d : p.defs) {
    if (d.fn->kind != TermKind::Abs2 || !d.fn->tx || !d.fn->tk)
      throw TypeError("T-Def", "definition " + d.name + " must be an annotated two-argument abstraction");
    typecheckX(p, {}, d.fn);
  }
  return typecheckX(p, {}, p.main);
}

StepResult stepX(const Program& p, const Term& m, NameSupply& names) {
  StepperX s{p, names, {}};
  return s.go(m);
}

Decomposition decomposeOracleX(const Program& p, const Term& m) {
  if (m->kind == TermKind::Blame) return {Decomposition::Kind::Blame, {}, ""};
  if (isValue(m)) return {Decomposition::Kind::Value, {}, ""};
  std::vector<Decomposition> found;
  std::vector<int> path;
  enumerateX(p, m, path, found);
  if (found.empty()) throw DecompositionError("NoDecomposition");
  if (found.size() > 1) throw DecompositionError("MultipleDecompositions");
  return found.front();
}

Outcome evaluateX(const Program& p, const Term& m, std::uint64_t fuel, const StepObserver& observe) {
  NameSupply names = supplyFor(p, m, "kw");
  Outcome out;
  Term cur = m;
  for (;;) {
    StepResult r = stepX(p, cur, names);
    if (r.status == Status::Value) {
      out.kind = OutcomeKind::Value;
      out.value = cur;
      return out;
    }
    if (r.status == Status::Blame) {
      out.kind = OutcomeKind::Blamed;
      out.label = r.label;
      out.value = cur;
      return out;
    }
    if (out.steps >= fuel) {
      out.kind = OutcomeKind::OutOfFuel;
      out.value = cur;
      return out;
    }
    if (observe) observe(cur, r);
    cur = r.next;
    ++out.steps;
  }
}

std::size_t metricFX(const Term& m) {
  std::size_t k = 0, l = 0, cm = 0, cn = 0, cmp = 0, lets = 0;
  metricPartsX(m, k, l, cm, cn, cmp, lets);
  return 4 * (k + l) + 2 * cm + cn + 4 * cmp + lets;
}

}  // namespace cforge

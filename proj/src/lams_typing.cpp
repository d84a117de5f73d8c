#include "cforge/lams.hpp"

namespace cforge {

namespace {

std::optional<Type> lookup(const TypeEnv& env, const std::string& x) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == x) return it->second;
  return std::nullopt;
}

[[noreturn]] void fail(const std::string& rule, const std::string& what, const std::vector<int>& path) {
  throw TypeError(rule, rule + ": " + what, path);
}

Type need(const std::optional<Type>& t, const std::string& rule, const std::string& what,
          const std::vector<int>& path) {
  if (!t) fail(rule, what, path);
  return *t;
}

std::pair<Type, Type> crcTypes(const Coercion& c, const std::string& rule, const std::vector<int>& path) {
  try {
    return coercionType(c);
  } catch (const CoercionError& e) {
    fail(rule, e.what(), path);
  }
}

struct Checker {
  const Program& prog;
  std::vector<int> path;

  Type child(const TypeEnv& env, const Term& m, int i) {
    path.push_back(i);
    Type t = infer(env, m);
    path.pop_back();
    return t;
  }

  Type infer(const TypeEnv& env, const Term& m) {
    switch (m->kind) {
      case TermKind::Const:
        return m->isBool ? boolT() : intT();
      case TermKind::Var:
        return need(lookup(env, m->x), "T-Var", "unbound variable " + m->x, path);
      case TermKind::Global: {
        Type t = prog.globalType(m->x);
        if (!t) fail("T-Global", "unknown function " + m->x, path);
        return t;
      }
      case TermKind::Abs: {
        TypeEnv inner = env;
        inner.emplace_back(m->x, m->tx);
        Type body = child(inner, m->a, 0);
        if (m->tk) body = need(meet(body, m->tk), "T-Abs", "body does not have the declared result type", path);
        return funT(m->tx, body);
      }
      case TermKind::Op: {
        Type l = child(env, m->a, 0);
        Type r = child(env, m->b, 1);
        need(meet(l, opArgType(m->op)), "T-Op", "left operand is not Int", path);
        need(meet(r, opArgType(m->op)), "T-Op", "right operand is not Int", path);
        return opResultType(m->op);
      }
      case TermKind::App: {
        Type f = child(env, m->a, 0);
        Type a = child(env, m->b, 1);
        Type result;
        if (f->kind == TypeKind::Hole) {
          result = holeT();
        } else if (f->kind == TypeKind::Fun) {
          need(meet(f->a, a), "T-App", "argument type does not match the domain", path);
          result = f->b;
        } else {
          fail("T-App", "applying a non-function", path);
        }
        if (m->tk) result = need(meet(result, m->tk), "T-App", "result disagrees with annotation", path);
        return result;
      }
      case TermKind::CrcApp: {
        Type a = child(env, m->a, 0);
        auto [s, t] = crcTypes(m->c, "T-Crc", path);
        need(meet(a, s), "T-Crc", "coercion source does not match the term type", path);
        return t;
      }
      case TermKind::CoercedVal: {
        if (!isUncoercedValue(m->a)) fail("T-CrcV", "coerced value over a non-value", path);
        if (!isDelayed(m->c)) fail("T-CrcV", "coerced value with a non-delayed coercion", path);
        Type a = child(env, m->a, 0);
        auto [s, t] = crcTypes(m->c, "T-CrcV", path);
        need(meet(a, s), "T-CrcV", "coercion source does not match the value type", path);
        return t;
      }
      case TermKind::Blame:
        return holeT();
      case TermKind::If: {
        Type c = child(env, m->a, 0);
        need(meet(c, boolT()), "T-If", "condition is not Bool", path);
        Type t = child(env, m->b, 1);
        Type e = child(env, m->d, 2);
        Type r = need(meet(t, e), "T-If", "branches have different types", path);
        if (m->tk) r = need(meet(r, m->tk), "T-If", "result disagrees with annotation", path);
        return r;
      }
      default:
        fail("T-Syntax", "construct not in lamS", path);
    }
  }

  Term annotate(const TypeEnv& env, const Term& m, const Type& expected) {
    Type t = infer(env, m);
    Type want = need(meet(t, expected), "T-Annotate", "term does not have the expected type", path);
    switch (m->kind) {
      case TermKind::Abs: {
        TypeEnv inner = env;
        inner.emplace_back(m->x, m->tx);
        Type cod = want->b;
        path.push_back(0);
        Term body = annotate(inner, m->a, cod);
        path.pop_back();
        return mkAbs(m->x, m->tx, body, fillHoles(cod, dynT()));
      }
      case TermKind::Op: {
        path.push_back(0);
        Term l = annotate(env, m->a, intT());
        path.back() = 1;
        Term r = annotate(env, m->b, intT());
        path.pop_back();
        return withChildren(m, l, r);
      }
      case TermKind::App: {
        Type f = child(env, m->a, 0);
        Type a = child(env, m->b, 1);
        Type dom = f->kind == TypeKind::Hole ? a : need(meet(f->a, a), "T-App", "argument mismatch", path);
        path.push_back(1);
        Term na = annotate(env, m->b, dom);
        path.back() = 0;
        Term nf = annotate(env, m->a, funT(dom, want));
        path.pop_back();
        return mkApp(nf, na, fillHoles(want, dynT()));
      }
      case TermKind::CrcApp:
      case TermKind::CoercedVal: {
        auto [s, tt] = crcTypes(m->c, "T-Crc", path);
        path.push_back(0);
        Term sub = annotate(env, m->a, s);
        path.pop_back();
        return withChildren(m, sub);
      }
      case TermKind::If: {
        path.push_back(0);
        Term c = annotate(env, m->a, boolT());
        path.back() = 1;
        Term th = annotate(env, m->b, want);
        path.back() = 2;
        Term el = annotate(env, m->d, want);
        path.pop_back();
        return mkIf(c, th, el, fillHoles(want, dynT()));
      }
      default:
        return m;
    }
  }
};

void checkDef(const Program& p, const Def& d) {
  if (d.fn->kind != TermKind::Abs || !d.fn->tx || !d.fn->tk)
    throw TypeError("T-Def", "definition " + d.name + " must be an annotated abstraction");
  Checker ck{p, {}};
  Type t = ck.infer({}, d.fn);
  if (!meet(t, funT(d.fn->tx, d.fn->tk)))
    throw TypeError("T-Def", "definition " + d.name + " does not have its declared type");
}

}  // namespace

Type typecheck(const Program& p, const TypeEnv& env, const Term& m) {
  Checker ck{p, {}};
  return ck.infer(env, m);
}

Type typecheckProgram(const Program& p) {
  for (const auto& d : p.defs) checkDef(p, d);
  return typecheck(p, {}, p.main);
}

Term annotate(const Program& p, const TypeEnv& env, const Term& m, const Type& expected) {
  Checker ck{p, {}};
  return ck.annotate(env, m, expected);
}

Program annotateProgram(const Program& p) {
  Program out = p;
  for (auto& d : out.defs) {
    checkDef(p, d);
    d.fn = annotate(p, {}, d.fn, funT(d.fn->tx, d.fn->tk));
  }
  out.main = annotate(p, {}, p.main, holeT());
  return out;
}

}  // namespace cforge

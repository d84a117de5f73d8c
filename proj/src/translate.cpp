#include "cforge/translate.hpp"

#include <stdexcept>

namespace cforge {

Type transType(const Type& a) {
  switch (a->kind) {
    case TypeKind::Fun:
    case TypeKind::Fun2:
      return fun2T(transType(a->a), transType(a->b));
    case TypeKind::Crc:
      return crcT(transType(a->a), transType(a->b));
    default:
      return a;
  }
}

Coercion transCoercion(const Coercion& s) {
  switch (s->kind) {
    case CrcKind::IdDyn:
      return s;
    case CrcKind::Id:
      return idC(transType(s->a));
    case CrcKind::Proj:
      return projC(transType(s->g), s->label, transCoercion(s->c1));
    case CrcKind::Inj:
      return injC(transCoercion(s->c1), transType(s->g));
    case CrcKind::Fun:
      return mkFun(transCoercion(s->c1), transCoercion(s->c2), TypeKind::Fun2);
    case CrcKind::Fail:
      return failC(transType(s->g), s->label, transType(s->h));
  }
  return s;
}

Translator::Translator(const Program& p, bool opt) : source(p), optTrOp(opt), kappa_("k") {
  for (const auto& d : p.defs) {
    used_[d.name] = true;
    collectNames(d.fn, used_);
  }
  collectNames(p.main, used_);
  restart();
}

void Translator::restart() {
  kappa_ = NameSupply("k");
  for (const auto& [n, _] : used_) kappa_.avoid(n);
}

Type Translator::psi(const Type& a) const { return transType(a); }
Coercion Translator::psi(const Coercion& s) const { return transCoercion(s); }

Term Translator::value(const Term& v) {
  switch (v->kind) {
    case TermKind::Var:
    case TermKind::Const:
    case TermKind::Global:
      return v;
    case TermKind::Abs: {
      if (!v->tk) throw std::logic_error("translation needs an annotated abstraction");
      std::string k = kappa_.fresh();
      return mkAbs2(v->x, psi(v->tx), k, psi(v->tk), K(v->a, mkVar(k)));
    }
    case TermKind::CoercedVal:
      return mkCoerced(value(v->a), psi(v->c));
    default:
      throw std::logic_error("NotAValue: translating a non-value as a value");
  }
}

Term Translator::K(const Term& m, const Term& k) {
  if (isValue(m)) return mkCrcAppX(value(m), k);
  switch (m->kind) {
    case TermKind::Op: {
      Term l = C(m->a);
      Term r = C(m->b);
      Term op = mkOp(m->op, l, r);
      if (optTrOp && k->kind == TermKind::CrcLit && isIdentity(k->c)) return op;
      return mkCrcAppX(op, k);
    }
    case TermKind::App: {
      Term f = C(m->a);
      Term a = C(m->b);
      return mkApp2(f, a, k);
    }
    case TermKind::CrcApp: {
      std::string kv = kappa_.fresh();
      Term body = K(m->a, mkVar(kv));
      return mkLet(kv, mkCompose(mkCrcLit(psi(m->c)), k), body);
    }
    case TermKind::Blame:
      return m;
    case TermKind::If: {
      Term c = C(m->a);
      Term t = K(m->b, k);
      Term e = K(m->d, k);
      return mkIf(c, t, e);
    }
    default:
      throw std::logic_error("translation: construct not in lamS");
  }
}

Term Translator::C(const Term& m) {
  if (isValue(m)) return value(m);
  switch (m->kind) {
    case TermKind::CrcApp:
      return K(m->a, mkCrcLit(psi(m->c)));
    case TermKind::Blame:
      return m;
    case TermKind::Op:
      return K(m, mkCrcLit(idC(opResultType(m->op))));
    case TermKind::App:
    case TermKind::If:
      if (!m->tk) throw std::logic_error("translation needs an annotated application or conditional");
      return K(m, mkCrcLit(idC(psi(m->tk))));
    default:
      throw std::logic_error("translation: construct not in lamS");
  }
}

Program transProgram(const Program& p, bool optTrOp) {
  Translator tr(p, optTrOp);
  Program out;
  out.dialect = Dialect::LamSx;
  for (const auto& d : p.defs) {
    tr.restart();
    out.defs.push_back({d.name, tr.value(d.fn)});
  }
  tr.restart();
  out.main = tr.C(p.main);
  return out;
}

Term transTerm(const Program& p, const Term& m, bool optTrOp) {
  Program local = p;
  local.main = m;
  Translator tr(local, optTrOp);
  return tr.C(m);
}

}  // namespace cforge

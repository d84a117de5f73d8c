#include "cforge/term.hpp"

#include <algorithm>

namespace cforge {

namespace {

Term make(TermNode n) { return std::make_shared<const TermNode>(std::move(n)); }

TermNode blank(TermKind k) {
  TermNode n;
  n.kind = k;
  return n;
}

}  // namespace

Term mkInt(std::int64_t v) {
  auto n = blank(TermKind::Const);
  n.num = v;
  return make(std::move(n));
}

Term mkBool(bool v) {
  auto n = blank(TermKind::Const);
  n.num = v ? 1 : 0;
  n.isBool = true;
  return make(std::move(n));
}

Term mkVar(std::string x) {
  auto n = blank(TermKind::Var);
  n.x = std::move(x);
  return make(std::move(n));
}

Term mkGlobal(std::string f) {
  auto n = blank(TermKind::Global);
  n.x = std::move(f);
  return make(std::move(n));
}

Term mkAbs(std::string x, Type a, Term body, Type codomain) {
  auto n = blank(TermKind::Abs);
  n.x = std::move(x);
  n.tx = std::move(a);
  n.a = std::move(body);
  n.tk = std::move(codomain);
  return make(std::move(n));
}

Term mkAbs2(std::string x, Type a, std::string k, Type b, Term body) {
  auto n = blank(TermKind::Abs2);
  n.x = std::move(x);
  n.tx = std::move(a);
  n.k = std::move(k);
  n.tk = std::move(b);
  n.a = std::move(body);
  return make(std::move(n));
}

Term mkOp(OpKind op, Term l, Term r) {
  auto n = blank(TermKind::Op);
  n.op = op;
  n.a = std::move(l);
  n.b = std::move(r);
  return make(std::move(n));
}

Term mkApp(Term f, Term a, Type ann) {
  auto n = blank(TermKind::App);
  n.a = std::move(f);
  n.b = std::move(a);
  n.tk = std::move(ann);
  return make(std::move(n));
}

Term mkApp2(Term f, Term a, Term k) {
  auto n = blank(TermKind::App2);
  n.a = std::move(f);
  n.b = std::move(a);
  n.d = std::move(k);
  return make(std::move(n));
}

Term mkLet(std::string x, Term bound, Term body) {
  auto n = blank(TermKind::Let);
  n.x = std::move(x);
  n.a = std::move(bound);
  n.b = std::move(body);
  return make(std::move(n));
}

Term mkCompose(Term l, Term r) {
  auto n = blank(TermKind::Compose);
  n.a = std::move(l);
  n.b = std::move(r);
  return make(std::move(n));
}

Term mkCrcApp(Term m, Coercion s) {
  auto n = blank(TermKind::CrcApp);
  n.a = std::move(m);
  n.c = std::move(s);
  return make(std::move(n));
}

Term mkCrcAppX(Term m, Term k) {
  auto n = blank(TermKind::CrcAppX);
  n.a = std::move(m);
  n.b = std::move(k);
  return make(std::move(n));
}

Term mkCoerced(Term u, Coercion d) {
  auto n = blank(TermKind::CoercedVal);
  n.a = std::move(u);
  n.c = std::move(d);
  return make(std::move(n));
}

Term mkCrcLit(Coercion s) {
  auto n = blank(TermKind::CrcLit);
  n.c = std::move(s);
  return make(std::move(n));
}

Term mkBlame(std::string p) {
  auto n = blank(TermKind::Blame);
  n.x = std::move(p);
  return make(std::move(n));
}

Term mkIf(Term c, Term t, Term e, Type ann) {
  auto n = blank(TermKind::If);
  n.a = std::move(c);
  n.b = std::move(t);
  n.d = std::move(e);
  n.tk = std::move(ann);
  return make(std::move(n));
}

Term withChildren(const Term& m, Term a, Term b, Term d) {
  if (a == m->a && b == m->b && d == m->d) return m;
  TermNode n = *m;
  n.a = std::move(a);
  n.b = std::move(b);
  n.d = std::move(d);
  return make(std::move(n));
}

std::string_view opSymbol(OpKind op) {
  switch (op) {
    case OpKind::Add: return "+";
    case OpKind::Sub: return "-";
    case OpKind::Mul: return "*";
    case OpKind::Eq: return "=";
    case OpKind::Lt: return "<";
  }
  return "?";
}

Type opArgType(OpKind) { return intT(); }

Type opResultType(OpKind op) {
  return (op == OpKind::Eq || op == OpKind::Lt) ? boolT() : intT();
}

Term delta(OpKind op, const Term& l, const Term& r) {
  auto x = static_cast<std::uint64_t>(l->num);
  auto y = static_cast<std::uint64_t>(r->num);
  switch (op) {
    case OpKind::Add: return mkInt(static_cast<std::int64_t>(x + y));
    case OpKind::Sub: return mkInt(static_cast<std::int64_t>(x - y));
    case OpKind::Mul: return mkInt(static_cast<std::int64_t>(x * y));
    case OpKind::Eq: return mkBool(l->num == r->num);
    case OpKind::Lt: return mkBool(l->num < r->num);
  }
  return nullptr;
}

bool isUncoercedValue(const Term& m) {
  switch (m->kind) {
    case TermKind::Const:
    case TermKind::Abs:
    case TermKind::Abs2:
    case TermKind::Global:
    case TermKind::CrcLit:
      return true;
    default:
      return false;
  }
}

bool isValue(const Term& m) {
  if (m->kind == TermKind::Var || isUncoercedValue(m)) return true;
  return m->kind == TermKind::CoercedVal && isUncoercedValue(m->a);
}

std::size_t termSize(const Term& m) {
  std::size_t n = 1;
  if (m->a) n += termSize(m->a);
  if (m->b) n += termSize(m->b);
  if (m->d) n += termSize(m->d);
  return n;
}

const Def* Program::find(std::string_view name) const {
  for (const auto& d : defs)
    if (d.name == name) return &d;
  return nullptr;
}

Type Program::globalType(std::string_view name) const {
  const Def* d = find(name);
  if (!d) return nullptr;
  if (d->fn->kind == TermKind::Abs2) return fun2T(d->fn->tx, d->fn->tk);
  return funT(d->fn->tx, d->fn->tk);
}

std::string NameSupply::fresh() {
  for (;;) {
    std::string s = next_ == 0 ? prefix_ : prefix_ + std::to_string(next_);
    ++next_;
    if (!taken_.count(s)) {
      taken_[s] = true;
      return s;
    }
  }
}

void collectNames(const Term& m, std::map<std::string, bool>& out) {
  if (!m) return;
  if (!m->x.empty() && m->kind != TermKind::Blame) out[m->x] = true;
  if (!m->k.empty()) out[m->k] = true;
  collectNames(m->a, out);
  collectNames(m->b, out);
  collectNames(m->d, out);
}

namespace {

void freeVarsIn(const Term& m, std::vector<std::string>& bound, std::map<std::string, int>& out) {
  if (!m) return;
  switch (m->kind) {
    case TermKind::Var:
      if (std::find(bound.begin(), bound.end(), m->x) == bound.end()) out[m->x]++;
      return;
    case TermKind::Abs:
      bound.push_back(m->x);
      freeVarsIn(m->a, bound, out);
      bound.pop_back();
      return;
    case TermKind::Abs2:
      bound.push_back(m->x);
      bound.push_back(m->k);
      freeVarsIn(m->a, bound, out);
      bound.pop_back();
      bound.pop_back();
      return;
    case TermKind::Let:
      freeVarsIn(m->a, bound, out);
      bound.push_back(m->x);
      freeVarsIn(m->b, bound, out);
      bound.pop_back();
      return;
    default:
      freeVarsIn(m->a, bound, out);
      freeVarsIn(m->b, bound, out);
      freeVarsIn(m->d, bound, out);
  }
}

using Binds = std::vector<std::pair<std::string, Term>>;

bool freeInAny(const std::string& y, const Binds& binds) {
  for (const auto& [x, v] : binds) {
    if (v->kind == TermKind::Var) {
      if (v->x == y) return true;
      continue;
    }
    if (isUncoercedValue(v) && v->kind != TermKind::Abs && v->kind != TermKind::Abs2 &&
        v->kind != TermKind::CoercedVal)
      continue;
    std::map<std::string, int> fv;
    std::vector<std::string> bound;
    freeVarsIn(v, bound, fv);
    if (fv.count(y)) return true;
  }
  return false;
}

Binds without(const Binds& binds, const std::string& y) {
  Binds out;
  for (const auto& b : binds)
    if (b.first != y) out.push_back(b);
  return out;
}

Term subst(const Term& m, const Binds& binds, NameSupply& names);

// Enter a binder: drop shadowed bindings and rename the binder if one of
// the remaining values mentions it.
std::pair<std::string, Term> underBinder(const std::string& y, const Term& body, Binds& inner,
                                         NameSupply& names) {
  inner = without(inner, y);
  if (inner.empty() || !freeInAny(y, inner)) return {y, body};
  std::string fresh = names.fresh();
  NameSupply scratch;
  Term renamed = subst(body, {{y, mkVar(fresh)}}, scratch);
  return {fresh, renamed};
}

Term subst(const Term& m, const Binds& binds, NameSupply& names) {
  if (binds.empty() || !m) return m;
  switch (m->kind) {
    case TermKind::Var:
      for (const auto& [x, v] : binds)
        if (x == m->x) return v;
      return m;
    case TermKind::Const:
    case TermKind::Global:
    case TermKind::CrcLit:
    case TermKind::Blame:
      return m;
    case TermKind::Abs: {
      Binds inner = binds;
      auto [x, body] = underBinder(m->x, m->a, inner, names);
      Term nb = subst(body, inner, names);
      if (x == m->x && nb == m->a) return m;
      return mkAbs(x, m->tx, nb, m->tk);
    }
    case TermKind::Abs2: {
      Binds inner = binds;
      auto [x, body1] = underBinder(m->x, m->a, inner, names);
      auto [k, body2] = underBinder(m->k, body1, inner, names);
      Term nb = subst(body2, inner, names);
      if (x == m->x && k == m->k && nb == m->a) return m;
      return mkAbs2(x, m->tx, k, m->tk, nb);
    }
    case TermKind::Let: {
      Term bound = subst(m->a, binds, names);
      Binds inner = binds;
      auto [x, body] = underBinder(m->x, m->b, inner, names);
      Term nb = subst(body, inner, names);
      if (x == m->x && bound == m->a && nb == m->b) return m;
      return mkLet(x, bound, nb);
    }
    default: {
      Term a = subst(m->a, binds, names);
      Term b = subst(m->b, binds, names);
      return withChildren(m, a, b, subst(m->d, binds, names));
    }
  }
}

}  // namespace

void freeVars(const Term& m, std::map<std::string, int>& out) {
  std::vector<std::string> bound;
  freeVarsIn(m, bound, out);
}

Term substitute(const Term& m, const std::vector<std::pair<std::string, Term>>& binds, NameSupply& names) {
  return subst(m, binds, names);
}

Term substitute(const Term& m, const std::string& x, const Term& v, NameSupply& names) {
  return subst(m, {{x, v}}, names);
}

}  // namespace cforge

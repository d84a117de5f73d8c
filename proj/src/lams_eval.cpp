#include <functional>

#include "cforge/lams.hpp"

namespace cforge {

namespace {

using Status = StepResult::Status;

StepResult stepped(char kind, std::string rule, Term next) {
  StepResult r;
  r.status = Status::Stepped;
  r.kind = kind;
  r.rule = std::move(rule);
  r.next = std::move(next);
  return r;
}

Type codomainOf(const Program& p, const Term& u) {
  if (u->kind == TermKind::Abs) return u->tk;
  if (u->kind == TermKind::Global) {
    Type t = p.globalType(u->x);
    return t ? t->b : nullptr;
  }
  return nullptr;
}

struct Stepper {
  const Program& prog;
  NameSupply& names;
  std::vector<int> path;

  [[noreturn]] void stuck(const std::string& why) { throw StuckError("stuck: " + why, path); }

  // Steps child i of m; rebuilds m around the reduct. Blame in the child
  // aborts the whole program, so the reduct is returned unchanged.
  StepResult inChild(const Term& m, int i) {
    path.push_back(i);
    StepResult r = go(childAt(m, i));
    if (r.status == Status::Blame) {
      StepResult a = stepped('e', "E-Abort", mkBlame(r.label));
      a.label = r.label;
      a.path = path;
      path.pop_back();
      a.status = Status::Stepped;
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

  StepResult here(StepResult r) {
    r.path = path;
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
      case TermKind::CrcApp:
        return crcApp(m);
      case TermKind::Op:
        if (!isValue(m->a)) return inChild(m, 0);
        if (!isValue(m->b)) return inChild(m, 1);
        if (m->a->kind != TermKind::Const || m->b->kind != TermKind::Const || m->a->isBool || m->b->isBool)
          stuck("primitive applied to non-integers");
        return here(stepped('e', "R-Op", delta(m->op, m->a, m->b)));
      case TermKind::App: {
        if (!isValue(m->a)) return inChild(m, 0);
        if (!isValue(m->b)) return inChild(m, 1);
        const Term& f = m->a;
        if (f->kind == TermKind::Abs)
          return here(stepped('e', "R-Beta", substitute(f->a, f->x, m->b, names)));
        if (f->kind == TermKind::Global) {
          const Def* d = prog.find(f->x);
          if (!d) stuck("unknown function " + f->x);
          return here(stepped('e', "R-Unfold", mkApp(d->fn, m->b, m->tk)));
        }
        if (f->kind == TermKind::CoercedVal && f->c->kind == CrcKind::Fun) {
          const Term& u = f->a;
          Term inner = mkApp(u, mkCrcApp(m->b, f->c->c1), codomainOf(prog, u));
          return here(stepped('e', "R-Wrap", mkCrcApp(inner, f->c->c2)));
        }
        stuck("application of a non-function value");
      }
      case TermKind::If:
        if (!isValue(m->a)) return inChild(m, 0);
        if (m->a->kind != TermKind::Const || !m->a->isBool) stuck("condition is not a boolean");
        if (m->a->num != 0) return here(stepped('e', "R-IfTrue", m->b));
        return here(stepped('e', "R-IfFalse", m->d));
      default:
        stuck("no rule applies");
    }
  }

  StepResult crcApp(const Term& m) {
    const Term& n = m->a;
    const Coercion& t = m->c;
    if (n->kind == TermKind::CrcApp)
      return here(stepped('c', "R-MergeC", mkCrcApp(n->a, compose(n->c, t))));
    if (n->kind == TermKind::Blame) {
      StepResult r = stepped('e', "E-Abort", n);
      r.label = n->x;
      path.push_back(0);
      r.path = path;
      path.pop_back();
      return r;
    }
    if (isUncoercedValue(n)) {
      if (isIdentity(t)) return here(stepped('c', "R-Id", n));
      if (t->kind == CrcKind::Fail) {
        StepResult r = here(stepped('c', "R-Fail", mkBlame(t->label)));
        r.label = t->label;
        return r;
      }
      if (isDelayed(t)) return here(stepped('c', "R-Crc", mkCoerced(n, t)));
      stuck("coercion cannot apply to an uncoerced value");
    }
    if (n->kind == TermKind::CoercedVal)
      return here(stepped('c', "R-MergeV", mkCrcApp(n->a, compose(n->c, t))));
    if (n->kind == TermKind::Var) stuck("free variable");
    return inChild(m, 0);
  }
};

// ---- oracle -------------------------------------------------------------

enum class Frame { Eval, Crc, None };

// Frame kind of child i of m, given that all earlier evaluated siblings
// must already be values.
Frame frameOf(const Term& m, int i) {
  switch (m->kind) {
    case TermKind::Op:
    case TermKind::App:
      if (i == 0) return Frame::Eval;
      if (i == 1) return isValue(m->a) ? Frame::Eval : Frame::None;
      return Frame::None;
    case TermKind::If:
      return i == 0 ? Frame::Eval : Frame::None;
    case TermKind::CrcApp:
      return i == 0 ? Frame::Crc : Frame::None;
    default:
      return Frame::None;
  }
}

std::string classifyRedex(const Program& p, const Term& m, bool underF, bool emptyContext) {
  switch (m->kind) {
    case TermKind::Blame:
      return emptyContext ? "" : "E-Abort";
    case TermKind::Op:
      if (m->a->kind == TermKind::Const && m->b->kind == TermKind::Const) return "R-Op";
      return "";
    case TermKind::App:
      if (!isValue(m->b)) return "";
      if (m->a->kind == TermKind::Abs) return "R-Beta";
      if (m->a->kind == TermKind::Global && p.find(m->a->x)) return "R-Unfold";
      if (m->a->kind == TermKind::CoercedVal && m->a->c->kind == CrcKind::Fun) return "R-Wrap";
      return "";
    case TermKind::If:
      if (m->a->kind == TermKind::Const && m->a->isBool) return m->a->num ? "R-IfTrue" : "R-IfFalse";
      return "";
    case TermKind::CrcApp:
      if (!underF) return "";
      if (m->a->kind == TermKind::CrcApp) return "R-MergeC";
      if (m->a->kind == TermKind::CoercedVal) return "R-MergeV";
      if (isUncoercedValue(m->a)) {
        if (isIdentity(m->c)) return "R-Id";
        if (m->c->kind == CrcKind::Fail) return "R-Fail";
        if (isDelayed(m->c)) return "R-Crc";
      }
      return "";
    default:
      return "";
  }
}

void enumerate(const Program& p, const Term& m, std::vector<int>& path, std::vector<Frame>& frames,
               std::vector<Decomposition>& out) {
  bool underF = frames.empty() || frames.back() != Frame::Crc;
  std::string rule = classifyRedex(p, m, underF, frames.empty());
  if (!rule.empty()) out.push_back({Decomposition::Kind::Redex, path, rule});
  for (int i = 0; i < 3; ++i) {
    const Term& c = childAt(m, i);
    if (!c) continue;
    Frame f = frameOf(m, i);
    if (f == Frame::None) continue;
    // E ::= F | F[[]<s>]: a coercion frame may not sit directly inside another.
    if (f == Frame::Crc && !frames.empty() && frames.back() == Frame::Crc) continue;
    path.push_back(i);
    frames.push_back(f);
    enumerate(p, c, path, frames, out);
    frames.pop_back();
    path.pop_back();
  }
}

void metricParts(const Term& m, std::size_t& k, std::size_t& l, std::size_t& cm, std::size_t& cn) {
  if (!m) return;
  if (m->kind == TermKind::CrcApp) {
    k += coercionSize(m->c);
    ++cm;
  } else if (m->kind == TermKind::CoercedVal) {
    l += coercionSize(m->c);
    ++cn;
  }
  metricParts(m->a, k, l, cm, cn);
  metricParts(m->b, k, l, cm, cn);
  metricParts(m->d, k, l, cm, cn);
}

}  // namespace

const Term& childAt(const Term& m, int i) { return i == 0 ? m->a : i == 1 ? m->b : m->d; }

StepResult step(const Program& p, const Term& m, NameSupply& names) {
  Stepper s{p, names, {}};
  return s.go(m);
}

Decomposition decomposeOracle(const Program& p, const Term& m) {
  if (m->kind == TermKind::Blame) return {Decomposition::Kind::Blame, {}, ""};
  if (isValue(m)) return {Decomposition::Kind::Value, {}, ""};
  std::vector<Decomposition> found;
  std::vector<int> path;
  std::vector<Frame> frames;
  enumerate(p, m, path, frames, found);
  if (found.empty()) throw DecompositionError("NoDecomposition");
  if (found.size() > 1) throw DecompositionError("MultipleDecompositions");
  return found.front();
}

NameSupply supplyFor(const Program& p, const Term& m, const std::string& prefix) {
  NameSupply names(prefix);
  std::map<std::string, bool> used;
  for (const auto& d : p.defs) {
    used[d.name] = true;
    collectNames(d.fn, used);
  }
  collectNames(m, used);
  for (const auto& [n, _] : used) names.avoid(n);
  return names;
}

Outcome evaluate(const Program& p, const Term& m, std::uint64_t fuel, const StepObserver& observe) {
  NameSupply names = supplyFor(p, m);
  Outcome out;
  Term cur = m;
  for (;;) {
    StepResult r = step(p, cur, names);
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

std::size_t metricF(const Term& m) {
  std::size_t k = 0, l = 0, cm = 0, cn = 0;
  metricParts(m, k, l, cm, cn);
  return 4 * (k + l) + 2 * cm + cn;
}

std::size_t maxCoercionSize(const Term& m) {
  if (!m) return 0;
  std::size_t best = m->c ? coercionSize(m->c) : 0;
  for (const Term* c : {&m->a, &m->b, &m->d}) best = std::max(best, maxCoercionSize(*c));
  return best;
}

bool adjacentCoercionsOnPath(const Term& m, const std::vector<int>& path) {
  Term cur = m;
  for (std::size_t i = 0;; ++i) {
    if (cur->kind == TermKind::CrcApp && cur->a->kind == TermKind::CrcApp) return true;
    if (i == path.size()) return false;
    cur = childAt(cur, path[i]);
  }
}

bool valuesHaveOneLayer(const Term& m) {
  if (!m) return true;
  if (m->kind == TermKind::CoercedVal && (!isUncoercedValue(m->a) || !isDelayed(m->c))) return false;
  return valuesHaveOneLayer(m->a) && valuesHaveOneLayer(m->b) && valuesHaveOneLayer(m->d);
}

bool coercionsCanonical(const Term& m) {
  if (!m) return true;
  if (m->c && !isCanonical(m->c)) return false;
  return coercionsCanonical(m->a) && coercionsCanonical(m->b) && coercionsCanonical(m->d);
}

}  // namespace cforge

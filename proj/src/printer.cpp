#include "cforge/surface.hpp"

namespace cforge {

namespace {

const char* arrowText(TypeKind k) {
  switch (k) {
    case TypeKind::Fun: return " -> ";
    case TypeKind::Fun2: return " => ";
    default: return " ~> ";
  }
}

std::string typeText(const Type& t, bool atomic) {
  switch (t->kind) {
    case TypeKind::Dyn: return "Dyn";
    case TypeKind::Int: return "Int";
    case TypeKind::Bool: return "Bool";
    case TypeKind::Hole: return "_";
    case TypeKind::Var: return "'X" + std::to_string(t->var);
    default: {
      std::string s = typeText(t->a, true) + arrowText(t->kind) + typeText(t->b, false);
      return atomic ? "(" + s + ")" : s;
    }
  }
}

std::string ground(const Type& g) { return typeText(g, true); }

std::string crcText(const Coercion& c, bool sugar, bool inSeq);

// Body of a projection or injection: the coercion printed as a sequence item.
std::string seqPart(const Coercion& c, bool sugar) { return crcText(c, sugar, true); }

std::string crcText(const Coercion& c, bool sugar, bool inSeq) {
  switch (c->kind) {
    case CrcKind::IdDyn:
      return "id{Dyn}";
    case CrcKind::Id:
      return "id{" + typeText(c->a, false) + "}";
    case CrcKind::Fail:
      return "bot{" + ground(c->g) + ", " + c->label + ", " + ground(c->h) + "}";
    case CrcKind::Inj: {
      std::string tag = ground(c->g) + "!";
      if (sugar && c->c1->kind == CrcKind::Id && typeEq(c->c1->a, c->g)) return tag;
      return seqPart(c->c1, sugar) + ";" + tag;
    }
    case CrcKind::Proj: {
      std::string tag = ground(c->g) + "?^" + c->label;
      const Coercion& body = c->c1;
      if (sugar && body->kind == CrcKind::Id && typeEq(body->a, c->g)) return tag;
      if (sugar && body->kind == CrcKind::Inj && body->c1->kind == CrcKind::Id && typeEq(body->c1->a, c->g) &&
          typeEq(body->g, c->g))
        return tag + ";" + ground(c->g) + "!";
      return tag + ";" + seqPart(body, sugar);
    }
    case CrcKind::Fun: {
      std::string l = crcText(c->c1, sugar, false);
      if (c->c1->kind == CrcKind::Fun) l = "(" + l + ")";
      std::string s = l + (c->arrow == TypeKind::Fun ? " -> " : " => ") + crcText(c->c2, sugar, false);
      return inSeq ? "(" + s + ")" : s;
    }
  }
  return "?";
}

// Precedence levels, loosest first.
enum Level { kExpr = 0, kCompose, kRel, kAdd, kMul, kPostfix, kAtom };

bool isAtomic(const Term& m) {
  switch (m->kind) {
    case TermKind::Const:
    case TermKind::Var:
    case TermKind::Global:
    case TermKind::Blame:
    case TermKind::CrcLit:
      return true;
    default:
      return false;
  }
}

struct Printer {
  bool sugar;

  std::string wrap(const std::string& s, bool paren) { return paren ? "(" + s + ")" : s; }

  // Subject of <c> / <<d>>: atoms and coercion chains print bare.
  std::string subject(const Term& m) {
    bool bare = (isAtomic(m) && m->kind != TermKind::Blame) || m->kind == TermKind::CrcApp || m->kind == TermKind::CrcAppX ||
                m->kind == TermKind::CoercedVal;
    if (m->kind == TermKind::CrcLit && m->c->kind == CrcKind::Fun) bare = true;  // already parenthesized
    return bare ? print(m, kPostfix) : "(" + print(m, kExpr) + ")";
  }

  // Function position of an application chain.
  std::string function(const Term& m) {
    if (m->kind == TermKind::App) return print(m, kExpr);
    if (isAtomic(m)) return print(m, kAtom);
    return "(" + print(m, kExpr) + ")";
  }

  std::string print(const Term& m, int level) {
    switch (m->kind) {
      case TermKind::Const:
        if (m->isBool) return m->num ? "true" : "false";
        return m->num < 0 ? "(" + std::to_string(m->num) + ")" : std::to_string(m->num);
      case TermKind::Var:
      case TermKind::Global:
        return m->x;
      case TermKind::Blame:
        return "blame " + m->x;
      case TermKind::CrcLit: {
        std::string s = crcText(m->c, sugar, false);
        return m->c->kind == CrcKind::Fun ? "(" + s + ")" : s;
      }
      case TermKind::Abs:
        return wrap("\\" + m->x + ":" + typeText(m->tx, false) + ". " + print(m->a, kExpr), level > kExpr);
      case TermKind::Abs2:
        return wrap("\\ (" + m->x + ":" + typeText(m->tx, false) + ", " + m->k + ":" + typeText(m->tk, false) +
                        "). " + print(m->a, kExpr),
                    level > kExpr);
      case TermKind::Let:
        return wrap("let " + m->x + " = " + print(m->a, kExpr) + " in " + print(m->b, kExpr), level > kExpr);
      case TermKind::If:
        return wrap("if " + print(m->a, kExpr) + " then " + print(m->b, kExpr) + " else " + print(m->d, kExpr),
                    level > kExpr);
      case TermKind::Compose:
        return wrap(operand(m->a, kCompose) + " ;; " + operand(m->b, kRel), level > kCompose);
      case TermKind::Op: {
        int own = (m->op == OpKind::Eq || m->op == OpKind::Lt) ? kRel : (m->op == OpKind::Mul ? kMul : kAdd);
        int left = own == kRel ? kAdd : own;
        int right = own == kRel ? kAdd : own + 1;
        std::string s = operand(m->a, left) + " " + std::string(opSymbol(m->op)) + " " + operand(m->b, right);
        return wrap(s, level > own);
      }
      case TermKind::App:
        return wrap(function(m->a) + " " + print(m->b, kAtom), level > kExpr);
      case TermKind::App2:
        return wrap(function(m->a) + " (" + print(m->b, kExpr) + ", " + print(m->d, kExpr) + ")", level > kExpr);
      case TermKind::CrcApp:
        return wrap(subject(m->a) + "<" + crcText(m->c, sugar, false) + ">", level > kPostfix);
      case TermKind::CrcAppX:
        return wrap(subject(m->a) + "<" + print(m->b, kExpr) + ">", level > kPostfix);
      case TermKind::CoercedVal:
        return wrap(subject(m->a) + "<<" + crcText(m->c, sugar, false) + ">>", level > kPostfix);
    }
    return "?";
  }

  // Operands of binary operators: applications always get parentheses.
  std::string operand(const Term& m, int level) {
    if (m->kind == TermKind::App || m->kind == TermKind::App2) return "(" + print(m, kExpr) + ")";
    return print(m, level);
  }
};

}  // namespace

std::string printType(const Type& t) { return typeText(t, false); }

std::string printCoercion(const Coercion& c, bool sugar) { return crcText(c, sugar, false); }

std::string printTerm(const Term& m, bool sugar) { return Printer{sugar}.print(m, kExpr); }

std::string printProgram(const Program& p, bool sugar) {
  Printer pr{sugar};
  std::string out;
  for (std::size_t i = 0; i < p.defs.size(); ++i) {
    const Def& d = p.defs[i];
    out += i == 0 ? "letrec " : "and ";
    const Term& f = d.fn;
    if (f->kind == TermKind::Abs2) {
      out += d.name + " (" + f->x + ":" + printType(f->tx) + ", " + f->k + ":" + printType(f->tk) + ") =\n  " +
             pr.print(f->a, kExpr) + "\n";
    } else {
      out += d.name + " (" + f->x + ":" + printType(f->tx) + ") : " + printType(f->tk) + " =\n  " +
             pr.print(f->a, kExpr) + "\n";
    }
  }
  if (!p.defs.empty()) out += "in\n";
  out += pr.print(p.main, kExpr);
  out += "\n";
  return out;
}

}  // namespace cforge

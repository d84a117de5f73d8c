#include "cforge/type.hpp"

namespace cforge {

namespace {
Type leaf(TypeKind k) { return std::make_shared<const TypeNode>(TypeNode{k, nullptr, nullptr, 0}); }
Type node(TypeKind k, Type a, Type b) {
  return std::make_shared<const TypeNode>(TypeNode{k, std::move(a), std::move(b), 0});
}
}  // namespace

Type dynT() { static const Type t = leaf(TypeKind::Dyn); return t; }
Type intT() { static const Type t = leaf(TypeKind::Int); return t; }
Type boolT() { static const Type t = leaf(TypeKind::Bool); return t; }
Type holeT() { static const Type t = leaf(TypeKind::Hole); return t; }
Type funT(Type a, Type b) { return node(TypeKind::Fun, std::move(a), std::move(b)); }
Type fun2T(Type a, Type b) { return node(TypeKind::Fun2, std::move(a), std::move(b)); }
Type crcT(Type a, Type b) { return node(TypeKind::Crc, std::move(a), std::move(b)); }
Type arrowT(TypeKind arrow, Type a, Type b) { return node(arrow, std::move(a), std::move(b)); }

Type varT(int id) {
  return std::make_shared<const TypeNode>(TypeNode{TypeKind::Var, nullptr, nullptr, id});
}

bool typeEq(const Type& a, const Type& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::Fun:
    case TypeKind::Fun2:
    case TypeKind::Crc:
      return typeEq(a->a, b->a) && typeEq(a->b, b->b);
    case TypeKind::Var:
      return a->var == b->var;
    default:
      return true;
  }
}

bool isArrow(const Type& t) { return t->kind == TypeKind::Fun || t->kind == TypeKind::Fun2; }
bool isBase(const Type& t) { return t->kind == TypeKind::Int || t->kind == TypeKind::Bool; }

bool isGround(const Type& t) {
  if (isBase(t)) return true;
  return isArrow(t) && t->a->kind == TypeKind::Dyn && t->b->kind == TypeKind::Dyn;
}

bool consistent(const Type& a, const Type& b) {
  if (a->kind == TypeKind::Dyn || b->kind == TypeKind::Dyn) return true;
  if (a->kind == TypeKind::Hole || b->kind == TypeKind::Hole) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::Fun:
    case TypeKind::Fun2:
      return consistent(a->a, b->a) && consistent(a->b, b->b);
    case TypeKind::Crc:
      // coercions on coercions are identities only
      return typeEq(a, b);
    case TypeKind::Var:
      return a->var == b->var;
    default:
      return true;
  }
}

std::optional<Type> meet(const Type& a, const Type& b) {
  if (a->kind == TypeKind::Hole) return b;
  if (b->kind == TypeKind::Hole) return a;
  if (a->kind != b->kind) return std::nullopt;
  switch (a->kind) {
    case TypeKind::Fun:
    case TypeKind::Fun2:
    case TypeKind::Crc: {
      auto l = meet(a->a, b->a);
      if (!l) return std::nullopt;
      auto r = meet(a->b, b->b);
      if (!r) return std::nullopt;
      if (*l == a->a && *r == a->b) return a;
      return node(a->kind, *l, *r);
    }
    case TypeKind::Var:
      if (a->var != b->var) return std::nullopt;
      return a;
    default:
      return a;
  }
}

bool instanceOf(const Type& specific, const Type& general) {
  if (general->kind == TypeKind::Hole) return true;
  if (specific->kind != general->kind) return false;
  switch (general->kind) {
    case TypeKind::Fun:
    case TypeKind::Fun2:
    case TypeKind::Crc:
      return instanceOf(specific->a, general->a) && instanceOf(specific->b, general->b);
    case TypeKind::Var:
      return specific->var == general->var;
    default:
      return true;
  }
}

bool hasHole(const Type& t) {
  if (t->kind == TypeKind::Hole) return true;
  if (t->a && hasHole(t->a)) return true;
  return t->b && hasHole(t->b);
}

bool hasVar(const Type& t) {
  if (t->kind == TypeKind::Var) return true;
  if (t->a && hasVar(t->a)) return true;
  return t->b && hasVar(t->b);
}

Type fillHoles(const Type& t, const Type& with) {
  if (t->kind == TypeKind::Hole) return with;
  if (!t->a) return t;
  auto l = fillHoles(t->a, with);
  auto r = fillHoles(t->b, with);
  if (l == t->a && r == t->b) return t;
  return node(t->kind, l, r);
}

}  // namespace cforge

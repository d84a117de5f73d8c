#pragma once

#include <memory>
#include <optional>
#include <string>

namespace cforge {

// One representation serves both calculi. Fun is the lamS arrow, Fun2 the
// lamSx arrow A => B, Crc the coercion type A ~> B, Var a rigid variable.
// Hole is internal: an unconstrained position produced by blame or by a
// failure coercion. It never appears in source syntax.
enum class TypeKind { Dyn, Int, Bool, Fun, Fun2, Crc, Var, Hole };

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

struct TypeNode {
  TypeKind kind;
  Type a;
  Type b;
  int var = 0;
};

Type dynT();
Type intT();
Type boolT();
Type holeT();
Type funT(Type a, Type b);
Type fun2T(Type a, Type b);
Type crcT(Type a, Type b);
Type varT(int id);
Type arrowT(TypeKind arrow, Type a, Type b);

bool typeEq(const Type& a, const Type& b);
bool isArrow(const Type& t);
bool isBase(const Type& t);

// Ground types: Int, Bool, Dyn -> Dyn, Dyn => Dyn.
bool isGround(const Type& t);
bool consistent(const Type& a, const Type& b);

// Greatest lower bound with holes as top; nullopt when incompatible.
std::optional<Type> meet(const Type& a, const Type& b);
// True when `specific` is obtained from `general` by filling holes.
bool instanceOf(const Type& specific, const Type& general);
bool hasHole(const Type& t);
bool hasVar(const Type& t);
Type fillHoles(const Type& t, const Type& with);

}  // namespace cforge

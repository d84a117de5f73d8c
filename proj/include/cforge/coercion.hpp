#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "cforge/type.hpp"

namespace cforge {

// Canonical space-efficient coercions, shared by both calculi:
//   s ::= id_Dyn | G?p ; i | i
//   i ::= g ; G! | g | bot^{G p H}
//   g ::= id_A (A != Dyn) | s -> t (not both identities)
// Fun records which arrow it is built from (lamS -> or lamSx =>).
enum class CrcKind { IdDyn, Proj, Inj, Id, Fun, Fail };

struct CoercionNode;
using Coercion = std::shared_ptr<const CoercionNode>;

struct CoercionNode {
  CrcKind kind;
  Type g;              // Proj / Inj / Fail: ground tag G
  Type h;              // Fail: ground tag H
  Type a;              // Id: the type
  std::string label;   // Proj / Fail
  Coercion c1;         // Proj / Inj body, Fun argument part
  Coercion c2;         // Fun result part
  TypeKind arrow = TypeKind::Fun;
};

struct CoercionError : std::runtime_error {
  std::string code;  // IllFormedCoercion | CompositionTypeMismatch
  CoercionError(std::string c, const std::string& what)
      : std::runtime_error(what), code(std::move(c)) {}
};

Coercion idDyn();
Coercion idC(const Type& a);  // id_Dyn when a is Dyn
Coercion projC(const Type& g, std::string label, Coercion body);
Coercion injC(Coercion body, const Type& g);
Coercion failC(const Type& g, std::string label, const Type& h);
// Function coercion; collapses id -> id into id_{A -> B}.
Coercion mkFun(Coercion s, Coercion t, TypeKind arrow = TypeKind::Fun);
// Sugar: G! = id_G ; G!   and   G?p = G?p ; id_G.
Coercion injG(const Type& g);
Coercion projG(const Type& g, std::string label);

bool crcEq(const Coercion& a, const Coercion& b);
bool isIdentity(const Coercion& c);
Type identityType(const Coercion& c);

enum class Stratum { None, Space, Intermediate, Ground };
// Most specific canonical stratum of c (Ground implies Intermediate implies Space).
Stratum classify(const Coercion& c);
bool isCanonical(const Coercion& c);
// Delayed coercions d ::= g ; G! | s -> t.
bool isDelayed(const Coercion& c);

// Source and target of a coercion, possibly with holes (see type.hpp).
std::pair<Type, Type> coercionType(const Coercion& c);
bool wellFormedAt(const Coercion& c, const Type& source, const Type& target);

Coercion compose(const Coercion& s, const Coercion& t);
std::size_t coercionSize(const Coercion& c);

}  // namespace cforge

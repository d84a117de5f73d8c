#include "cforge/coercion.hpp"

namespace cforge {

namespace {

Coercion make(CoercionNode n) { return std::make_shared<const CoercionNode>(std::move(n)); }

[[noreturn]] void illFormed(const std::string& why) {
  throw CoercionError("IllFormedCoercion", "ill-formed coercion: " + why);
}

[[noreturn]] void mismatch(const std::string& why) {
  throw CoercionError("CompositionTypeMismatch", "cannot compose: " + why);
}

bool isGroundC(const Coercion& c) {
  if (c->kind == CrcKind::Id) return true;
  if (c->kind != CrcKind::Fun) return false;
  return !(isIdentity(c->c1) && isIdentity(c->c2));
}

bool isIntermediateC(const Coercion& c);
bool isSpaceC(const Coercion& c);

bool isIntermediateC(const Coercion& c) {
  switch (c->kind) {
    case CrcKind::Inj:
      return isGround(c->g) && classify(c->c1) == Stratum::Ground;
    case CrcKind::Fail:
      return isGround(c->g) && isGround(c->h) && !typeEq(c->g, c->h);
    case CrcKind::Id:
    case CrcKind::Fun:
      return classify(c) == Stratum::Ground;
    default:
      return false;
  }
}

bool isSpaceC(const Coercion& c) {
  switch (c->kind) {
    case CrcKind::IdDyn:
      return true;
    case CrcKind::Proj:
      return isGround(c->g) && isIntermediateC(c->c1);
    default:
      return isIntermediateC(c);
  }
}

// Source type of bot^{G p H}: the only A != Dyn with A ~ G.
Type failSource(const Type& g) {
  if (isArrow(g)) return arrowT(g->kind, holeT(), holeT());
  return g;
}

Coercion composeRaw(const Coercion& s, const Coercion& t) {
  switch (s->kind) {
    case CrcKind::IdDyn:  // CC-IdDynL
      return t;
    case CrcKind::Proj:   // CC-ProjL
      return projC(s->g, s->label, composeRaw(s->c1, t));
    case CrcKind::Inj:
      if (t->kind == CrcKind::IdDyn) return s;  // CC-InjId
      if (t->kind == CrcKind::Proj) {
        if (typeEq(s->g, t->g)) return composeRaw(s->c1, t->c1);  // CC-Collapse
        return failC(s->g, t->label, t->g);                        // CC-Conflict
      }
      mismatch("injection followed by a non-Dyn coercion");
    case CrcKind::Fail:  // CC-FailL
      return s;
    case CrcKind::Id:
    case CrcKind::Fun:
      break;
  }
  // s is a ground coercion g
  if (t->kind == CrcKind::Fail) return t;  // CC-FailR
  if (t->kind == CrcKind::Inj) return injC(composeRaw(s, t->c1), t->g);  // CC-InjR
  if (s->kind == CrcKind::Id) {
    if (t->kind == CrcKind::Id || t->kind == CrcKind::Fun) return t;  // CC-IdL
    mismatch("identity followed by a Dyn-source coercion");
  }
  if (t->kind == CrcKind::Id) return s;  // CC-IdR
  if (t->kind == CrcKind::Fun) {         // CC-Fun
    if (s->arrow != t->arrow) mismatch("mixed arrows");
    return mkFun(composeRaw(t->c1, s->c1), composeRaw(s->c2, t->c2), s->arrow);
  }
  mismatch("function coercion followed by a Dyn-source coercion");
}

}  // namespace

Coercion idDyn() {
  static const Coercion c = make(CoercionNode{CrcKind::IdDyn, nullptr, nullptr, dynT(), "", nullptr, nullptr});
  return c;
}

Coercion idC(const Type& a) {
  if (a->kind == TypeKind::Dyn) return idDyn();
  return make(CoercionNode{CrcKind::Id, nullptr, nullptr, a, "", nullptr, nullptr});
}

Coercion projC(const Type& g, std::string label, Coercion body) {
  return make(CoercionNode{CrcKind::Proj, g, nullptr, nullptr, std::move(label), std::move(body), nullptr});
}

Coercion injC(Coercion body, const Type& g) {
  return make(CoercionNode{CrcKind::Inj, g, nullptr, nullptr, "", std::move(body), nullptr});
}

Coercion failC(const Type& g, std::string label, const Type& h) {
  return make(CoercionNode{CrcKind::Fail, g, h, nullptr, std::move(label), nullptr, nullptr});
}

Coercion mkFun(Coercion s, Coercion t, TypeKind arrow) {
  if (isIdentity(s) && isIdentity(t))
    return idC(arrowT(arrow, identityType(s), identityType(t)));
  CoercionNode n{CrcKind::Fun, nullptr, nullptr, nullptr, "", std::move(s), std::move(t)};
  n.arrow = arrow;
  return make(std::move(n));
}

Coercion injG(const Type& g) { return injC(idC(g), g); }
Coercion projG(const Type& g, std::string label) { return projC(g, std::move(label), idC(g)); }

bool crcEq(const Coercion& a, const Coercion& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case CrcKind::IdDyn:
      return true;
    case CrcKind::Id:
      return typeEq(a->a, b->a);
    case CrcKind::Proj:
      return typeEq(a->g, b->g) && a->label == b->label && crcEq(a->c1, b->c1);
    case CrcKind::Inj:
      return typeEq(a->g, b->g) && crcEq(a->c1, b->c1);
    case CrcKind::Fun:
      return a->arrow == b->arrow && crcEq(a->c1, b->c1) && crcEq(a->c2, b->c2);
    case CrcKind::Fail:
      return typeEq(a->g, b->g) && a->label == b->label && typeEq(a->h, b->h);
  }
  return false;
}

bool isIdentity(const Coercion& c) { return c->kind == CrcKind::IdDyn || c->kind == CrcKind::Id; }

Type identityType(const Coercion& c) { return c->kind == CrcKind::IdDyn ? dynT() : c->a; }

Stratum classify(const Coercion& c) {
  if (c->kind == CrcKind::Id) {
    return c->a->kind == TypeKind::Dyn ? Stratum::None : Stratum::Ground;
  }
  if (c->kind == CrcKind::Fun) {
    if (!isGroundC(c)) return Stratum::None;
    return isSpaceC(c->c1) && isSpaceC(c->c2) ? Stratum::Ground : Stratum::None;
  }
  if (isIntermediateC(c)) return Stratum::Intermediate;
  if (isSpaceC(c)) return Stratum::Space;
  return Stratum::None;
}

bool isCanonical(const Coercion& c) { return classify(c) != Stratum::None; }

bool isDelayed(const Coercion& c) {
  if (c->kind == CrcKind::Fun) return classify(c) == Stratum::Ground;
  return c->kind == CrcKind::Inj && classify(c) == Stratum::Intermediate;
}

std::pair<Type, Type> coercionType(const Coercion& c) {
  switch (c->kind) {
    case CrcKind::IdDyn:
      return {dynT(), dynT()};
    case CrcKind::Id:
      return {c->a, c->a};
    case CrcKind::Inj: {
      if (!isGround(c->g)) illFormed("injection tag is not a ground type");
      auto [src, tgt] = coercionType(c->c1);
      if (!meet(tgt, c->g)) illFormed("body of G! does not end at G");
      return {src, dynT()};
    }
    case CrcKind::Proj: {
      if (!isGround(c->g)) illFormed("projection tag is not a ground type");
      auto [src, tgt] = coercionType(c->c1);
      if (!meet(src, c->g)) illFormed("body of G?p does not start at G");
      return {dynT(), tgt};
    }
    case CrcKind::Fun: {
      auto [s1, t1] = coercionType(c->c1);
      auto [s2, t2] = coercionType(c->c2);
      return {arrowT(c->arrow, t1, s2), arrowT(c->arrow, s1, t2)};
    }
    case CrcKind::Fail:
      if (!isGround(c->g) || !isGround(c->h)) illFormed("failure tags must be ground types");
      if (typeEq(c->g, c->h)) illFormed("failure with identical tags");
      return {failSource(c->g), holeT()};
  }
  illFormed("unknown node");
}

bool wellFormedAt(const Coercion& c, const Type& source, const Type& target) {
  try {
    auto [s, t] = coercionType(c);
    return meet(s, source).has_value() && meet(t, target).has_value();
  } catch (const CoercionError&) {
    return false;
  }
}

Coercion compose(const Coercion& s, const Coercion& t) {
  auto ts = coercionType(s);
  auto tt = coercionType(t);
  if (!meet(ts.second, tt.first)) mismatch("target of the left coercion differs from source of the right");
  return composeRaw(s, t);
}

std::size_t coercionSize(const Coercion& c) {
  switch (c->kind) {
    case CrcKind::Proj:
    case CrcKind::Inj:
      return 1 + coercionSize(c->c1);
    case CrcKind::Fun:
      return 1 + coercionSize(c->c1) + coercionSize(c->c2);
    default:
      return 1;
  }
}

}  // namespace cforge

#include <random>
#include <string>
#include <vector>

#include "cforge/harness.hpp"

namespace cforge {

namespace {

// Draws are taken directly from the 64-bit engine so that a seed produces
// the same corpus with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::mt19937_64 eng_;
};

Type groundOf(const Type& t) {
  if (t->kind == TypeKind::Fun) return funT(dynT(), dynT());
  return t;
}

struct GlobalSig {
  std::string name;
  Type result;
};

class Generator {
 public:
  Generator(const GenConfig& cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {}

  Program program() {
    Program p;
    Type target = cfg_.targetType ? cfg_.targetType : (rng_.chance(0.6) ? intT() : boolT());
    bool diverge = rng_.chance(cfg_.divergeRate);
    int nglobals = static_cast<int>(rng_.below(static_cast<std::uint64_t>(cfg_.maxGlobals) + 1));
    for (int i = 0; i < nglobals; ++i) globals_.push_back({"g" + std::to_string(i), baseType()});
    for (int i = 0; i < nglobals; ++i) p.defs.push_back(globalDef(i));
    if (diverge) {
      p.defs.push_back({"spinA", mkAbs("n", intT(),
                                       mkCrcApp(mkApp(mkGlobal("spinB"), mkOp(OpKind::Add, mkVar("n"), mkInt(1))),
                                                projG(intT(), label())),
                                       intT())});
      p.defs.push_back({"spinB", mkAbs("n", intT(),
                                       mkCrcApp(mkApp(mkGlobal("spinA"), mkOp(OpKind::Add, mkVar("n"), mkInt(1))),
                                                injG(intT())),
                                       dynT())});
      Term spin = mkApp(mkGlobal("spinA"), mkInt(rng_.between(0, 3)));
      Term other = gen({}, intT(), cfg_.maxDepth / 2);
      if (target->kind == TypeKind::Int)
        p.main = rng_.chance(0.5) ? spin : mkOp(OpKind::Add, other, spin);
      else
        p.main = mkOp(OpKind::Lt, other, spin);
    } else {
      p.main = gen({}, target, cfg_.maxDepth);
    }
    return p;
  }

 private:
  const GenConfig& cfg_;
  Rng rng_;
  std::vector<GlobalSig> globals_;
  bool inGlobalBody_ = false;

  Type baseType() {
    switch (rng_.below(3)) {
      case 0: return intT();
      case 1: return boolT();
      default: return dynT();
    }
  }

  Type randType(int depth) {
    if (depth <= 0 || rng_.chance(0.6)) return baseType();
    Type a = randType(depth - 1);
    return funT(a, randType(depth - 1));
  }

  std::string label() {
    static const char* const kLabels[] = {"p", "q", "r", "l1", "l2"};
    return kLabels[rng_.below(5)];
  }

  std::string binder() {
    static const char* const kNames[] = {"x", "y", "z", "w"};
    return kNames[rng_.below(4)];
  }

  // A type consistent with t: parts replaced by Dyn, or Dyn refined.
  Type consistentVariant(const Type& t) {
    switch (t->kind) {
      case TypeKind::Dyn:
        return rng_.chance(0.5) ? dynT() : randType(1);
      case TypeKind::Fun:
        if (rng_.chance(0.2)) return dynT();
        return funT(consistentVariant(t->a), consistentVariant(t->b));
      default:
        return rng_.chance(0.35) ? dynT() : t;
    }
  }

  // Canonical coercion s : S ~> T for consistent S and T.
  Coercion crc(const Type& s, const Type& t) {
    if (s->kind == TypeKind::Dyn && t->kind == TypeKind::Dyn) {
      if (rng_.chance(0.15)) {
        Type g = groundType();
        return projC(g, label(), injC(idC(g), g));
      }
      return idDyn();
    }
    if (s->kind == TypeKind::Dyn) {
      Type g = groundOf(t);
      std::string l = label();
      return projC(g, l, inter(g, t));
    }
    if (t->kind == TypeKind::Dyn) {
      Type g = groundOf(s);
      return injC(inter(s, g), g);
    }
    return inter(s, t);
  }

  Coercion inter(const Type& s, const Type& t) {
    if (s->kind == TypeKind::Fun) {
      Coercion dom = crc(t->a, s->a);
      return mkFun(dom, crc(s->b, t->b));
    }
    return idC(s);
  }

  Type groundType() {
    switch (rng_.below(3)) {
      case 0: return intT();
      case 1: return boolT();
      default: return funT(dynT(), dynT());
    }
  }

  Type otherGround(const Type& g) {
    for (;;) {
      Type h = groundType();
      if (!typeEq(h, g)) return h;
    }
  }

  Def globalDef(int i) {
    Type r = globals_[i].result;
    TypeEnv env{{"n", intT()}};
    // Only the one recursive call on n - 1 may reach a global, so every
    // definition terminates.
    inGlobalBody_ = true;
    Term base = gen(env, r, 2);
    const GlobalSig& callee = globals_[rng_.below(globals_.size())];
    Term call = mkApp(mkGlobal(callee.name), mkOp(OpKind::Sub, mkVar("n"), mkInt(1)));
    Term rec = convert(call, callee.result, r, env);
    inGlobalBody_ = false;
    Term body = mkIf(mkOp(OpKind::Lt, mkVar("n"), mkInt(1)), base, rec);
    return {globals_[i].name, mkAbs("n", intT(), body, r)};
  }

  // Turns m : from into a term of type to, in tail position when possible.
  Term convert(const Term& m, const Type& from, const Type& to, const TypeEnv& env) {
    if (typeEq(from, to)) {
      if (from->kind != TypeKind::Dyn && rng_.chance(0.3)) {
        Type g = groundOf(from);
        Coercion in = injC(inter(from, g), g);
        std::string l = label();
        return mkCrcApp(mkCrcApp(m, in), projC(g, l, inter(g, from)));
      }
      return m;
    }
    if (consistent(from, to)) return mkCrcApp(m, crc(from, to));
    // Int and Bool: leave tail position.
    if (to->kind == TypeKind::Bool) return mkOp(OpKind::Lt, m, gen(env, intT(), 1));
    Term t = gen(env, intT(), 1);
    return mkIf(m, t, gen(env, intT(), 1));
  }

  Term leaf(const TypeEnv& env, const Type& t) {
    std::vector<std::size_t> vars;
    for (std::size_t i = 0; i < env.size(); ++i) {
      bool shadowed = false;
      for (std::size_t j = i + 1; j < env.size(); ++j)
        if (env[j].first == env[i].first) shadowed = true;
      if (!shadowed && typeEq(env[i].second, t)) vars.push_back(i);
    }
    if (!vars.empty() && rng_.chance(0.6)) return mkVar(env[vars[rng_.below(vars.size())]].first);
    switch (t->kind) {
      case TypeKind::Int:
        return mkInt(rng_.between(-2, 9));
      case TypeKind::Bool:
        return mkBool(rng_.chance(0.5));
      case TypeKind::Dyn: {
        Type s = rng_.chance(0.5) ? intT() : boolT();
        return mkCrcApp(leaf(env, s), injG(s));
      }
      default: {
        std::string x = binder();
        TypeEnv inner = env;
        inner.push_back({x, t->a});
        return mkAbs(x, t->a, leaf(inner, t->b));
      }
    }
  }

  Term gen(const TypeEnv& env, const Type& t, int depth) {
    if (depth <= 0 || rng_.chance(0.2)) return leaf(env, t);
    if (rng_.chance(cfg_.coercionDensity)) {
      if (t->kind != TypeKind::Dyn && rng_.chance(cfg_.wrongTagRate)) {
        // A value tagged with one ground type and projected to another.
        Type want = groundOf(t);
        Type h = otherGround(want);
        Term inner = mkCrcApp(gen(env, h, depth - 1), injG(h));
        return mkCrcApp(inner, crc(dynT(), t));
      }
      Type s = consistentVariant(t);
      Term inner;
      if (s->kind == TypeKind::Dyn && t->kind != TypeKind::Dyn && rng_.chance(0.8)) {
        // Usually the dynamic value carries the tag the projection expects.
        Term m = gen(env, t, depth - 1);
        inner = mkCrcApp(m, crc(t, dynT()));
      } else {
        inner = gen(env, s, depth - 1);
      }
      return mkCrcApp(inner, crc(s, t));
    }
    enum Choice { Op, If, App, Abs, Global };
    std::vector<std::pair<Choice, double>> options;
    if (t->kind == TypeKind::Int || t->kind == TypeKind::Bool) options.push_back({Op, cfg_.opWeight});
    options.push_back({If, cfg_.ifWeight});
    options.push_back({App, cfg_.appWeight});
    if (t->kind == TypeKind::Fun) options.push_back({Abs, cfg_.absWeight * 2});
    if (!globals_.empty() && !inGlobalBody_) options.push_back({Global, cfg_.globalWeight});
    double total = 0;
    for (const auto& o : options) total += o.second;
    double pick = rng_.unit() * total;
    Choice choice = options.back().first;
    for (const auto& o : options) {
      if (pick < o.second) {
        choice = o.first;
        break;
      }
      pick -= o.second;
    }
    switch (choice) {
      case Op: {
        if (t->kind == TypeKind::Int) {
          static const OpKind kOps[] = {OpKind::Add, OpKind::Sub, OpKind::Mul};
          OpKind op = kOps[rng_.below(3)];
          Term l = gen(env, intT(), depth - 1);
          return mkOp(op, l, gen(env, intT(), depth - 1));
        }
        OpKind op = rng_.chance(0.5) ? OpKind::Eq : OpKind::Lt;
        Term l = gen(env, intT(), depth - 1);
        return mkOp(op, l, gen(env, intT(), depth - 1));
      }
      case If: {
        Term c = gen(env, boolT(), depth - 1);
        Term th = gen(env, t, depth - 1);
        return mkIf(c, th, gen(env, t, depth - 1));
      }
      case App: {
        Type a = randType(1);
        Term f = gen(env, funT(a, t), depth - 1);
        return mkApp(f, gen(env, a, depth - 1));
      }
      case Abs: {
        std::string x = binder();
        TypeEnv inner = env;
        inner.push_back({x, t->a});
        return mkAbs(x, t->a, gen(inner, t->b, depth - 1));
      }
      case Global: {
        const GlobalSig& g = globals_[rng_.below(globals_.size())];
        Term call = mkApp(mkGlobal(g.name), mkInt(rng_.between(0, 4)));
        if (consistent(g.result, t)) return typeEq(g.result, t) ? call : mkCrcApp(call, crc(g.result, t));
        return convert(call, g.result, t, env);
      }
    }
    return leaf(env, t);
  }
};

}  // namespace

Program genWellTyped(const GenConfig& cfg) {
  std::string lastError;
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    Generator g(cfg, cfg.seed * 0x9E3779B97F4A7C15ULL + attempt);
    Program p = g.program();
    try {
      Type t = typecheckProgram(p);
      if (cfg.targetType && !typeEq(t, cfg.targetType)) {
        lastError = "generated program has the wrong type";
        continue;
      }
      return annotateProgram(p);
    } catch (const std::exception& e) {
      lastError = e.what();
    }
  }
  throw GenerationExhausted("seed " + std::to_string(cfg.seed) + ": " + lastError);
}

}  // namespace cforge

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cforge/coercion.hpp"
#include "cforge/type.hpp"

namespace cforge {

enum class Dialect { LamS, LamSx };

enum class OpKind { Add, Sub, Mul, Eq, Lt };

// Terms of both calculi in one node type. Which kinds are legal depends on
// the dialect:
//   lamS:  Const Var Global Abs Op App CrcApp CoercedVal Blame If
//   lamSx: Const Var Global Abs2 Op App2 Let Compose CrcAppX CoercedVal
//          CrcLit Blame If
enum class TermKind {
  Const, Var, Global, Abs, Abs2, Op, App, App2, Let, Compose,
  CrcApp, CrcAppX, CoercedVal, CrcLit, Blame, If
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  TermKind kind;
  std::int64_t num = 0;  // Const payload (0/1 for booleans)
  bool isBool = false;
  std::string x;         // Var / Global name, binder, blame label
  std::string k;         // Abs2 continuation binder
  Type tx;               // binder type of Abs / Abs2
  // Abs: codomain; Abs2: continuation source type; App / If: result type.
  // For lamS these are filled by annotate() and read by the translation.
  Type tk;
  Coercion c;            // CrcApp, CoercedVal, CrcLit
  OpKind op = OpKind::Add;
  Term a, b, d;          // children, in evaluation order
};

Term mkInt(std::int64_t n);
Term mkBool(bool b);
Term mkVar(std::string x);
Term mkGlobal(std::string f);
Term mkAbs(std::string x, Type a, Term body, Type codomain = nullptr);
Term mkAbs2(std::string x, Type a, std::string k, Type b, Term body);
Term mkOp(OpKind op, Term l, Term r);
Term mkApp(Term f, Term a, Type ann = nullptr);
Term mkApp2(Term f, Term a, Term k);
Term mkLet(std::string x, Term bound, Term body);
Term mkCompose(Term l, Term r);
Term mkCrcApp(Term m, Coercion s);
Term mkCrcAppX(Term m, Term n);
Term mkCoerced(Term u, Coercion d);
Term mkCrcLit(Coercion s);
Term mkBlame(std::string p);
Term mkIf(Term c, Term t, Term e, Type ann = nullptr);

// Copy of `m` with children replaced (annotations kept).
Term withChildren(const Term& m, Term a, Term b = nullptr, Term d = nullptr);

std::string_view opSymbol(OpKind op);
Type opArgType(OpKind op);
Type opResultType(OpKind op);
// delta; wraps on overflow so both evaluators agree bit for bit.
Term delta(OpKind op, const Term& l, const Term& r);

bool isUncoercedValue(const Term& m);  // constants, abstractions, globals, coercion literals
bool isValue(const Term& m);           // plus variables and U<<d>>

std::size_t termSize(const Term& m);

struct Def {
  std::string name;
  Term fn;  // Abs (lamS) or Abs2 (lamSx) with declared annotations
};

struct Program {
  Dialect dialect = Dialect::LamS;
  std::vector<Def> defs;
  Term main;

  const Def* find(std::string_view name) const;
  Type globalType(std::string_view name) const;
};

struct StuckError : std::runtime_error {
  std::vector<int> path;
  StuckError(const std::string& what, std::vector<int> p)
      : std::runtime_error(what), path(std::move(p)) {}
};

// Raised by both typecheckers. `rule` names the typing rule that failed;
// `code` is TypeError or EscapedTyVar.
struct TypeError : std::runtime_error {
  std::string rule;
  std::string code;
  std::vector<int> path;
  TypeError(std::string r, const std::string& what, std::vector<int> p = {},
            std::string c = "TypeError")
      : std::runtime_error(what), rule(std::move(r)), code(std::move(c)), path(std::move(p)) {}
};

// Fresh names for capture avoidance and continuation binders. Explicit so
// that concurrent runs never share a counter.
class NameSupply {
 public:
  explicit NameSupply(std::string prefix = "v") : prefix_(std::move(prefix)) {}
  std::string fresh();
  void avoid(const std::string& name) { taken_[name] = true; }

 private:
  std::string prefix_;
  std::uint64_t next_ = 0;
  std::map<std::string, bool> taken_;
};

void collectNames(const Term& m, std::map<std::string, bool>& out);
void freeVars(const Term& m, std::map<std::string, int>& out);

// Capture-avoiding simultaneous substitution of values.
Term substitute(const Term& m, const std::vector<std::pair<std::string, Term>>& binds, NameSupply& names);
Term substitute(const Term& m, const std::string& x, const Term& v, NameSupply& names);

struct StepResult {
  enum class Status { Stepped, Value, Blame };
  Status status = Status::Value;
  char kind = 'e';       // e or c, when stepped
  std::string rule;
  Term next;             // the reduct, or the value itself
  std::string label;     // blame label
  std::vector<int> path; // child indices from the root to the redex
};

using StepObserver = std::function<void(const Term& before, const StepResult& r)>;

enum class OutcomeKind { Value, Blamed, OutOfFuel };

struct Outcome {
  OutcomeKind kind = OutcomeKind::Value;
  Term value;
  std::string label;
  std::uint64_t steps = 0;
};

}  // namespace cforge

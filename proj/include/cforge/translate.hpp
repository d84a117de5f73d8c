#pragma once

#include "cforge/term.hpp"

namespace cforge {

// Coercion-passing translation from annotated lamS terms to lamSx terms.
// Continuation binders are drawn from a supply that avoids every name in
// the source program, so they never clash with term variables.
struct Translator {
  const Program& source;
  bool optTrOp = false;  // drop <id> around primitive results when the continuation is id

  Translator(const Program& p, bool opt = false);

  Type psi(const Type& a) const;
  Coercion psi(const Coercion& s) const;
  Term value(const Term& v);
  Term K(const Term& m, const Term& k);
  Term C(const Term& m);

  // Fresh binder supply; restarted for each definition and for the main
  // term so that names are stable under unrelated edits.
  void restart();

 private:
  std::map<std::string, bool> used_;
  NameSupply kappa_;
};

Type transType(const Type& a);
Coercion transCoercion(const Coercion& s);
// `p` must be annotated (see annotateProgram).
Program transProgram(const Program& p, bool optTrOp = false);
// C[[m]] in the context of program `p`, with a fresh binder supply.
Term transTerm(const Program& p, const Term& m, bool optTrOp = false);

}  // namespace cforge

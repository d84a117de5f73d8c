#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cforge/term.hpp"

namespace cforge {

struct ParseError : std::runtime_error {
  int line = 0;  // 1-based
  int col = 0;   // 1-based
  std::vector<std::string> expected;
  std::string found;
  ParseError(int l, int c, std::vector<std::string> exp, std::string f, const std::string& detail = "");
};

// Dialect from a file name: .lamsx is lamSx, everything else lamS.
Dialect dialectForPath(std::string_view path);

// A program is `letrec f (x:T) : T = M and ... in M` (lamS),
// `letrec f (x:T, k:T) = M and ... in M` (lamSx), or just a term. Free
// variables naming a definition become global references.
Program parseProgram(std::string_view text, Dialect d);
Term parseTerm(std::string_view text, Dialect d);
Type parseType(std::string_view text);
Coercion parseCoercion(std::string_view text);

std::string printType(const Type& t);
// With sugar, id{G};G! prints as G! and G?^p;id{G} as G?^p.
std::string printCoercion(const Coercion& c, bool sugar = true);
std::string printTerm(const Term& m, bool sugar = true);
std::string printProgram(const Program& p, bool sugar = true);

// Alpha-equivalence. Ignores the inferred annotations on lamS App / If /
// Abs nodes; compares declared binder types.
bool alphaEq(const Term& a, const Term& b);
bool alphaEqProgram(const Program& a, const Program& b);

}  // namespace cforge

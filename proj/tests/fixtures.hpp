#pragma once

#include <string>
#include <vector>

#include "cforge/harness.hpp"
#include "cforge/surface.hpp"
#include "cforge/translate.hpp"

namespace fixtures {

using namespace cforge;

// ---- programs -------------------------------------------------------------

inline const char* const kWrapped = "((\\x:Dyn. (x<Int?^p> + 2)<Int!>)<Int! -> Int?^p> 3)<Int!>";

inline const char* const kUx = "(\\ (x:Dyn, k:Dyn). let k1 = Int! ;; k in (x<Int?^p> + 2)<k1>)";

inline std::string withU(const std::string& pattern) {
  std::string out;
  for (char c : pattern) {
    if (c == '@') out += kUx;
    else out += c;
  }
  return out;
}

inline const std::string kWrappedX = withU("(@<Int! => Int?^p>) (3, Int!)");
// C[[(U<Int! -> Int?^p>) 3]] for the unwrapped application.
inline const char* const kUnwrapped = "(\\x:Dyn. (x<Int?^p> + 2)<Int!>)<Int! -> Int?^p> 3";
inline const std::string kUnwrappedX = withU("(@<Int! => Int?^p>) (3, id{Int})");

inline Program lams(const std::string& text) {
  Program p = parseProgram(text, Dialect::LamS);
  typecheckProgram(p);
  return annotateProgram(p);
}

inline Program lamsx(const std::string& text) {
  Program p = parseProgram(text, Dialect::LamSx);
  typecheckProgramX(p);
  return p;
}

// ---- expected traces ------------------------------------------------------

struct Expected {
  std::string rule;
  std::string term;
};

// Every step from the wrapped function applied to 3, in order.
inline const std::vector<Expected> kWrappedTrace = {
    {"R-Crc", "(((\\x:Dyn. (x<Int?^p> + 2)<Int!>)<<Int! -> Int?^p>>) 3)<Int!>"},
    {"R-Wrap", "((\\x:Dyn. (x<Int?^p> + 2)<Int!>) (3<Int!>))<Int?^p><Int!>"},
    {"R-MergeC", "((\\x:Dyn. (x<Int?^p> + 2)<Int!>) (3<Int!>))<Int?^p;Int!>"},
    {"R-Crc", "((\\x:Dyn. (x<Int?^p> + 2)<Int!>) (3<<Int!>>))<Int?^p;Int!>"},
    {"R-Beta", "(3<<Int!>><Int?^p> + 2)<Int!><Int?^p;Int!>"},
    {"R-MergeC", "(3<<Int!>><Int?^p> + 2)<Int!>"},
    {"R-MergeV", "(3<id{Int}> + 2)<Int!>"},
    {"R-Id", "(3 + 2)<Int!>"},
    {"R-Op", "5<Int!>"},
    {"R-Crc", "5<<Int!>>"},
};

// Expected states of the coercion-passing form, matched as an ordered
// subsequence of the trace. R-MergeV and its R-Cmp are separate steps.
inline const std::vector<Expected> kWrappedXStates = {
    {"R-Crc", withU("(@<<Int! => Int?^p>>) (3, Int!)")},
    {"R-Wrap", withU("let kw = Int?^p ;; Int! in @ (3<Int!>, kw)")},
    {"R-Cmp", withU("let kw = Int?^p;Int! in @ (3<Int!>, kw)")},
    {"R-Let", withU("@ (3<Int!>, Int?^p;Int!)")},
    {"R-Crc", withU("@ (3<<Int!>>, Int?^p;Int!)")},
    {"R-Beta", "let k1 = Int! ;; Int?^p;Int! in (3<<Int!>><Int?^p> + 2)<k1>"},
    {"R-Cmp", "let k1 = Int! in (3<<Int!>><Int?^p> + 2)<k1>"},
    {"R-Let", "(3<<Int!>><Int?^p> + 2)<Int!>"},
    {"R-Cmp", "(3<id{Int}> + 2)<Int!>"},
    {"R-Id", "(3 + 2)<Int!>"},
    {"R-Op", "5<Int!>"},
    {"R-Crc", "5<<Int!>>"},
};

// States reached from `odd 4` in lamS. A rule
// marks a state reached in exactly one step from the previous one.
inline const std::vector<Expected> kEvenOddLams = {
    {"", "(even 3)<Bool?^p>"},
    {"", "(odd (3 - 1))<Bool!><Bool?^p>"},
    {"R-MergeC", "(odd (3 - 1))<id{Bool}>"},
    {"R-Op", "(odd 2)<id{Bool}>"},
    {"", "(even (2 - 1))<Bool?^p><id{Bool}>"},
    {"R-MergeC", "(even (2 - 1))<Bool?^p>"},
    {"R-Op", "(even 1)<Bool?^p>"},
};

// States reached from `odd (4, id{Bool})`, after inlining
// continuation lets and dropping <id> around primitive results.
inline const std::vector<std::string> kEvenOddLamsx = {
    "even (4 - 1, Bool?^p ;; id{Bool})",
    "even (4 - 1, Bool?^p)",
    "even (3, Bool?^p)",
    "odd (3 - 1, Bool! ;; Bool?^p)",
    "odd (3 - 1, id{Bool})",
    "odd (2, id{Bool})",
    "even (2 - 1, Bool?^p ;; id{Bool})",
    "even (2 - 1, Bool?^p)",
    "even (1, Bool?^p)",
};

// ---- composition table ----------------------------------------------------

struct CompositionCase {
  const char* rule;  // "example" for the worked examples with Int and Bool
  const char* left;
  const char* right;
  const char* expected;
};

inline const std::vector<CompositionCase> kCompositionTable = {
    {"example", "Bool!", "Bool?^p", "id{Bool}"},
    {"example", "(Dyn -> Dyn)!", "Int?^p", "bot{(Dyn -> Dyn), p, Int}"},
    {"example", "Int?^p -> Bool!", "Int! -> id{Dyn}", "id{Int} -> Bool!"},
    {"example", "Int?^p", "Int!", "Int?^p;Int!"},
    {"example", "Int!", "Int?^p;Int!", "Int!"},
    {"CC-IdDynL", "id{Dyn}", "Int?^p", "Int?^p"},
    {"CC-IdDynL", "id{Dyn}", "Bool?^q;Bool!", "Bool?^q;Bool!"},
    {"CC-ProjL", "Int?^p", "Int!", "Int?^p;Int!"},
    {"CC-ProjL", "(Dyn -> Dyn)?^p;(Int! -> Int?^q)", "Int?^r -> Int!",
     "(Dyn -> Dyn)?^p;((Int?^r;Int!) -> (Int?^q;Int!))"},
    {"CC-InjId", "Int!", "id{Dyn}", "Int!"},
    {"CC-InjId", "(Int?^q -> Int!);(Dyn -> Dyn)!", "id{Dyn}", "(Int?^q -> Int!);(Dyn -> Dyn)!"},
    {"CC-Collapse", "Int!", "Int?^p", "id{Int}"},
    {"CC-Collapse", "Int!", "Int?^p;Int!", "Int!"},
    {"CC-Collapse", "(Int?^q -> Int!);(Dyn -> Dyn)!", "(Dyn -> Dyn)?^p;(Int! -> Int?^r)", "id{(Int -> Int)}"},
    {"CC-Collapse", "(Bool?^q -> Int!);(Dyn -> Dyn)!", "(Dyn -> Dyn)?^p;(Int! -> Int?^r)",
     "bot{Int, q, Bool} -> id{Int}"},
    {"CC-FailL", "bot{Int, p, Bool}", "Bool!", "bot{Int, p, Bool}"},
    {"CC-FailL", "bot{Int, p, Bool}", "id{Dyn}", "bot{Int, p, Bool}"},
    {"CC-Conflict", "Int!", "Bool?^p", "bot{Int, p, Bool}"},
    {"CC-Conflict", "Bool!", "(Dyn -> Dyn)?^q;(Int! -> Int?^r)", "bot{Bool, q, (Dyn -> Dyn)}"},
    {"CC-FailR", "id{Int}", "bot{Int, p, Bool}", "bot{Int, p, Bool}"},
    {"CC-FailR", "Int?^q -> Int!", "bot{(Dyn -> Dyn), p, Int}", "bot{(Dyn -> Dyn), p, Int}"},
    {"CC-InjR", "id{Int}", "Int!", "Int!"},
    {"CC-InjR", "Int?^q -> Int!", "(Dyn -> Dyn)!", "(Int?^q -> Int!);(Dyn -> Dyn)!"},
    {"CC-IdL", "id{Int}", "id{Int}", "id{Int}"},
    {"CC-IdL", "id{(Dyn -> Dyn)}", "Int! -> Int?^p", "Int! -> Int?^p"},
    {"CC-IdR", "Int! -> Int?^p", "id{(Int -> Int)}", "Int! -> Int?^p"},
    {"CC-IdR", "Bool!", "id{Dyn}", "Bool!"},
    {"CC-Fun", "Int! -> Int?^p", "Int?^q -> Int!", "(Int?^q;Int!) -> (Int?^p;Int!)"},
    {"CC-Fun", "Int?^q -> Int!", "Int! -> Int?^p", "id{(Int -> Int)}"},
    {"CC-Fun", "Int?^q => Int!", "Int! => Int?^p", "id{(Int => Int)}"},
};

// Empty when the case holds, otherwise a description of the mismatch.
inline std::string checkComposition(const CompositionCase& c) {
  try {
    Coercion got = compose(parseCoercion(c.left), parseCoercion(c.right));
    Coercion want = parseCoercion(c.expected);
    if (crcEq(got, want) && printCoercion(got) == printCoercion(want) && isCanonical(got)) return "";
    return std::string(c.left) + " ; " + c.right + " gave " + printCoercion(got) + ", expected " + c.expected;
  } catch (const std::exception& e) {
    return std::string(c.left) + " ; " + c.right + " threw " + e.what();
  }
}

// ---- matchers -------------------------------------------------------------

// Checks kEvenOddLams against a lamS trace: states appear in order, and
// states carrying a rule follow their predecessor directly by that rule.
inline bool matchEvenOddLams(const Trace& t, std::string* why) {
  std::size_t at = 0;
  for (std::size_t i = 0; i < kEvenOddLams.size(); ++i) {
    const Expected& e = kEvenOddLams[i];
    if (!e.rule.empty() && i > 0) {
      if (at >= t.steps.size() || t.steps[at].rule != e.rule || printTerm(t.steps[at].term) != e.term) {
        if (why) *why = "state " + std::to_string(i + 1) + " is not one " + e.rule + " step after its predecessor";
        return false;
      }
      ++at;
      continue;
    }
    while (at < t.steps.size() && printTerm(t.steps[at].term) != e.term) ++at;
    if (at == t.steps.size()) {
      if (why) *why = "state " + std::to_string(i + 1) + " not reached: " + e.term;
      return false;
    }
    ++at;
  }
  return true;
}

inline bool matchEvenOddLamsx(const Trace& t, std::string* why) {
  std::size_t at = 0;
  for (std::size_t i = 0; i < kEvenOddLamsx.size(); ++i) {
    while (at < t.steps.size() && printTerm(displayNormalize(t.steps[at].term)) != kEvenOddLamsx[i]) ++at;
    if (at == t.steps.size()) {
      if (why) *why = "state " + std::to_string(i + 1) + " not reached: " + kEvenOddLamsx[i];
      return false;
    }
    ++at;
  }
  return true;
}

inline bool matchWrapped(const Trace& t, std::string* why) {
  if (t.steps.size() != kWrappedTrace.size()) {
    if (why) *why = "expected " + std::to_string(kWrappedTrace.size()) + " steps, got " + std::to_string(t.steps.size());
    return false;
  }
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    std::string got = printTerm(t.steps[i].term);
    if (t.steps[i].rule != kWrappedTrace[i].rule || got != kWrappedTrace[i].term) {
      if (why) *why = "step " + std::to_string(i + 1) + ": " + t.steps[i].rule + " " + got;
      return false;
    }
  }
  return true;
}

inline bool matchWrappedX(const Trace& t, std::string* why) {
  std::size_t at = 0;
  for (std::size_t i = 0; i < kWrappedXStates.size(); ++i) {
    Term want = parseTerm(kWrappedXStates[i].term, Dialect::LamSx);
    while (at < t.steps.size() &&
           !(t.steps[at].rule == kWrappedXStates[i].rule && alphaEq(t.steps[at].term, want)))
      ++at;
    if (at == t.steps.size()) {
      if (why) *why = "state " + std::to_string(i + 1) + " (" + kWrappedXStates[i].rule + ") not reached";
      return false;
    }
    ++at;
  }
  return true;
}

}  // namespace fixtures

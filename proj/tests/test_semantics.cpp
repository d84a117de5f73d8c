#include "doctest.h"

#include "cforge/lams.hpp"
#include "cforge/lamsx.hpp"
#include "fixtures.hpp"

using namespace cforge;
using fixtures::lams;
using fixtures::lamsx;

namespace {

std::string typeOf(const std::string& text, Dialect d) {
  Program p = parseProgram(text, d);
  return printType(d == Dialect::LamS ? typecheckProgram(p) : typecheckProgramX(p));
}

std::string failingRule(const std::string& text, Dialect d) {
  Program p = parseProgram(text, d);
  try {
    if (d == Dialect::LamS) typecheckProgram(p);
    else typecheckProgramX(p);
  } catch (const TypeError& e) {
    return e.rule;
  }
  return "";
}

}  // namespace

TEST_CASE("lamS typing") {
  CHECK(typeOf("\\x:Int. x + 1", Dialect::LamS) == "Int -> Int");
  CHECK(typeOf(fixtures::kWrapped, Dialect::LamS) == "Dyn");
  CHECK(typeOf("3<Int!><Int?^p>", Dialect::LamS) == "Int");
  CHECK(typeOf("if true then 1 else blame p", Dialect::LamS) == "Int");
  CHECK(failingRule("3 + true", Dialect::LamS) == "T-Op");
  CHECK(failingRule("(\\x:Int. x) true", Dialect::LamS) == "T-App");
  CHECK(failingRule("3 4", Dialect::LamS) == "T-App");
  CHECK(failingRule("3<Bool!>", Dialect::LamS) == "T-Crc");
  CHECK(failingRule("if 1 then 2 else 3", Dialect::LamS) == "T-If");
  CHECK(failingRule("if true then 2 else false", Dialect::LamS) == "T-If");
  CHECK(failingRule("x", Dialect::LamS) == "T-Var");
  CHECK(failingRule("letrec f (x:Int) : Bool = x in f 1", Dialect::LamS) == "T-Abs");
}

TEST_CASE("lamSx typing") {
  CHECK(typeOf("\\ (x:Int, k:Int). (x + 1)<k>", Dialect::LamSx) == "Int => Int");
  CHECK(typeOf(fixtures::kWrappedX, Dialect::LamSx) == "Dyn");
  CHECK(typeOf("Int! ;; Int?^p", Dialect::LamSx) == "Int ~> Int");
  CHECK(typeOf("let k = Int! in 3<k>", Dialect::LamSx) == "Dyn");
  CHECK(failingRule("\\ (x:Int, k:Int). x + 1", Dialect::LamSx) == "T-Abs");
  CHECK(failingRule("(\\ (x:Int, k:Int). x<k>) (true, id{Int})", Dialect::LamSx) == "T-App");
  CHECK(failingRule("Int! ;; Int!", Dialect::LamSx) != "");
  CHECK(failingRule("3<Bool!>", Dialect::LamSx) != "");
}

TEST_CASE("the wrapped function reduces step for step") {
  Trace t = traceProgram(lams(fixtures::kWrapped), 1000);
  std::string why;
  CHECK_MESSAGE(fixtures::matchWrapped(t, &why), why);
  REQUIRE(t.outcome.kind == OutcomeKind::Value);
  CHECK(printTerm(t.outcome.value) == "5<<Int!>>");
  std::string kinds;
  for (const auto& s : t.steps) kinds += s.kind;
  CHECK(kinds == "ceccecccec");
}

TEST_CASE("the coercion-passing wrapped function passes through the expected states") {
  Trace t = traceProgram(lamsx(fixtures::kWrappedX), 1000);
  std::string why;
  CHECK_MESSAGE(fixtures::matchWrappedX(t, &why), why);
  REQUIRE(t.outcome.kind == OutcomeKind::Value);
  CHECK(printTerm(t.outcome.value) == "5<<Int!>>");
}

TEST_CASE("blame and abort") {
  Program p = lams("(if (3<Int!>)<Bool?^q> then 1 else 0) + 1");
  Outcome o = evaluate(p, p.main, 100);
  CHECK(o.kind == OutcomeKind::Blamed);
  CHECK(o.label == "q");
  Program x = lamsx("if (3<Int!>)<Bool?^q> then 1 else 0");
  Outcome ox = evaluateX(x, x.main, 100);
  CHECK(ox.kind == OutcomeKind::Blamed);
  CHECK(ox.label == "q");
}

TEST_CASE("fuel runs out on divergence") {
  Program p = lams(
      "letrec spinA (n:Int) : Int = (spinB (n + 1))<Int?^l> "
      "and spinB (n:Int) : Dyn = (spinA (n + 1))<Int!> in spinA 0");
  Outcome o = evaluate(p, p.main, 500);
  CHECK(o.kind == OutcomeKind::OutOfFuel);
  CHECK(o.steps == 500);
  CHECK(maxCoercionSize(p.main) <= 2);
}

TEST_CASE("step agrees with the decomposition oracle") {
  for (const char* text : {fixtures::kWrapped, "(\\f:Int -> Int. f 1) ((\\x:Int. x + 1)<Int?^q -> Int!><Int! -> Int?^p>)",
                           "if 1 < 2 then (3<Int!>)<Int?^q> else 4"}) {
    Program p = lams(text);
    Term cur = p.main;
    NameSupply names = supplyFor(p, cur);
    for (int i = 0; i < 100; ++i) {
      StepResult r = step(p, cur, names);
      Decomposition d = decomposeOracle(p, cur);
      if (r.status != StepResult::Status::Stepped) {
        CHECK(d.kind != Decomposition::Kind::Redex);
        break;
      }
      REQUIRE(d.kind == Decomposition::Kind::Redex);
      CHECK(d.path == r.path);
      CHECK(d.rule == r.rule);
      cur = r.next;
    }
  }
  Program x = lamsx(fixtures::kWrappedX);
  Term cur = x.main;
  NameSupply names = supplyFor(x, cur);
  for (int i = 0; i < 100; ++i) {
    StepResult r = stepX(x, cur, names);
    if (r.status != StepResult::Status::Stepped) break;
    Decomposition d = decomposeOracleX(x, cur);
    CHECK(d.path == r.path);
    CHECK(d.rule == r.rule);
    cur = r.next;
  }
}

TEST_CASE("invariants along the wrapped-function trace") {
  Program p = lams(fixtures::kWrapped);
  Term cur = p.main;
  NameSupply names = supplyFor(p, cur);
  for (;;) {
    StepResult r = step(p, cur, names);
    if (r.status != StepResult::Status::Stepped) break;
    if (r.kind == 'e') CHECK_FALSE(adjacentCoercionsOnPath(cur, r.path));
    if (r.kind == 'c') CHECK(metricF(r.next) < metricF(cur));
    CHECK(coercionsCanonical(r.next));
    CHECK(valuesHaveOneLayer(r.next));
    cur = r.next;
  }
}

TEST_CASE("substitution avoids capture") {
  NameSupply names("v");
  Term m = parseTerm("\\y:Int. x + y", Dialect::LamS);
  Term r = substitute(m, "x", mkVar("y"), names);
  CHECK(alphaEq(r, parseTerm("\\z:Int. y + z", Dialect::LamS)));
}

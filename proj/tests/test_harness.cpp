#include "doctest.h"

#include "cforge/harness.hpp"
#include "fixtures.hpp"

using namespace cforge;
using fixtures::lams;

TEST_CASE("differential run on a value, a blame and a divergent program") {
  Verdict v = differentialRun(lams(std::string(fixtures::kWrapped) + "<Int?^q>"), 1000);
  CHECK(v.ok());
  CHECK(v.left.kind == OutcomeKind::Value);
  CHECK(v.left.value == "5");
  CHECK(v.right.value == "5");

  Verdict b = differentialRun(lams("if (3<Int!>)<Bool?^q> then 1 else 0"), 1000);
  CHECK(b.ok());
  CHECK(b.left.kind == OutcomeKind::Blamed);
  CHECK(b.left.value == "q");

  Verdict d = differentialRun(lams("letrec spinA (n:Int) : Int = (spinB (n + 1))<Int?^l> "
                                   "and spinB (n:Int) : Dyn = (spinA (n + 1))<Int!> in spinA 0"),
                              1000);
  CHECK(d.ok());
  CHECK(d.left.kind == OutcomeKind::OutOfFuel);
  CHECK(d.right.kind == OutcomeKind::OutOfFuel);
}

TEST_CASE("verdicts serialise with a stable field order") {
  Verdict v = differentialRun(lams("1 + 2"), 100);
  std::string s = v.toJson().dump();
  CHECK(s.rfind("{\"record\":\"verdict\",\"check\":\"differential\",\"seed\":0,\"verdict\":\"Agree\"", 0) == 0);
  CHECK(s.find("\"left\"") < s.find("\"right\""));
  CHECK(s == differentialRun(lams("1 + 2"), 100).toJson().dump());
}

TEST_CASE("generation is reproducible and well typed") {
  for (std::uint64_t seed : {0ull, 7ull, 123ull, 999ull}) {
    GenConfig cfg;
    cfg.seed = seed;
    Program a = genWellTyped(cfg);
    Program b = genWellTyped(cfg);
    CHECK(printProgram(a) == printProgram(b));
    Type t = typecheckProgram(a);
    CHECK((t->kind == TypeKind::Int || t->kind == TypeKind::Bool));
  }
  GenConfig cfg;
  cfg.seed = 5;
  cfg.targetType = boolT();
  CHECK(typeEq(typecheckProgram(genWellTyped(cfg)), boolT()));
}

TEST_CASE("corpus runs do not depend on the thread count") {
  CorpusOptions opt;
  opt.firstSeed = 0;
  opt.lastSeed = 39;
  opt.simulation = opt.invariants = opt.typing = true;
  std::vector<std::string> one, many;
  opt.threads = 1;
  CorpusSummary a = runCorpus(opt, [&](const Verdict& v) { one.push_back(v.toJson().dump()); });
  opt.threads = 4;
  CorpusSummary b = runCorpus(opt, [&](const Verdict& v) { many.push_back(v.toJson().dump()); });
  CHECK(one == many);
  CHECK(a.programs == 40);
  CHECK(a.values + a.blames + a.fuelOuts == 40);
  CHECK(a.failures.empty());
  CHECK(b.values == a.values);
}

TEST_CASE("invariant suite is clean on the wrapped function and even/odd") {
  InvariantStats st;
  CHECK(invariantSuite(lams(fixtures::kWrapped), 1000, st).empty());
  CHECK(st.lamsSteps == 10);
  CHECK(st.lamsxSteps == 13);
  CHECK(invariantSuite(evenOddProgram(6), 10000).empty());
}

TEST_CASE("even/odd traces pass through the expected states") {
  std::string why;
  Trace left = traceProgram(evenOddProgram(4), 10000);
  CHECK_MESSAGE(fixtures::matchEvenOddLams(left, &why), why);
  CHECK(printTerm(left.start) == "odd 4");
  CHECK(printTerm(left.outcome.value) == "false");
  for (bool opt : {false, true}) {
    Trace right = traceProgram(transProgram(evenOddProgram(4), opt), 10000);
    CHECK_MESSAGE(fixtures::matchEvenOddLamsx(right, &why), why);
    CHECK(printTerm(right.start) == "odd (4, id{Bool})");
  }
}

TEST_CASE("space stays constant for even/odd") {
  for (Dialect d : {Dialect::LamS, Dialect::LamSx}) {
    SpaceReport small = spaceBench(10, d, 1000000);
    SpaceReport big = spaceBench(2000, d, 1000000);
    CHECK(small.maxCoercionSize == big.maxCoercionSize);
    CHECK(small.maxTermSize == big.maxTermSize);
    CHECK(small.outcome == "false");
    CHECK(big.outcome == "false");
    CHECK(big.steps > small.steps);
  }
}

TEST_CASE("trace lines") {
  std::vector<std::string> lines = traceLines(traceProgram(lams(fixtures::kWrapped), 100));
  REQUIRE(lines.size() == 11);
  CHECK(lines[0] == "step 1 c R-Crc: " + fixtures::kWrappedTrace[0].term);
  CHECK(lines.back() == "5<<Int!>>");
  std::vector<std::string> blamed = traceLines(traceProgram(lams("(3<Int!>)<Bool?^q>"), 100));
  CHECK(blamed.back() == "blame q");
  std::vector<std::string> out = traceLines(traceProgram(evenOddProgram(100), 5));
  CHECK(out.back() == "out of fuel");
}

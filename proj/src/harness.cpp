#include "cforge/harness.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "cforge/surface.hpp"
#include "cforge/translate.hpp"

namespace cforge {

using Status = StepResult::Status;

namespace {

const char* outcomeName(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Value: return "value";
    case OutcomeKind::Blamed: return "blame";
    default: return "fuel";
  }
}

nlohmann::ordered_json runJson(const RunResult& r) {
  nlohmann::ordered_json j;
  j["outcome"] = outcomeName(r.kind);
  j["value"] = r.value;
  j["steps"] = r.steps;
  return j;
}

std::string observable(const Term& v) {
  if (v->kind == TermKind::Const) return printTerm(v);
  if (v->kind == TermKind::CoercedVal && v->a->kind == TermKind::Const) return printTerm(v);
  return "<function>";
}

Verdict violation(std::string check, std::string name, const Program& p, std::int64_t step, std::string detail) {
  Verdict v;
  v.kind = Verdict::Kind::InvariantViolation;
  v.check = std::move(check);
  v.name = std::move(name);
  v.stepIndex = step;
  v.detail = std::move(detail);
  v.witness = printProgram(p);
  return v;
}

bool sameRun(const RunResult& a, const RunResult& b) { return a.kind == b.kind && a.value == b.value; }

}  // namespace

RunResult toRunResult(const Outcome& o) {
  RunResult r;
  r.kind = o.kind;
  r.steps = o.steps;
  if (o.kind == OutcomeKind::Value) r.value = observable(o.value);
  if (o.kind == OutcomeKind::Blamed) r.value = o.label;
  return r;
}

std::string describe(const RunResult& r) {
  switch (r.kind) {
    case OutcomeKind::Value: return r.value;
    case OutcomeKind::Blamed: return "blame " + r.value;
    default: return "out of fuel";
  }
}

nlohmann::ordered_json Verdict::toJson() const {
  nlohmann::ordered_json j;
  j["record"] = "verdict";
  j["check"] = check;
  j["seed"] = seed;
  switch (kind) {
    case Kind::Agree: j["verdict"] = "Agree"; break;
    case Kind::Disagree: j["verdict"] = "Disagree"; break;
    case Kind::InvariantViolation: j["verdict"] = "InvariantViolation"; break;
  }
  if (check == "differential") {
    j["left"] = runJson(left);
    j["right"] = runJson(right);
  }
  if (kind == Kind::InvariantViolation) {
    j["name"] = name;
    j["step"] = stepIndex;
  }
  if (!detail.empty()) j["detail"] = detail;
  if (!ok()) j["witness"] = witness;
  return j;
}

nlohmann::ordered_json SpaceReport::toJson() const {
  nlohmann::ordered_json j;
  j["record"] = "space";
  j["n"] = n;
  j["dialect"] = dialect;
  j["steps"] = steps;
  j["maxCoercionSize"] = maxCoercionSize;
  j["maxTermSize"] = maxTermSize;
  j["maxMetricF"] = maxMetricF;
  j["outcome"] = outcome;
  return j;
}

// ---- differential ---------------------------------------------------------

Verdict differentialRun(const Program& p, std::uint64_t fuel, bool optTrOp) {
  Verdict v;
  v.check = "differential";
  v.left = toRunResult(evaluate(p, p.main, fuel));
  Program x = transProgram(p, optTrOp);
  v.right = toRunResult(evaluateX(x, x.main, fuel * 10));
  if (!sameRun(v.left, v.right)) {
    v.kind = Verdict::Kind::Disagree;
    v.detail = "lamS: " + describe(v.left) + "; lamSx: " + describe(v.right);
    v.witness = printProgram(p);
  }
  return v;
}

// ---- simulation -----------------------------------------------------------

Verdict simulationCheck(const Program& p, std::uint64_t fuel) {
  constexpr int kMaxAdmin = 512;  // c-steps allowed to reach the image of one lamS step
  Program x = transProgram(p, false);
  NameSupply names = supplyFor(p, p.main);
  Term cur = p.main;
  for (std::uint64_t i = 0; i < fuel; ++i) {
    StepResult r = step(p, cur, names);
    if (r.status != Status::Stepped) break;
    Term from = transTerm(p, cur);
    Term target = transTerm(p, r.next);
    NameSupply xnames = supplyFor(x, from, "kw");
    Term y = from;
    auto fail = [&](const std::string& why) {
      return violation("simulation", "simulation", p, static_cast<std::int64_t>(i),
                       why + " at lamS step " + r.kind + " " + r.rule + ": " + printTerm(cur) + "  ==>  " +
                           printTerm(r.next) + "; lamSx from " + printTerm(from) + " expected " + printTerm(target) +
                           " reached " + printTerm(y));
    };
    bool reached = false;
    if (r.kind == 'e') {
      StepResult s = stepX(x, y, xnames);
      if (s.status != Status::Stepped || s.kind != 'e') return fail("no lamSx e-step");
      y = s.next;
      reached = alphaEq(y, target);
    }
    for (int c = 0; !reached && c < kMaxAdmin; ++c) {
      StepResult s = stepX(x, y, xnames);
      if (s.status != Status::Stepped) break;
      if (s.kind != 'c') return fail("unexpected lamSx e-step " + s.rule);
      y = s.next;
      reached = alphaEq(y, target);
    }
    if (!reached) return fail("translated reduct not reached");
    cur = r.next;
  }
  Verdict v;
  v.check = "simulation";
  return v;
}

// ---- invariants -----------------------------------------------------------

std::vector<Verdict> invariantSuite(const Program& p, std::uint64_t fuel) {
  InvariantStats stats;
  return invariantSuite(p, fuel, stats);
}

std::vector<Verdict> invariantSuite(const Program& p, std::uint64_t fuel, InvariantStats& stats) {
  std::vector<Verdict> out;
  auto report = [&](const std::string& name, std::uint64_t i, const std::string& detail) {
    out.push_back(violation("invariant", name, p, static_cast<std::int64_t>(i), detail));
  };

  // lamS
  {
    Type t0;
    try {
      t0 = typecheck(p, {}, p.main);
    } catch (const std::exception& e) {
      report("lams-typing", 0, e.what());
      return out;
    }
    NameSupply names = supplyFor(p, p.main);
    Term cur = p.main;
    for (std::uint64_t i = 0; i < fuel && out.empty(); ++i) {
      StepResult r = step(p, cur, names);
      Decomposition d;
      try {
        d = decomposeOracle(p, cur);
      } catch (const DecompositionError& e) {
        report("lams-determinacy", i, std::string(e.what()) + ": " + printTerm(cur));
        break;
      }
      if (r.status != Status::Stepped) {
        bool agrees = (r.status == Status::Value && d.kind == Decomposition::Kind::Value) ||
                      (r.status == Status::Blame && d.kind == Decomposition::Kind::Blame);
        if (!agrees) report("lams-determinacy", i, "final-state mismatch: " + printTerm(cur));
        break;
      }
      ++stats.lamsSteps;
      if (d.kind != Decomposition::Kind::Redex || d.path != r.path || d.rule != r.rule)
        report("lams-determinacy", i, "step chose " + r.rule + ", oracle chose " + d.rule + ": " + printTerm(cur));
      if (r.kind == 'e' && adjacentCoercionsOnPath(cur, r.path))
        report("lams-merge", i, "adjacent coercions before " + r.rule + ": " + printTerm(cur));
      try {
        Type t = typecheck(p, {}, r.next);
        if (!instanceOf(t0, t))
          report("lams-preservation", i, "type " + printType(t) + " after " + r.rule + ": " + printTerm(r.next));
      } catch (const std::exception& e) {
        report("lams-preservation", i, std::string(e.what()) + " after " + r.rule + ": " + printTerm(r.next));
      }
      if (!coercionsCanonical(r.next)) report("lams-canonical", i, printTerm(r.next));
      if (!valuesHaveOneLayer(r.next)) report("lams-one-layer", i, printTerm(r.next));
      if (r.kind == 'c' && !(metricF(r.next) < metricF(cur)))
        report("lams-metric", i,
               r.rule + " f=" + std::to_string(metricF(cur)) + " -> " + std::to_string(metricF(r.next)) + ": " +
                   printTerm(cur));
      cur = r.next;
    }
  }
  if (!out.empty()) return out;

  // lamSx
  Program x = transProgram(p, false);
  Type t0;
  try {
    t0 = typecheckX(x, {}, x.main);
  } catch (const std::exception& e) {
    report("lamsx-typing", 0, e.what());
    return out;
  }
  NameSupply names = supplyFor(x, x.main, "kw");
  Term cur = x.main;
  std::uint64_t xfuel = fuel * 10;
  for (std::uint64_t i = 0; i < xfuel && out.empty(); ++i) {
    StepResult r = stepX(x, cur, names);
    Decomposition d;
    try {
      d = decomposeOracleX(x, cur);
    } catch (const DecompositionError& e) {
      report("lamsx-determinacy", i, std::string(e.what()) + ": " + printTerm(cur));
      break;
    }
    if (r.status != Status::Stepped) {
      bool agrees = (r.status == Status::Value && d.kind == Decomposition::Kind::Value) ||
                    (r.status == Status::Blame && d.kind == Decomposition::Kind::Blame);
      if (!agrees) report("lamsx-determinacy", i, "final-state mismatch: " + printTerm(cur));
      break;
    }
    ++stats.lamsxSteps;
    if (d.kind != Decomposition::Kind::Redex || d.path != r.path || d.rule != r.rule)
      report("lamsx-determinacy", i, "step chose " + r.rule + ", oracle chose " + d.rule + ": " + printTerm(cur));
    try {
      Type t = typecheckX(x, {}, r.next);
      if (!instanceOf(t0, t))
        report("lamsx-preservation", i, "type " + printType(t) + " after " + r.rule + ": " + printTerm(r.next));
    } catch (const std::exception& e) {
      report("lamsx-preservation", i, std::string(e.what()) + " after " + r.rule + ": " + printTerm(r.next));
    }
    if (!coercionsCanonical(r.next)) report("lamsx-canonical", i, printTerm(r.next));
    if (!valuesHaveOneLayer(r.next)) report("lamsx-one-layer", i, printTerm(r.next));
    if (r.kind == 'c' && !(metricFX(r.next) < metricFX(cur))) ++stats.lamsxMetricNonDecrease;
    cur = r.next;
  }
  return out;
}

Verdict typingPreservation(const Program& p) {
  Verdict v;
  v.check = "typing";
  try {
    Type a = typecheckProgram(p);
    Program x = transProgram(p, false);
    Type b = typecheckProgramX(x);
    if (!typeEq(b, transType(a))) {
      v = violation("typing", "translation-typing", p, -1,
                    "source type " + printType(a) + ", translated type " + printType(b));
    }
  } catch (const std::exception& e) {
    v = violation("typing", "translation-typing", p, -1, e.what());
  }
  return v;
}

// ---- even/odd ---------------------------------------------------------------

Program evenOddProgram(std::uint64_t n) {
  std::string text =
      "letrec even (x:Int) : Dyn =\n"
      "  if x = 0 then true<Bool!> else (odd (x - 1))<Bool!>\n"
      "and odd (x:Int) : Bool =\n"
      "  if x = 0 then false else (even (x - 1))<Bool?^p>\n"
      "in\n"
      "odd " +
      std::to_string(n) + "\n";
  return annotateProgram(parseProgram(text, Dialect::LamS));
}

SpaceReport measureRun(const Program& p, std::uint64_t fuel, const StepObserver& observe) {
  SpaceReport rep;
  bool x = p.dialect == Dialect::LamSx;
  rep.dialect = x ? "lamsx" : "lams";
  auto account = [&](const Term& m) {
    rep.maxCoercionSize = std::max(rep.maxCoercionSize, maxCoercionSize(m));
    rep.maxTermSize = std::max(rep.maxTermSize, termSize(m));
    rep.maxMetricF = std::max(rep.maxMetricF, x ? metricFX(m) : metricF(m));
  };
  account(p.main);
  StepObserver obs = [&](const Term& before, const StepResult& r) {
    account(r.next);
    if (observe) observe(before, r);
  };
  Outcome o = x ? evaluateX(p, p.main, fuel, obs) : evaluate(p, p.main, fuel, obs);
  rep.steps = o.steps;
  rep.outcome = o.kind == OutcomeKind::Value ? printTerm(o.value) : describe(toRunResult(o));
  rep.kind = o.kind;
  return rep;
}

SpaceReport spaceBench(std::uint64_t n, Dialect dialect, std::uint64_t fuel, const StepObserver& observe,
                       bool optTrOp) {
  Program p = evenOddProgram(n);
  if (dialect == Dialect::LamSx) p = transProgram(p, optTrOp);
  SpaceReport rep = measureRun(p, fuel, observe);
  rep.n = n;
  return rep;
}

// ---- traces -------------------------------------------------------------

Trace traceProgram(const Program& p, std::uint64_t fuel) {
  Trace t;
  t.start = p.main;
  StepObserver obs = [&](const Term&, const StepResult& r) { t.steps.push_back({r.kind, r.rule, r.next}); };
  t.outcome = p.dialect == Dialect::LamSx ? evaluateX(p, p.main, fuel, obs) : evaluate(p, p.main, fuel, obs);
  return t;
}

std::vector<std::string> traceLines(const Trace& t) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const TraceStep& s = t.steps[i];
    out.push_back("step " + std::to_string(i + 1) + " " + s.kind + " " + s.rule + ": " + printTerm(s.term));
  }
  switch (t.outcome.kind) {
    case OutcomeKind::Value: out.push_back(printTerm(t.outcome.value)); break;
    case OutcomeKind::Blamed: out.push_back("blame " + t.outcome.label); break;
    case OutcomeKind::OutOfFuel: out.push_back("out of fuel"); break;
  }
  return out;
}

Term displayNormalize(const Term& m) {
  if (!m) return m;
  Term a = displayNormalize(m->a);
  Term b = displayNormalize(m->b);
  Term d = displayNormalize(m->d);
  if (m->kind == TermKind::Let && (a->kind == TermKind::CrcLit || a->kind == TermKind::Compose)) {
    NameSupply names("nz");
    return displayNormalize(substitute(b, m->x, a, names));
  }
  if (m->kind == TermKind::CrcAppX && a->kind == TermKind::Op && b->kind == TermKind::CrcLit && isIdentity(b->c))
    return a;
  if (m->kind == TermKind::CrcApp && a->kind == TermKind::Op && isIdentity(m->c)) return a;
  return withChildren(m, a, b, d);
}

// ---- corpus -------------------------------------------------------------

namespace {

struct SeedResult {
  bool generated = false;
  std::string generationError;
  OutcomeKind outcome = OutcomeKind::Value;
  std::vector<Verdict> verdicts;
};

SeedResult runSeed(const CorpusOptions& opt, std::uint64_t seed) {
  SeedResult res;
  GenConfig cfg;
  cfg.seed = seed;
  cfg.maxDepth = opt.maxDepth;
  Program p;
  try {
    p = genWellTyped(cfg);
    res.generated = true;
  } catch (const std::exception& e) {
    res.generationError = e.what();
    return res;
  }
  auto add = [&](Verdict v) {
    v.seed = seed;
    res.verdicts.push_back(std::move(v));
  };
  if (opt.differential) {
    Verdict off = differentialRun(p, opt.fuel, false);
    res.outcome = off.left.kind;
    add(off);
    Verdict on = differentialRun(p, opt.fuel, true);
    on.check = "differential-trop";
    add(on);
  }
  if (opt.typing) add(typingPreservation(p));
  if (opt.simulation) add(simulationCheck(p, opt.simulationFuel));
  if (opt.invariants) {
    std::vector<Verdict> vs = invariantSuite(p, opt.simulationFuel);
    if (vs.empty()) {
      Verdict ok;
      ok.check = "invariant";
      add(ok);
    }
    for (auto& v : vs) add(v);
  }
  return res;
}

}  // namespace

CorpusSummary runCorpus(const CorpusOptions& opt, const std::function<void(const Verdict&)>& onVerdict) {
  std::uint64_t count = opt.lastSeed >= opt.firstSeed ? opt.lastSeed - opt.firstSeed + 1 : 0;
  std::vector<SeedResult> results(count);
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      results[i] = runSeed(opt, opt.firstSeed + i);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::uint64_t>(threads, count); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  CorpusSummary sum;
  for (std::uint64_t i = 0; i < count; ++i) {
    const SeedResult& r = results[i];
    if (!r.generated) {
      ++sum.generationFailures;
      Verdict v;
      v.kind = Verdict::Kind::InvariantViolation;
      v.check = v.name = "generation";
      v.detail = r.generationError;
      v.seed = opt.firstSeed + i;
      sum.failures.push_back(v);
      if (onVerdict) onVerdict(v);
      continue;
    }
    ++sum.programs;
    if (opt.differential) {
      if (r.outcome == OutcomeKind::Value) ++sum.values;
      if (r.outcome == OutcomeKind::Blamed) ++sum.blames;
      if (r.outcome == OutcomeKind::OutOfFuel) ++sum.fuelOuts;
    }
    for (const Verdict& v : r.verdicts) {
      if (onVerdict) onVerdict(v);
      if (v.ok()) continue;
      sum.failures.push_back(v);
      if (v.check == "simulation") ++sum.simulationFailures;
      else if (v.check == "invariant") ++sum.invariantViolations;
      else if (v.check == "typing") ++sum.typingFailures;
      else ++sum.disagreements;
    }
  }
  return sum;
}

}  // namespace cforge

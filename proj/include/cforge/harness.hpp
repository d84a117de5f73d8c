#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cforge/lams.hpp"
#include "cforge/lamsx.hpp"
#include "json.hpp"

namespace cforge {

// ---- generation ---------------------------------------------------------

struct GenConfig {
  std::uint64_t seed = 0;
  int maxDepth = 8;
  Type targetType;               // null: Int or Bool chosen by the seed
  double coercionDensity = 0.3;  // chance of wrapping a subterm in a coercion
  double opWeight = 3.0;
  double appWeight = 2.0;
  double absWeight = 1.5;
  double ifWeight = 1.0;
  double globalWeight = 1.0;
  double wrongTagRate = 0.04;    // chance that a dynamic value carries the wrong tag
  double divergeRate = 0.012;    // chance of calling a non-terminating pair of globals
  int maxGlobals = 3;
};

struct GenerationExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A closed lamS program of cfg.targetType; always passes typecheckProgram.
Program genWellTyped(const GenConfig& cfg);

// ---- verdicts -----------------------------------------------------------

struct RunResult {
  OutcomeKind kind = OutcomeKind::Value;
  std::string value;  // printed value, or blame label
  std::uint64_t steps = 0;
};

RunResult toRunResult(const Outcome& o);
std::string describe(const RunResult& r);

struct Verdict {
  enum class Kind { Agree, Disagree, InvariantViolation };
  Kind kind = Kind::Agree;
  std::string check;  // differential | simulation | invariant
  std::uint64_t seed = 0;
  RunResult left, right;
  std::string name;  // violated property
  std::int64_t stepIndex = -1;
  std::string detail;
  std::string witness;  // replayable program in surface syntax

  bool ok() const { return kind == Kind::Agree; }
  nlohmann::ordered_json toJson() const;
};

// Semantics preservation: runs p in lamS with `fuel` and its translation in
// lamSx with 10 * fuel.
Verdict differentialRun(const Program& p, std::uint64_t fuel, bool optTrOp = false);

// Step-by-step simulation of the lamS trace of p by the lamSx trace of the
// translated terms (Tr-Op optimisation off).
Verdict simulationCheck(const Program& p, std::uint64_t fuel);

// Per-step metatheory checks for p in lamS and for its translation in lamSx.
// Returns only violations; an empty vector means every check held.
std::vector<Verdict> invariantSuite(const Program& p, std::uint64_t fuel);

struct InvariantStats {
  std::uint64_t lamsSteps = 0, lamsxSteps = 0;
  std::uint64_t lamsxMetricNonDecrease = 0;  // c-steps where metricFX did not drop
};
std::vector<Verdict> invariantSuite(const Program& p, std::uint64_t fuel, InvariantStats& stats);

// Translation preserves typing: the translated program typechecks at the
// translated type of the source.
Verdict typingPreservation(const Program& p);

// ---- even/odd benchmark ---------------------------------------------------

// even/odd with explicit coercions and main `odd n`.
Program evenOddProgram(std::uint64_t n);

struct SpaceReport {
  std::uint64_t n = 0;
  std::string dialect;  // lams | lamsx
  std::uint64_t steps = 0;
  std::size_t maxCoercionSize = 0;
  std::size_t maxTermSize = 0;
  std::size_t maxMetricF = 0;
  std::string outcome;
  OutcomeKind kind = OutcomeKind::Value;

  nlohmann::ordered_json toJson() const;
};

// Runs odd(n) in lamS, or the translated oddk(n, id{Bool}) in lamSx. Every
// reached term, initial included, counts toward the maxima.
SpaceReport spaceBench(std::uint64_t n, Dialect dialect, std::uint64_t fuel,
                       const StepObserver& observe = {}, bool optTrOp = false);

// Space report for an arbitrary run.
SpaceReport measureRun(const Program& p, std::uint64_t fuel, const StepObserver& observe = {});

// ---- traces -------------------------------------------------------------

struct TraceStep {
  char kind;
  std::string rule;
  Term term;  // the reduct
};

struct Trace {
  Term start;
  std::vector<TraceStep> steps;
  Outcome outcome;
};

Trace traceProgram(const Program& p, std::uint64_t fuel);

// Golden-file lines: `step <n> <e|c> <rule>: <term>` per step, then the
// final value or `blame <label>` or `out of fuel`.
std::vector<std::string> traceLines(const Trace& t);

// Display normalisation used when comparing against hand-written traces:
// continuation lets are inlined and <id> around primitive results dropped.
Term displayNormalize(const Term& m);

// ---- corpus runs ----------------------------------------------------------

struct CorpusSummary {
  std::uint64_t programs = 0;
  std::uint64_t values = 0, blames = 0, fuelOuts = 0;
  std::uint64_t disagreements = 0;
  std::uint64_t simulationFailures = 0;
  std::uint64_t invariantViolations = 0;
  std::uint64_t typingFailures = 0;
  std::uint64_t generationFailures = 0;
  std::vector<Verdict> failures;  // in seed order
};

struct CorpusOptions {
  std::uint64_t firstSeed = 0, lastSeed = 999;  // inclusive
  int maxDepth = 8;
  std::uint64_t fuel = 100000;  // lamS budget
  bool differential = true;
  bool simulation = false;
  bool invariants = false;
  bool typing = false;
  std::uint64_t simulationFuel = 10000;
  unsigned threads = 0;  // 0: hardware concurrency
};

// Runs the selected checks on each seed in parallel; per-seed verdicts are
// merged in seed order so the result does not depend on scheduling.
CorpusSummary runCorpus(const CorpusOptions& opt,
                        const std::function<void(const Verdict&)>& onVerdict = {});

}  // namespace cforge

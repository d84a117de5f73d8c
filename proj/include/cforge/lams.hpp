#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cforge/term.hpp"

namespace cforge {

using TypeEnv = std::vector<std::pair<std::string, Type>>;

// ---- typing -------------------------------------------------------------

// Type of `m` under `env`. The result may contain holes when part of the
// term is blame or passes through a failure coercion.
Type typecheck(const Program& p, const TypeEnv& env, const Term& m);
// Checks every definition against its declared type and returns the type
// of the main term.
Type typecheckProgram(const Program& p);

// Fills result annotations on App / If nodes and codomains on Abs nodes,
// refining with the expected type; positions left unconstrained default to
// Dyn. The translation reads these annotations.
Term annotate(const Program& p, const TypeEnv& env, const Term& m, const Type& expected);
Program annotateProgram(const Program& p);

// ---- evaluation ---------------------------------------------------------

// One step of the deterministic relation. Throws StuckError when no rule
// applies to a non-value, non-blame term.
StepResult step(const Program& p, const Term& m, NameSupply& names);

// Independent decomposition into an E/F context and a redex, found by
// enumerating every position of the term. Used only as a test oracle.
struct Decomposition {
  enum class Kind { Redex, Value, Blame };
  Kind kind = Kind::Value;
  std::vector<int> path;
  std::string rule;
};
struct DecompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;  // MultipleDecompositions / NoDecomposition
};
Decomposition decomposeOracle(const Program& p, const Term& m);

NameSupply supplyFor(const Program& p, const Term& m, const std::string& prefix = "v");
Outcome evaluate(const Program& p, const Term& m, std::uint64_t fuel,
                 const StepObserver& observe = {});

// ---- sizes and invariants ----------------------------------------------

std::size_t metricF(const Term& m);
std::size_t maxCoercionSize(const Term& m);
// True when some M<s><t> node occurs along the given path from the root
// (the evaluation spine of a redex).
bool adjacentCoercionsOnPath(const Term& m, const std::vector<int>& path);
// Every U<<d>> has an uncoerced U and a delayed d.
bool valuesHaveOneLayer(const Term& m);
// Every coercion stored in the term is canonical.
bool coercionsCanonical(const Term& m);

const Term& childAt(const Term& m, int i);

}  // namespace cforge

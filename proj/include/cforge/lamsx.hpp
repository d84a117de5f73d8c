#pragma once

#include <cstdint>

#include "cforge/lams.hpp"

namespace cforge {

// Rigid type variables are minted from this counter; it is local to one
// typechecking run.
struct TyVarSupply {
  int next = 1;
  Type fresh() { return varT(next++); }
};

Type typecheckX(const Program& p, const TypeEnv& env, const Term& m);
Type typecheckProgramX(const Program& p);

StepResult stepX(const Program& p, const Term& m, NameSupply& names);
Decomposition decomposeOracleX(const Program& p, const Term& m);
Outcome evaluateX(const Program& p, const Term& m, std::uint64_t fuel,
                  const StepObserver& observe = {});

// Monitored c-step measure: the lamS metric extended with 4 per
// composition node and 1 per let; k includes every coercion literal.
std::size_t metricFX(const Term& m);

}  // namespace cforge

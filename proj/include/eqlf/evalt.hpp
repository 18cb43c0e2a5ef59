// Arithmetic over the bundled nat signatures: numeral coding, the standard
// plus/times programs, and a small-step oracle evaluator kept deliberately
// independent of the kernel's rewrite engine so the two can check each other.
#pragma once

#include <optional>
#include <string>

#include "eqlf/kernel.hpp"
#include "eqlf/syntax.hpp"

namespace eqlf::evalt {

// succ^n zero
ObjPtr numeral(unsigned long n);

// Partial inverse of numeral: the value of a succ-chain over zero, else nullopt.
std::optional<unsigned long> numeralValue(const ObjPtr& o);

enum class OracleStatus { Value, Stuck, StepBudgetExceeded };

inline constexpr long kOracleStepBudget = 1000000;

struct OracleResult {
  OracleStatus status;
  ObjPtr term;                         // final term (last term when the budget ran out)
  long steps = 0;
  std::optional<unsigned long> value;  // set iff status == Value

  bool isValue() const { return status == OracleStatus::Value; }
};

// Call-by-name small-step evaluation of a closed el-nat program. The only
// steps are framework beta, the two nat recursor equations, and object-level
// function beta; the traversal shares no code with Checker::normalize. The
// evaluator is keyed to the bundled constant names (rec, zero, succ, app,
// lam), which godel_t and dependent_t share.
OracleResult oracleEval(const ObjPtr& program, long budget = kOracleStepBudget);

// Standard programs. plus and times are godel_t objects of class
// {m : el nat} {n : el nat} el nat; plusDep is the dependent_t variant that
// runs the dependent recursor at a constant family.
ObjPtr plusProgram();
ObjPtr timesProgram();
ObjPtr plusDepProgram();

// Outcome of racing the oracle against Checker::normalize on one program.
enum class AgreeStatus { Agree, Disagree, OracleStuck, OracleBudget, KernelFuel };

struct AgreeResult {
  AgreeStatus status;
  OracleResult oracle;
  ObjPtr kernelNormal;  // null when the kernel ran out of fuel

  bool ok() const { return status == AgreeStatus::Agree; }
};

const char* agreeStatusName(AgreeStatus s);

// Runs both evaluators and compares final terms up to alpha-equivalence.
// Fuel and budget exhaustion are reported as their own statuses, never as
// disagreement. Throws std::invalid_argument if the program mentions names
// bound by neither the signature nor anything else (an open term).
AgreeResult agreement(const Checker& ck, const ObjPtr& program,
                      long oracleBudget = kOracleStepBudget);

}  // namespace eqlf::evalt

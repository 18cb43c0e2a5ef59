#include "eqlf/evalt.hpp"

#include <set>
#include <stdexcept>
#include <vector>

#include "eqlf/parser.hpp"

namespace eqlf::evalt {

ObjPtr numeral(unsigned long n) {
  ObjPtr t = Obj::fvar("zero");
  for (unsigned long i = 0; i < n; ++i) t = Obj::app(Obj::fvar("succ"), t);
  return t;
}

std::optional<unsigned long> numeralValue(const ObjPtr& o) {
  unsigned long n = 0;
  const Obj* t = o.get();
  while (t->tag == ObjTag::App && t->a->tag == ObjTag::FVar && t->a->name == "succ") {
    ++n;
    t = t->b.get();
  }
  if (t->tag == ObjTag::FVar && t->name == "zero") return n;
  return std::nullopt;
}

namespace {

bool isConst(const ObjPtr& t, const char* n) {
  return t->tag == ObjTag::FVar && t->name == n;
}

ObjPtr reApply(ObjPtr head, const std::vector<ObjPtr>& args, size_t from) {
  for (size_t i = from; i < args.size(); ++i) head = Obj::app(head, args[i]);
  return head;
}

// One step, or null if the term is normal for the oracle's rule set. The
// strategy forces a recursor's scrutinee and an application's function
// position, then walks leftmost; it never goes under a binder, which is
// enough because a closed el-nat value is a numeral and binders only ever
// disappear by being applied.
ObjPtr stepOnce(const ObjPtr& t) {
  if (t->tag != ObjTag::App) return nullptr;
  if (t->a->tag == ObjTag::Lam) return openObj(t->a->b, t->b);

  auto [h, args] = spine(t);
  if (h->tag == ObjTag::FVar && args.size() >= 4) {
    if (h->name == "rec") {
      const ObjPtr& scrut = args[3];
      if (isConst(scrut, "zero")) return reApply(args[1], args, 4);
      if (scrut->tag == ObjTag::App && isConst(scrut->a, "succ")) {
        ObjPtr m = scrut->b;
        ObjPtr recM = Obj::app(h, {args[0], args[1], args[2], m});
        return reApply(Obj::app(Obj::app(args[2], m), recM), args, 4);
      }
      if (ObjPtr s2 = stepOnce(scrut)) {
        std::vector<ObjPtr> as = args;
        as[3] = s2;
        return Obj::app(h, as);
      }
      return nullptr;
    }
    if (h->name == "app") {
      const ObjPtr& fn = args[2];
      auto [fh, fargs] = spine(fn);
      if (isConst(fh, "lam") && fargs.size() == 3 &&
          // the equation is non-linear in the sort arguments, so firing it
          // requires the annotations to agree, same as the kernel's matcher
          alphaEqual(args[0], fargs[0]) && alphaEqual(args[1], fargs[1])) {
        return reApply(Obj::app(fargs[2], args[3]), args, 4);
      }
      if (ObjPtr f2 = stepOnce(fn)) {
        std::vector<ObjPtr> as = args;
        as[2] = f2;
        return Obj::app(h, as);
      }
      return nullptr;
    }
  }
  if (ObjPtr a2 = stepOnce(t->a)) return Obj::app(a2, t->b);
  if (ObjPtr b2 = stepOnce(t->b)) return Obj::app(t->a, b2);
  return nullptr;
}

}  // namespace

OracleResult oracleEval(const ObjPtr& program, long budget) {
  OracleResult r;
  ObjPtr cur = program;
  while (true) {
    ObjPtr next = stepOnce(cur);
    if (!next) break;
    if (r.steps >= budget) {
      r.status = OracleStatus::StepBudgetExceeded;
      r.term = cur;
      return r;
    }
    cur = next;
    ++r.steps;
  }
  r.term = cur;
  r.value = numeralValue(cur);
  r.status = r.value ? OracleStatus::Value : OracleStatus::Stuck;
  return r;
}

ObjPtr plusProgram() {
  static const ObjPtr p = parseObject(
      "[m : el nat] [n : el nat] rec nat n ([k : el nat] [acc : el nat] succ acc) m", "plus");
  return p;
}

ObjPtr timesProgram() {
  // m iterations, each adding n to the accumulator
  static const ObjPtr p = parseObject(
      "[m : el nat] [n : el nat] "
      "rec nat zero ([k : el nat] [acc : el nat] "
      "rec nat acc ([j : el nat] [b : el nat] succ b) n) m",
      "times");
  return p;
}

ObjPtr plusDepProgram() {
  static const ObjPtr p = parseObject(
      "[m : el nat] [n : el nat] rec ([z : el nat] nat) n ([k : el nat] [acc : el nat] succ acc) m",
      "plus_dep");
  return p;
}

const char* agreeStatusName(AgreeStatus s) {
  switch (s) {
    case AgreeStatus::Agree: return "agree";
    case AgreeStatus::Disagree: return "disagree";
    case AgreeStatus::OracleStuck: return "oracle-stuck";
    case AgreeStatus::OracleBudget: return "oracle-budget-exceeded";
    case AgreeStatus::KernelFuel: return "kernel-fuel-exhausted";
  }
  return "?";
}

AgreeResult agreement(const Checker& ck, const ObjPtr& program, long oracleBudget) {
  for (const auto& n : freeVarsObj(program))
    if (!ck.signature().lookup(n))
      throw std::invalid_argument("agreement: open program (unbound '" + n + "')");

  AgreeResult r{AgreeStatus::Disagree, oracleEval(program, oracleBudget), nullptr};
  try {
    r.kernelNormal = ck.normalize({}, program);
  } catch (const CheckError& e) {
    if (e.kind() == ErrKind::FuelExhausted) {
      r.status = AgreeStatus::KernelFuel;
      return r;
    }
    throw;
  }
  if (r.oracle.status == OracleStatus::StepBudgetExceeded) {
    r.status = AgreeStatus::OracleBudget;
    return r;
  }
  if (r.oracle.status == OracleStatus::Stuck) {
    r.status = AgreeStatus::OracleStuck;
    return r;
  }
  r.status = alphaEqual(r.oracle.term, r.kernelNormal) ? AgreeStatus::Agree
                                                       : AgreeStatus::Disagree;
  return r;
}

}  // namespace eqlf::evalt

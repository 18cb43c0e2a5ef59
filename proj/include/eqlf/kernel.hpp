// The kernel: context/class/object checking, inference, and the
// semi-decision procedure for equality.
//
// Equality is extensional (hypotheses of equality class may be reflected
// into use), so the theory is undecidable; every equality query runs under
// a fuel budget and returns a three-valued verdict. ProvenEqual is backed
// by a derivation, NotProven and FuelExhausted carry no claim.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "eqlf/syntax.hpp"

namespace eqlf {

enum class VerdictKind { ProvenEqual, NotProven, FuelExhausted };

struct Verdict {
  VerdictKind kind;
  long stepsUsed = 0;

  bool proven() const { return kind == VerdictKind::ProvenEqual; }
  const char* str() const;
};

enum class ErrKind {
  UnboundVariable,
  DuplicateName,
  IllFormedClass,
  NotASort,
  EndpointIllTyped,
  NotAFunction,
  ArgumentClassMismatch,
  CannotInferBullet,
  ClassMismatch,
  EqualityNotProven,
  FuelExhausted,
};

class CheckError : public std::runtime_error {
public:
  CheckError(ErrKind kind, const std::string& msg);
  ErrKind kind() const { return kind_; }

private:
  ErrKind kind_;
};

const char* errKindName(ErrKind k);

struct TraceStep {
  enum Kind { Beta, Rule, Eta, Reflect } kind;
  std::string ruleName;       // "app-lam" for beta, rule constant otherwise
  std::vector<int> path;      // child indices from the root of the rewritten term
  ObjPtr before, after;       // the redex, in place (may mention bound indices)

  std::string pathStr() const;
};

struct TraceSink {
  virtual ~TraceSink() = default;
  virtual void onStep(const TraceStep&) = 0;
};

struct CheckConfig {
  long fuel = 10000;        // rewrite steps per equality query
  bool etaEnabled = true;   // type-directed eta (framework and signature)
  TraceSink* trace = nullptr;
};

// ---------------------------------------------------------------------------
// Pattern matching (Miller fragment): pattern variables may be applied to
// distinct locally bound variables only.

struct PatternBinding {
  std::vector<std::string> locals;  // bound variables abstracted, outermost first
  ObjPtr body;
};

using PatternSubst = std::map<std::string, PatternBinding>;

std::optional<PatternSubst> matchPattern(const ObjPtr& pattern, const ObjPtr& subject,
                                         const std::set<std::string>& pvars);
std::optional<PatternSubst> matchClsPattern(const ClsPtr& pattern, const ClsPtr& subject,
                                            const std::set<std::string>& pvars);

// Instantiate a rule template. Pattern variables applied to fewer arguments
// than their binding arity are rejected at extraction time.
ObjPtr instantiate(const ObjPtr& tmpl, const PatternSubst& sub);
ClsPtr instantiateCls(const ClsPtr& tmpl, const PatternSubst& sub);

// ---------------------------------------------------------------------------
// Rules extracted from equational signature constants.

enum class RuleKind { Reduction, Expansion };

struct RewriteRule {
  std::string name;
  Telescope televars;
  ObjPtr sortOfEq;  // may mention televars
  ObjPtr lhs, rhs;
  RuleKind kind;
  std::set<std::string> pvars;
};

// c : {...} P -> Eq(S; M1; M2) with bare-variable endpoints determined by the
// premise sort P: every hypothesis whose sort matches P contributes an
// equation to the ground store.
struct ReflectionRule {
  std::string name;
  Telescope televars;
  ObjPtr hypSort;
  ObjPtr sortOfEq, lhs, rhs;
  std::set<std::string> pvars;
};

// c : {...} Eq(S; M; M') with M, M' distinct bare variables of sort S: any
// two objects of a sort matching S are equal.
struct UnicityRule {
  std::string name;
  Telescope televars;
  ObjPtr sortPattern;
  std::set<std::string> pvars;
};

struct SignatureRules {
  std::vector<RewriteRule> rewrites;  // declaration order
  std::vector<ReflectionRule> reflections;
  std::vector<UnicityRule> unicities;
  std::vector<std::string> warnings;
};

SignatureRules extractRules(const Telescope& sig);

// Peel the leading dependent-class binders of a class into a telescope of
// fresh names, returning the instantiated core.
std::pair<Telescope, ClsPtr> peelTelescope(const ClsPtr& cls, const std::set<std::string>& avoid);

// ---------------------------------------------------------------------------
// Ground equations (reflection): union-find over alpha-canonical objects
// with congruence closure over application spines.

class GroundEqStore {
public:
  void addEquation(const ObjPtr& a, const ObjPtr& b);
  void close();  // run congruence closure and pick representatives
  // Rewrite known subterms to their class representatives, bottom-up.
  ObjPtr canonize(const ObjPtr& t) const;
  bool proves(const ObjPtr& a, const ObjPtr& b) const;
  bool empty() const { return eqCount_ == 0; }
  // Names whose occurrences make a representative "heavy"; representatives
  // prefer signature material over context variables.
  void setWeightContext(std::set<std::string> ctxNames) { ctxNames_ = std::move(ctxNames); }

private:
  struct Node {
    ObjPtr term;
    std::vector<int> kids;  // App: fn, arg; LSuc: arg; others opaque
    int parent = -1;
  };

  int addTerm(const ObjPtr& t);
  int find(int i) const;
  void unite(int a, int b);
  long weight(const ObjPtr& t) const;
  ObjPtr lookupRep(const ObjPtr& t) const;

  std::vector<Node> nodes_;
  std::unordered_map<std::string, int> byKey_;
  std::unordered_map<std::string, int> congIndex_;  // spine shape -> node, valid after close()
  std::vector<ObjPtr> reps_;                        // per node id, valid after close()
  int eqCount_ = 0;
  bool closed_ = false;
  std::set<std::string> ctxNames_;
};

// ---------------------------------------------------------------------------

class Checker {
public:
  explicit Checker(Telescope sig, CheckConfig cfg = {});

  // Validates a signature declaration by declaration; rules extracted from
  // earlier constants are available while checking later ones.
  static Checker checkSignature(Telescope sig, CheckConfig cfg = {});

  const Telescope& signature() const { return sig_; }
  const SignatureRules& rules() const { return rules_; }

  CheckConfig cfg;

  void checkContext(const Telescope& ctx) const;
  void checkClass(const Telescope& ctx, const ClsPtr& k) const;
  ClsPtr inferObject(const Telescope& ctx, const ObjPtr& o) const;
  void checkObject(const Telescope& ctx, const ObjPtr& o, const ClsPtr& k) const;

  Verdict equalClasses(const Telescope& ctx, const ClsPtr& a, const ClsPtr& b) const;
  Verdict equalObjects(const Telescope& ctx, const ObjPtr& a, const ObjPtr& b,
                       const ObjPtr& sortObj) const;
  Verdict equalObjectsAt(const Telescope& ctx, const ObjPtr& a, const ObjPtr& b,
                         const ClsPtr& cls) const;

  // Framework beta plus Reduction rules, leftmost-outermost, to normal form.
  ObjPtr normalize(const Telescope& ctx, const ObjPtr& o) const;
  ClsPtr whnfClass(const Telescope& ctx, const ClsPtr& k) const;

private:
  friend struct EqEngine;
  struct Fuel;

  void checkClassI(const Telescope& ctx, const ClsPtr& k, Fuel& fuel) const;
  ClsPtr inferObjectI(const Telescope& ctx, const ObjPtr& o, Fuel& fuel) const;
  void checkObjectI(const Telescope& ctx, const ObjPtr& o, const ClsPtr& k, Fuel& fuel) const;
  void checkSortObjI(const Telescope& ctx, const ObjPtr& o, Fuel& fuel) const;
  ClsPtr whnfClsI(const ClsPtr& k, Fuel& fuel) const;
  ObjPtr whnfObjI(const ObjPtr& o, Fuel& fuel) const;
  ObjPtr normalizeI(const ObjPtr& o, Fuel& fuel) const;
  std::optional<ObjPtr> rewriteHead(const ObjPtr& t) const;
  std::optional<ObjPtr> stepLO(const ObjPtr& t, std::vector<int>& path, TraceStep* step) const;

  std::shared_ptr<const GroundEqStore> buildStore(const Telescope& ctx, Fuel& fuel) const;
  const std::vector<std::pair<ObjPtr, ObjPtr>>& sigEquations(Fuel& fuel) const;
  void collectHypEquations(std::vector<std::pair<ObjPtr, ObjPtr>>& out, const Decl& d,
                           Fuel& fuel) const;

  Telescope sig_;
  SignatureRules rules_;
  std::set<std::string> sigNames_;
  mutable std::optional<std::vector<std::pair<ObjPtr, ObjPtr>>> sigEqCache_;
};

}  // namespace eqlf

#include "eqlf/kernel.hpp"

#include <algorithm>

#include "eqlf/parser.hpp"  // printing, for diagnostics

namespace eqlf {

const char* Verdict::str() const {
  switch (kind) {
    case VerdictKind::ProvenEqual: return "proven-equal";
    case VerdictKind::NotProven: return "not-proven";
    case VerdictKind::FuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

CheckError::CheckError(ErrKind kind, const std::string& msg)
    : std::runtime_error(msg), kind_(kind) {}

std::string TraceStep::pathStr() const {
  if (path.empty()) return "·";
  std::string s;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(path[i]);
  }
  return s;
}

namespace {

struct FuelOut {};

const char* kindName(ErrKind k) {
  switch (k) {
    case ErrKind::UnboundVariable: return "unbound-variable";
    case ErrKind::DuplicateName: return "duplicate-name";
    case ErrKind::IllFormedClass: return "ill-formed-class";
    case ErrKind::NotASort: return "not-a-sort";
    case ErrKind::EndpointIllTyped: return "endpoint-ill-typed";
    case ErrKind::NotAFunction: return "not-a-function";
    case ErrKind::ArgumentClassMismatch: return "argument-class-mismatch";
    case ErrKind::CannotInferBullet: return "cannot-infer-bullet";
    case ErrKind::ClassMismatch: return "class-mismatch";
    case ErrKind::EqualityNotProven: return "equality-not-proven";
    case ErrKind::FuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

}  // namespace

const char* errKindName(ErrKind k) { return kindName(k); }

struct Checker::Fuel {
  long limit;
  long used = 0;
  void tick() {
    if (++used > limit) throw FuelOut{};
  }
};

// ---------------------------------------------------------------------------

Checker::Checker(Telescope sig, CheckConfig c) : cfg(c), sig_(std::move(sig)) {
  rules_ = extractRules(sig_);
  sigNames_ = sig_.names();
}

Checker Checker::checkSignature(Telescope sig, CheckConfig cfg) {
  Telescope prefix;
  for (const auto& d : sig.decls) {
    if (prefix.lookup(d.name))
      throw CheckError(ErrKind::DuplicateName, "duplicate declaration of '" + d.name + "'");
    Checker cur(prefix, cfg);
    try {
      cur.checkClass({}, d.cls);
    } catch (CheckError& e) {
      throw CheckError(e.kind(), "in the declaration of '" + d.name + "': " + e.what());
    }
    prefix.push(d.name, d.cls);
  }
  return Checker(std::move(prefix), cfg);
}

void Checker::checkContext(const Telescope& ctx) const {
  Telescope prefix;
  for (const auto& d : ctx.decls) {
    if (sig_.lookup(d.name) || prefix.lookup(d.name))
      throw CheckError(ErrKind::DuplicateName, "duplicate declaration of '" + d.name + "'");
    try {
      checkClass(prefix, d.cls);
    } catch (CheckError& e) {
      if (e.kind() == ErrKind::UnboundVariable || e.kind() == ErrKind::FuelExhausted)
        throw CheckError(e.kind(), "in the class of '" + d.name + "': " + e.what());
      throw CheckError(ErrKind::IllFormedClass, "in the class of '" + d.name + "': " + e.what());
    }
    prefix.push(d.name, d.cls);
  }
}

void Checker::checkClass(const Telescope& ctx, const ClsPtr& k) const {
  Fuel fuel{cfg.fuel};
  try {
    checkClassI(ctx, k, fuel);
  } catch (FuelOut&) {
    throw CheckError(ErrKind::FuelExhausted, "fuel exhausted while checking " + printCls(k));
  }
}

ClsPtr Checker::inferObject(const Telescope& ctx, const ObjPtr& o) const {
  Fuel fuel{cfg.fuel};
  try {
    return inferObjectI(ctx, o, fuel);
  } catch (FuelOut&) {
    throw CheckError(ErrKind::FuelExhausted, "fuel exhausted while inferring " + printObj(o));
  }
}

void Checker::checkObject(const Telescope& ctx, const ObjPtr& o, const ClsPtr& k) const {
  Fuel fuel{cfg.fuel};
  try {
    checkObjectI(ctx, o, k, fuel);
  } catch (FuelOut&) {
    throw CheckError(ErrKind::FuelExhausted, "fuel exhausted while checking " + printObj(o));
  }
}

ObjPtr Checker::normalize(const Telescope& ctx, const ObjPtr& o) const {
  (void)ctx;  // beta + reduction rules never consult the context
  Fuel fuel{cfg.fuel};
  try {
    return normalizeI(o, fuel);
  } catch (FuelOut&) {
    throw CheckError(ErrKind::FuelExhausted, "fuel exhausted while normalizing " + printObj(o));
  }
}

ClsPtr Checker::whnfClass(const Telescope& ctx, const ClsPtr& k) const {
  (void)ctx;
  Fuel fuel{cfg.fuel};
  try {
    return whnfClsI(k, fuel);
  } catch (FuelOut&) {
    throw CheckError(ErrKind::FuelExhausted, "fuel exhausted while reducing " + printCls(k));
  }
}

// ---------------------------------------------------------------------------
// Rewriting.

namespace {

// Cheap rejection before building a matcher: a rigid pattern head and its
// spine length must line up with the subject's.
bool headMayMatch(const ObjPtr& pat, const ObjPtr& subj,
                  const std::set<std::string>& pvars) {
  const Obj* p = pat.get();
  int plen = 0;
  while (p->tag == ObjTag::App) {
    p = p->a.get();
    ++plen;
  }
  if (p->tag == ObjTag::FVar && pvars.count(p->name)) return true;  // flexible
  const Obj* s = subj.get();
  int slen = 0;
  while (s->tag == ObjTag::App) {
    s = s->a.get();
    ++slen;
  }
  if (plen != slen || p->tag != s->tag) return false;
  return p->tag != ObjTag::FVar || p->name == s->name;
}

}  // namespace

std::optional<ObjPtr> Checker::rewriteHead(const ObjPtr& t) const {
  for (const auto& r : rules_.rewrites) {
    if (r.kind != RuleKind::Reduction) continue;
    if (!headMayMatch(r.lhs, t, r.pvars)) continue;
    if (auto sub = matchPattern(r.lhs, t, r.pvars)) return instantiate(r.rhs, *sub);
  }
  return std::nullopt;
}

ObjPtr Checker::whnfObjI(const ObjPtr& o, Fuel& fuel) const {
  ObjPtr t = o;
  for (;;) {
    if (auto r = rewriteHead(t)) {
      fuel.tick();
      t = *r;
      continue;
    }
    if (t->tag == ObjTag::App) {
      ObjPtr f = whnfObjI(t->a, fuel);
      if (f->tag == ObjTag::Lam) {
        fuel.tick();
        t = openObj(f->b, t->b);
        continue;
      }
      if (f != t->a) {
        t = Obj::app(f, t->b);
        continue;  // a rule may fire now that the head is exposed
      }
      return t;
    }
    return t;
  }
}

ClsPtr Checker::whnfClsI(const ClsPtr& k, Fuel& fuel) const {
  if (k->tag != ClsTag::Incl) return k;
  ObjPtr o = whnfObjI(k->obj, fuel);
  if (o->tag == ObjTag::PiSort) return Cls::pi(o->a, o->name, Cls::incl(o->b));
  if (o->tag == ObjTag::ClsObj) return o->cls;
  return o == k->obj ? k : Cls::incl(o);
}

namespace {

ObjPtr childOf(const ObjPtr& t, int i) { return i == 0 ? t->a : t->b; }

ObjPtr withChild(const ObjPtr& t, int i, const ObjPtr& c) {
  switch (t->tag) {
    case ObjTag::LSuc: return Obj::lsuc(c);
    case ObjTag::PiSort:
      return i == 0 ? Obj::piSort(c, t->name, t->b) : Obj::piSort(t->a, t->name, c);
    case ObjTag::Lam: return i == 0 ? Obj::lam(c, t->name, t->b) : Obj::lam(t->a, t->name, c);
    case ObjTag::App: return i == 0 ? Obj::app(c, t->b) : Obj::app(t->a, c);
    default: return t;
  }
}

int childCount(const ObjPtr& t) {
  switch (t->tag) {
    case ObjTag::LSuc: return 1;
    case ObjTag::PiSort:
    case ObjTag::Lam:
    case ObjTag::App: return 2;
    default: return 0;  // ClsObj is inert: improper objects are not normalized into
  }
}

}  // namespace

// One leftmost-outermost step. Binders are not opened: rule matching and
// beta both handle subterms that mention enclosing binders by loose index.
std::optional<ObjPtr> Checker::stepLO(const ObjPtr& t, std::vector<int>& path,
                                      TraceStep* step) const {
  if (t->tag == ObjTag::App && t->a->tag == ObjTag::Lam) {
    ObjPtr after = openObj(t->a->b, t->b);
    if (step) *step = TraceStep{TraceStep::Beta, "app-lam", path, t, after};
    return after;
  }
  for (const auto& r : rules_.rewrites) {
    if (r.kind != RuleKind::Reduction) continue;
    if (!headMayMatch(r.lhs, t, r.pvars)) continue;
    if (auto sub = matchPattern(r.lhs, t, r.pvars)) {
      ObjPtr after = instantiate(r.rhs, *sub);
      if (step) *step = TraceStep{TraceStep::Rule, r.name, path, t, after};
      return after;
    }
  }
  int n = childCount(t);
  for (int i = 0; i < n; ++i) {
    path.push_back(i);
    if (auto c = stepLO(childOf(t, i), path, step)) return withChild(t, i, *c);
    path.pop_back();
  }
  return std::nullopt;
}

ObjPtr Checker::normalizeI(const ObjPtr& o, Fuel& fuel) const {
  ObjPtr t = o;
  for (;;) {
    std::vector<int> path;
    TraceStep step;
    auto next = stepLO(t, path, cfg.trace ? &step : nullptr);
    if (!next) return t;
    fuel.tick();
    if (cfg.trace) cfg.trace->onStep(step);
    t = *next;
  }
}

// ---------------------------------------------------------------------------
// Ground equations.

const std::vector<std::pair<ObjPtr, ObjPtr>>& Checker::sigEquations(Fuel& fuel) const {
  if (!sigEqCache_) {
    std::vector<std::pair<ObjPtr, ObjPtr>> eqs;
    for (const auto& d : sig_.decls) collectHypEquations(eqs, d, fuel);
    sigEqCache_ = std::move(eqs);
  }
  return *sigEqCache_;
}

void Checker::collectHypEquations(std::vector<std::pair<ObjPtr, ObjPtr>>& out, const Decl& d,
                                  Fuel& fuel) const {
  if (d.cls->tag == ClsTag::Eq) {
    out.emplace_back(normalizeI(d.cls->lhs, fuel), normalizeI(d.cls->rhs, fuel));
    return;
  }
  if (d.cls->tag == ClsTag::Incl && !rules_.reflections.empty()) {
    ObjPtr sn = normalizeI(d.cls->obj, fuel);
    for (const auto& rr : rules_.reflections) {
      if (auto sub = matchPattern(rr.hypSort, sn, rr.pvars)) {
        out.emplace_back(normalizeI(instantiate(rr.lhs, *sub), fuel),
                         normalizeI(instantiate(rr.rhs, *sub), fuel));
      }
    }
  }
}

std::shared_ptr<const GroundEqStore> Checker::buildStore(const Telescope& ctx,
                                                         Fuel& fuel) const {
  auto store = std::make_shared<GroundEqStore>();
  for (const auto& [l, r] : sigEquations(fuel)) store->addEquation(l, r);
  std::vector<std::pair<ObjPtr, ObjPtr>> eqs;
  for (const auto& d : ctx.decls) collectHypEquations(eqs, d, fuel);
  for (const auto& [l, r] : eqs) store->addEquation(l, r);
  store->setWeightContext(ctx.names());
  store->close();
  return store;
}

// ---------------------------------------------------------------------------
// The equality engine. One instance per query; fuel, the expansion memo and
// the trace sink travel with it.

struct EqEngine {
  const Checker& ck;
  Checker::Fuel& fuel;
  std::set<std::string> expMemo;

  using StorePtr = std::shared_ptr<const GroundEqStore>;

  void trace(TraceStep::Kind kind, const std::string& name, const ObjPtr& before,
             const ObjPtr& after) const {
    if (ck.cfg.trace) ck.cfg.trace->onStep(TraceStep{kind, name, {}, before, after});
  }

  std::string freshFor(const Telescope& ctx, const std::string& hint,
                       std::initializer_list<ObjPtr> objs,
                       std::initializer_list<ClsPtr> clss = {}) const {
    std::set<std::string> taken = ck.sigNames_;
    for (const auto& d : ctx.decls) taken.insert(d.name);
    for (const auto& t : objs)
      if (t) freeVars(t, taken);
    for (const auto& c : clss)
      if (c) freeVars(c, taken);
    return freshName(hint.empty() ? "x" : hint, taken);
  }

  StorePtr extendStore(const Telescope& newCtx, const ClsPtr& added, const StorePtr& old) {
    bool relevant = added->tag == ClsTag::Eq ||
                    (added->tag == ClsTag::Incl && !ck.rules_.reflections.empty());
    if (!relevant) return old;
    return ck.buildStore(newCtx, fuel);
  }

  // Reduction-rule normal form, then ground canonization, to a joint fixpoint.
  ObjPtr eqNorm(const StorePtr& store, ObjPtr t) {
    t = ck.normalizeI(t, fuel);
    if (!store || store->empty()) return t;
    for (;;) {
      ObjPtr c = store->canonize(t);
      if (alphaEqual(c, t)) return t;
      fuel.tick();
      trace(TraceStep::Reflect, "reflection", t, c);
      t = ck.normalizeI(c, fuel);
    }
  }

  ClsPtr headClass(const Telescope& ctx, const ObjPtr& h) const {
    if (h->tag != ObjTag::FVar) return nullptr;
    if (const ClsPtr* k = ctx.lookup(h->name)) return *k;
    if (const ClsPtr* k = ck.sig_.lookup(h->name)) return *k;
    return nullptr;
  }

  bool eqObj(const Telescope& ctx, const StorePtr& store, const ObjPtr& a, const ObjPtr& b,
             const ClsPtr& cls) {
    ClsPtr w = ck.whnfClsI(cls, fuel);

    // unicity of equality derivations: an equality class has at most one
    // member up to equality
    if (w->tag == ClsTag::Eq) return true;

    if (w->tag == ClsTag::Pi && ck.cfg.etaEnabled) {
      // compare pointwise on a fresh variable
      std::string x = freshFor(ctx, w->hint, {a, b, w->dom});
      auto xv = Obj::fvar(x);
      ClsPtr dc = clsOfSort(w->dom);
      Telescope ctx2 = ctx.extended(x, dc);
      StorePtr store2 = extendStore(ctx2, dc, store);
      fuel.tick();
      trace(TraceStep::Eta, "lam-app", a, Obj::app(a, xv));
      return eqObj(ctx2, store2, Obj::app(a, xv), Obj::app(b, xv), openCls(w->cod, xv));
    }

    if (w->tag == ClsTag::Sort || w->tag == ClsTag::Pi) {
      ObjPtr n1 = eqNorm(store, a);
      ObjPtr n2 = eqNorm(store, b);
      if (alphaEqual(n1, n2)) return true;
      return structCmp(ctx, store, n1, n2);
    }

    // Incl
    ObjPtr s = eqNorm(store, w->obj);
    for (const auto& ur : ck.rules_.unicities)
      if (matchPattern(ur.sortPattern, s, ur.pvars)) return true;

    ObjPtr n1 = eqNorm(store, a);
    ObjPtr n2 = eqNorm(store, b);
    if (alphaEqual(n1, n2)) return true;

    if (ck.cfg.etaEnabled) {
      for (const auto& er : ck.rules_.rewrites) {
        if (er.kind != RuleKind::Expansion) continue;
        auto sub = matchPattern(er.sortOfEq, s, er.pvars);
        if (!sub) continue;
        std::string memoKey =
            er.name + "|" + alphaKey(n1) + "|" + alphaKey(n2) + "|" + alphaKey(s);
        if (!expMemo.insert(memoKey).second) break;  // been here: expansion will not progress
        PatternSubst s1 = *sub;
        s1[er.lhs->name] = PatternBinding{{}, n1};
        PatternSubst s2 = *sub;
        s2[er.lhs->name] = PatternBinding{{}, n2};
        fuel.tick();
        ObjPtr e1 = instantiate(er.rhs, s1);
        ObjPtr e2 = instantiate(er.rhs, s2);
        trace(TraceStep::Eta, er.name, n1, e1);
        trace(TraceStep::Eta, er.name, n2, e2);
        e1 = eqNorm(store, e1);
        e2 = eqNorm(store, e2);
        // expanding one side may land exactly on the other (any instance of
        // the rule itself); a stuck term expanded twice never reduces back
        if (alphaEqual(e1, n2) || alphaEqual(n1, e2)) return true;
        if (alphaEqual(e1, e2)) return true;
        return structCmp(ctx, store, e1, e2);
      }
    }
    return structCmp(ctx, store, n1, n2);
  }

  bool structCmp(const Telescope& ctx, const StorePtr& store, const ObjPtr& a,
                 const ObjPtr& b) {
    if (alphaEqual(a, b)) return true;
    if (store && !store->empty() && store->proves(a, b)) {
      fuel.tick();
      trace(TraceStep::Reflect, "reflection", a, b);
      return true;
    }
    if (a->tag != b->tag) return false;
    switch (a->tag) {
      case ObjTag::FVar:
      case ObjTag::BVar:
      case ObjTag::Bullet:
      case ObjTag::Lvl:
      case ObjTag::LZero: return false;  // alpha case already handled
      case ObjTag::LSuc: return eqObj(ctx, store, a->a, b->a, Cls::incl(Obj::lvl()));
      case ObjTag::PiSort: {
        if (!eqObj(ctx, store, a->a, b->a, Cls::sort())) return false;
        std::string x = freshFor(ctx, a->name, {a, b});
        auto xv = Obj::fvar(x);
        ClsPtr dc = clsOfSort(a->a);
        Telescope ctx2 = ctx.extended(x, dc);
        StorePtr store2 = extendStore(ctx2, dc, store);
        return eqObj(ctx2, store2, openObj(a->b, xv), openObj(b->b, xv), Cls::sort());
      }
      case ObjTag::Lam: {
        if (!eqObj(ctx, store, a->a, b->a, Cls::sort())) return false;
        std::string x = freshFor(ctx, a->name, {a, b});
        auto xv = Obj::fvar(x);
        ClsPtr dc = clsOfSort(a->a);
        Telescope ctx2 = ctx.extended(x, dc);
        StorePtr store2 = extendStore(ctx2, dc, store);
        ObjPtr ba = openObj(a->b, xv);
        ObjPtr bb = openObj(b->b, xv);
        ClsPtr k2 = nullptr;
        try {
          k2 = ck.inferObjectI(ctx2, ba, fuel);
        } catch (CheckError&) {
          k2 = nullptr;  // untypeable body: fall back to structural comparison
        }
        if (k2) return eqObj(ctx2, store2, ba, bb, k2);
        return structCmp(ctx2, store2, ba, bb);
      }
      case ObjTag::App: {
        auto [h1, as1] = spine(a);
        auto [h2, as2] = spine(b);
        if (as1.size() != as2.size()) return false;
        if (!structCmp(ctx, store, h1, h2)) return false;
        // walk the head's class to compare arguments at their sorts
        ClsPtr k = headClass(ctx, h1);
        for (size_t i = 0; i < as1.size(); ++i) {
          ClsPtr w = k ? ck.whnfClsI(k, fuel) : nullptr;
          if (w && w->tag == ClsTag::Pi) {
            if (!eqObj(ctx, store, as1[i], as2[i], clsOfSort(w->dom))) return false;
            k = openCls(w->cod, as1[i]);
          } else {
            if (!structCmp(ctx, store, as1[i], as2[i])) return false;
            k = nullptr;
          }
        }
        return true;
      }
      case ObjTag::ClsObj: return false;  // improper objects compare by alpha only
    }
    return false;
  }

  bool eqCls(const Telescope& ctx, const StorePtr& store, const ClsPtr& k1, const ClsPtr& k2) {
    ClsPtr w1 = ck.whnfClsI(k1, fuel);
    ClsPtr w2 = ck.whnfClsI(k2, fuel);
    if (w1->tag != w2->tag) return false;
    switch (w1->tag) {
      case ClsTag::Sort: return true;
      case ClsTag::Pi: {
        if (!eqObj(ctx, store, w1->dom, w2->dom, Cls::sort())) return false;
        std::string x = freshFor(ctx, w1->hint, {w1->dom}, {w1->cod, w2->cod});
        auto xv = Obj::fvar(x);
        ClsPtr dc = clsOfSort(w1->dom);
        Telescope ctx2 = ctx.extended(x, dc);
        StorePtr store2 = extendStore(ctx2, dc, store);
        return eqCls(ctx2, store2, openCls(w1->cod, xv), openCls(w2->cod, xv));
      }
      case ClsTag::Eq: {
        if (!eqObj(ctx, store, w1->dom, w2->dom, Cls::sort())) return false;
        ClsPtr at = clsOfSort(w1->dom);
        return eqObj(ctx, store, w1->lhs, w2->lhs, at) &&
               eqObj(ctx, store, w1->rhs, w2->rhs, at);
      }
      case ClsTag::Incl: return eqObj(ctx, store, w1->obj, w2->obj, Cls::sort());
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// Public equality entry points: fresh fuel per query.

Verdict Checker::equalObjectsAt(const Telescope& ctx, const ObjPtr& a, const ObjPtr& b,
                                const ClsPtr& cls) const {
  Fuel fuel{cfg.fuel};
  EqEngine eng{*this, fuel, {}};
  try {
    auto store = buildStore(ctx, fuel);
    bool ok = eng.eqObj(ctx, store, a, b, cls);
    return {ok ? VerdictKind::ProvenEqual : VerdictKind::NotProven, fuel.used};
  } catch (FuelOut&) {
    return {VerdictKind::FuelExhausted, cfg.fuel};
  }
}

Verdict Checker::equalObjects(const Telescope& ctx, const ObjPtr& a, const ObjPtr& b,
                              const ObjPtr& sortObj) const {
  return equalObjectsAt(ctx, a, b, clsOfSort(sortObj));
}

Verdict Checker::equalClasses(const Telescope& ctx, const ClsPtr& a, const ClsPtr& b) const {
  Fuel fuel{cfg.fuel};
  EqEngine eng{*this, fuel, {}};
  try {
    auto store = buildStore(ctx, fuel);
    bool ok = eng.eqCls(ctx, store, a, b);
    return {ok ? VerdictKind::ProvenEqual : VerdictKind::NotProven, fuel.used};
  } catch (FuelOut&) {
    return {VerdictKind::FuelExhausted, cfg.fuel};
  }
}

// ---------------------------------------------------------------------------
// Checking and inference.

void Checker::checkSortObjI(const Telescope& ctx, const ObjPtr& o, Fuel& fuel) const {
  ClsPtr k = inferObjectI(ctx, o, fuel);
  if (whnfClsI(k, fuel)->tag != ClsTag::Sort)
    throw CheckError(ErrKind::NotASort,
                     printObj(o) + " is not a sort (it has class " + printCls(k) + ")");
}

void Checker::checkClassI(const Telescope& ctx, const ClsPtr& k, Fuel& fuel) const {
  switch (k->tag) {
    case ClsTag::Sort: return;
    case ClsTag::Pi: {
      checkSortObjI(ctx, k->dom, fuel);
      std::set<std::string> taken = sigNames_;
      for (const auto& d : ctx.decls) taken.insert(d.name);
      freeVars(k, taken);
      std::string x = freshName(k->hint.empty() ? "x" : k->hint, taken);
      checkClassI(ctx.extended(x, clsOfSort(k->dom)), openCls(k->cod, Obj::fvar(x)), fuel);
      return;
    }
    case ClsTag::Eq: {
      checkSortObjI(ctx, k->dom, fuel);
      ClsPtr at = clsOfSort(k->dom);
      try {
        checkObjectI(ctx, k->lhs, at, fuel);
      } catch (CheckError& e) {
        if (e.kind() == ErrKind::FuelExhausted || e.kind() == ErrKind::UnboundVariable) throw;
        throw CheckError(ErrKind::EndpointIllTyped, std::string("left endpoint: ") + e.what());
      }
      try {
        checkObjectI(ctx, k->rhs, at, fuel);
      } catch (CheckError& e) {
        if (e.kind() == ErrKind::FuelExhausted || e.kind() == ErrKind::UnboundVariable) throw;
        throw CheckError(ErrKind::EndpointIllTyped, std::string("right endpoint: ") + e.what());
      }
      return;
    }
    case ClsTag::Incl: checkSortObjI(ctx, k->obj, fuel); return;
  }
}

ClsPtr Checker::inferObjectI(const Telescope& ctx, const ObjPtr& o, Fuel& fuel) const {
  switch (o->tag) {
    case ObjTag::FVar: {
      if (const ClsPtr* k = ctx.lookup(o->name)) return *k;
      if (const ClsPtr* k = sig_.lookup(o->name)) return *k;
      throw CheckError(ErrKind::UnboundVariable, "unbound variable '" + o->name + "'");
    }
    case ObjTag::BVar: throw std::logic_error("inferObject: loose bound variable");
    case ObjTag::Bullet:
      throw CheckError(ErrKind::CannotInferBullet,
                       "'*' only checks against an equality class; it cannot be inferred");
    case ObjTag::Lvl: return Cls::sort();
    case ObjTag::LZero: return Cls::incl(Obj::lvl());
    case ObjTag::LSuc:
      checkObjectI(ctx, o->a, Cls::incl(Obj::lvl()), fuel);
      return Cls::incl(Obj::lvl());
    case ObjTag::PiSort: {
      checkSortObjI(ctx, o->a, fuel);
      std::set<std::string> taken = sigNames_;
      for (const auto& d : ctx.decls) taken.insert(d.name);
      freeVars(o, taken);
      std::string x = freshName(o->name.empty() ? "x" : o->name, taken);
      checkSortObjI(ctx.extended(x, clsOfSort(o->a)), openObj(o->b, Obj::fvar(x)), fuel);
      return Cls::sort();
    }
    case ObjTag::Lam: {
      checkSortObjI(ctx, o->a, fuel);
      std::set<std::string> taken = sigNames_;
      for (const auto& d : ctx.decls) taken.insert(d.name);
      freeVars(o, taken);
      std::string x = freshName(o->name.empty() ? "x" : o->name, taken);
      ClsPtr k2 = inferObjectI(ctx.extended(x, clsOfSort(o->a)), openObj(o->b, Obj::fvar(x)), fuel);
      return Cls::pi(o->a, o->name, closeCls(k2, x));
    }
    case ObjTag::App: {
      ClsPtr kf = inferObjectI(ctx, o->a, fuel);
      ClsPtr w = whnfClsI(kf, fuel);
      if (w->tag != ClsTag::Pi)
        throw CheckError(ErrKind::NotAFunction,
                         "cannot apply " + printObj(o->a) + " of class " + printCls(kf));
      try {
        checkObjectI(ctx, o->b, clsOfSort(w->dom), fuel);
      } catch (CheckError& e) {
        // an unbound name is unbound no matter how deeply it sits; don't relabel it
        if (e.kind() == ErrKind::FuelExhausted || e.kind() == ErrKind::UnboundVariable) throw;
        throw CheckError(ErrKind::ArgumentClassMismatch,
                         "argument " + printObj(o->b) + ": " + e.what());
      }
      return openCls(w->cod, o->b);
    }
    case ObjTag::ClsObj:
      throw CheckError(ErrKind::NotASort,
                       printCls(o->cls) + " is a class, not an object; it cannot appear here");
  }
  throw std::logic_error("inferObject: unreachable");
}

void Checker::checkObjectI(const Telescope& ctx, const ObjPtr& o, const ClsPtr& k,
                           Fuel& fuel) const {
  ClsPtr w = whnfClsI(k, fuel);

  if (o->tag == ObjTag::Bullet) {
    if (w->tag != ClsTag::Eq)
      throw CheckError(ErrKind::ClassMismatch,
                       "'*' checks only against an equality class, not " + printCls(k));
    Verdict v = equalObjectsAt(ctx, w->lhs, w->rhs, clsOfSort(w->dom));
    if (v.kind == VerdictKind::FuelExhausted)
      throw CheckError(ErrKind::FuelExhausted, "fuel exhausted while deciding " + printCls(w));
    if (!v.proven())
      throw CheckError(ErrKind::EqualityNotProven, "could not prove " + printObj(w->lhs) +
                                                       " = " + printObj(w->rhs) + " at " +
                                                       printObj(w->dom));
    return;
  }

  if (o->tag == ObjTag::Lam && w->tag == ClsTag::Pi) {
    checkSortObjI(ctx, o->a, fuel);
    Verdict v = equalObjectsAt(ctx, o->a, w->dom, Cls::sort());
    if (v.kind == VerdictKind::FuelExhausted)
      throw CheckError(ErrKind::FuelExhausted, "fuel exhausted while comparing domains");
    if (!v.proven())
      throw CheckError(ErrKind::ClassMismatch, "abstraction domain " + printObj(o->a) +
                                                   " differs from expected " + printObj(w->dom));
    std::set<std::string> taken = sigNames_;
    for (const auto& d : ctx.decls) taken.insert(d.name);
    freeVars(o, taken);
    freeVars(w, taken);
    std::string x = freshName(o->name.empty() ? "x" : o->name, taken);
    auto xv = Obj::fvar(x);
    checkObjectI(ctx.extended(x, clsOfSort(o->a)), openObj(o->b, xv), openCls(w->cod, xv), fuel);
    return;
  }

  ClsPtr inferred = inferObjectI(ctx, o, fuel);
  Verdict v = equalClasses(ctx, inferred, w);
  if (v.kind == VerdictKind::FuelExhausted)
    throw CheckError(ErrKind::FuelExhausted, "fuel exhausted while comparing classes");
  if (!v.proven())
    throw CheckError(ErrKind::ClassMismatch,
                     "expected " + printCls(k) + ", inferred " + printCls(inferred));
}

}  // namespace eqlf

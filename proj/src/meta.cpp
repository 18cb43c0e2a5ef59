#include "eqlf/meta.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

#include "eqlf/corpus.hpp"

namespace eqlf::meta {

const char* lemmaOutcomeName(LemmaOutcome o) {
  switch (o) {
    case LemmaOutcome::Pass: return "pass";
    case LemmaOutcome::Fail: return "fail";
    case LemmaOutcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

void LemmaCounts::add(LemmaOutcome o) {
  switch (o) {
    case LemmaOutcome::Pass: ++pass; break;
    case LemmaOutcome::Fail: ++fail; break;
    case LemmaOutcome::Inconclusive: ++inconclusive; break;
  }
}

namespace {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Candidate generator: random application spines over signature constants
// and context variables, with occasional framework lambdas. Candidates are
// cheap and mostly ill-classed; the kernel decides which ones survive.
class Gen {
public:
  Gen(const Checker& ck, const EnumBudget& budget, uint64_t seed, const std::string& sigId)
      : ck_(ck), budget_(budget), rng_(seed ^ fnv1a(sigId)) {
    for (const auto& d : ck.signature().decls) heads_.push_back(Obj::fvar(d.name));
  }

  size_t pick(size_t n) { return n == 0 ? 0 : static_cast<size_t>(rng_() % n); }
  bool chance(unsigned percent) { return rng_() % 100 < percent; }

  ObjPtr candidate(const Telescope& ctx, int lamDepth) {
    return candidate(ctx, lamDepth, budget_.maxTermSize);
  }

  // maxNodes keeps the recursion subcritical: every argument position gets a
  // strictly smaller budget, and a spent budget produces a bare head
  ObjPtr candidate(const Telescope& ctx, int lamDepth, size_t maxNodes) {
    if (lamDepth > 0 && maxNodes >= 4 && chance(12)) {
      if (auto dom = sortCandidate(ctx)) {
        std::string x = freshLocal(ctx);
        ObjPtr body = candidate(ctx.extended(x, clsOfSort(*dom)), lamDepth - 1, maxNodes - 1);
        return Obj::lam(*dom, x, closeObj(body, x));
      }
    }
    ObjPtr t = pickHead(ctx);
    if (maxNodes <= 1) return t;
    size_t arity = pick(4);
    for (size_t i = 0; i < arity; ++i)
      t = Obj::app(t, candidate(ctx, 0, (maxNodes - 1) / (arity - i)));
    return t;
  }

  // A candidate that the kernel accepts as a sort-object, if luck allows.
  std::optional<ObjPtr> sortCandidate(const Telescope& ctx) {
    for (int i = 0; i < 8; ++i) {
      ObjPtr c = candidate(ctx, 0, budget_.maxTermSize);
      if (objSize(c) > budget_.maxTermSize) continue;
      try {
        if (ck_.whnfClass(ctx, ck_.inferObject(ctx, c))->tag == ClsTag::Sort) return c;
      } catch (const CheckError&) {
      }
    }
    return std::nullopt;
  }

  Telescope randomContext() {
    Telescope ctx;
    size_t depth = pick(budget_.maxCtxDepth + 1);
    for (size_t i = 0; i < depth; ++i) {
      auto dom = sortCandidate(ctx);
      if (!dom) break;
      ctx.push(freshCtxName(ctx), clsOfSort(*dom));
    }
    return ctx;
  }

  std::string freshCtxName(const Telescope& ctx) {
    std::string n = "x" + std::to_string(ctx.decls.size());
    while (ck_.signature().lookup(n) || ctx.lookup(n)) n += "'";
    return n;
  }

  std::string freshLocal(const Telescope& ctx) {
    std::string n = "z" + std::to_string(ctx.decls.size());
    while (ck_.signature().lookup(n) || ctx.lookup(n)) n += "'";
    return n;
  }

private:
  ObjPtr pickHead(const Telescope& ctx) {
    size_t extra = 1;  // lzero
    size_t n = heads_.size() + ctx.decls.size() + extra;
    size_t i = pick(n);
    if (i < heads_.size()) return heads_[i];
    i -= heads_.size();
    if (i < ctx.decls.size()) return Obj::fvar(ctx.decls[i].name);
    ObjPtr l = Obj::lzero();
    while (chance(30)) l = Obj::lsuc(l);
    return l;
  }

  const Checker& ck_;
  const EnumBudget& budget_;
  std::mt19937_64 rng_;
  std::vector<ObjPtr> heads_;
};

}  // namespace

std::vector<DerivationSample> enumerate(const Checker& ck, const std::string& sigId,
                                        const EnumBudget& budget, uint64_t seed) {
  std::vector<DerivationSample> out;
  if (budget.sampleCount == 0) return out;

  // every bare constant that infers on its own comes first, smallest samples
  // of all; then lzero, the one closed object every signature shares
  std::vector<ObjPtr> atoms;
  for (const auto& d : ck.signature().decls) atoms.push_back(Obj::fvar(d.name));
  atoms.push_back(Obj::lzero());
  for (const auto& a : atoms) {
    if (out.size() >= budget.sampleCount) return out;
    try {
      out.push_back({sigId, {}, a, ck.inferObject({}, a)});
    } catch (const CheckError&) {
    }
  }

  Gen gen(ck, budget, seed, sigId);
  size_t attempts = 0, cap = 60 * budget.sampleCount + 200;
  while (out.size() < budget.sampleCount && attempts < cap) {
    Telescope ctx = gen.randomContext();
    for (int tries = 0; tries < 6 && out.size() < budget.sampleCount; ++tries) {
      ++attempts;
      ObjPtr o = gen.candidate(ctx, 2);
      if (objSize(o) > budget.maxTermSize) continue;
      try {
        out.push_back({sigId, ctx, o, ck.inferObject(ctx, o)});
      } catch (const CheckError&) {
      }
    }
  }
  return out;
}

std::vector<DerivationSample> enumerate(const std::string& sigId, const EnumBudget& budget,
                                        uint64_t seed) {
  Checker ck(stdsigs::load(sigId));
  return enumerate(ck, sigId, budget, seed);
}

// ---------------------------------------------------------------------------

namespace {

LemmaOutcome verdictOutcome(const Verdict& v) {
  if (v.kind == VerdictKind::FuelExhausted) return LemmaOutcome::Inconclusive;
  return v.proven() ? LemmaOutcome::Pass : LemmaOutcome::Fail;
}

}  // namespace

LemmaOutcome checkPresuppositions(const Checker& ck, const DerivationSample& s) {
  try {
    ck.checkContext(s.context);
    ck.checkClass(s.context, s.inferredClass);
    ClsPtr k = ck.inferObject(s.context, s.object);
    return verdictOutcome(ck.equalClasses(s.context, k, s.inferredClass));
  } catch (const CheckError& e) {
    return e.kind() == ErrKind::FuelExhausted ? LemmaOutcome::Inconclusive : LemmaOutcome::Fail;
  }
}

LemmaOutcome checkWeakening(const Checker& ck, const DerivationSample& s,
                            const std::optional<Insertion>& insertion) {
  Telescope weak;
  if (!insertion) {
    weak = s.context;
  } else {
    if (insertion->at > s.context.decls.size())
      throw std::invalid_argument("weakening: insertion point past the end of the context");
    if (ck.signature().lookup(insertion->decl.name) || s.context.lookup(insertion->decl.name))
      throw std::invalid_argument("weakening: inserted name '" + insertion->decl.name +
                                  "' is already declared");
    Telescope prefix;
    for (size_t i = 0; i < insertion->at; ++i)
      prefix.push(s.context.decls[i].name, s.context.decls[i].cls);
    try {
      ck.checkClass(prefix, insertion->decl.cls);
    } catch (const CheckError& e) {
      if (e.kind() == ErrKind::FuelExhausted) return LemmaOutcome::Inconclusive;
      throw std::invalid_argument(std::string("weakening: ill-formed insertion: ") + e.what());
    }
    weak = prefix;
    weak.push(insertion->decl.name, insertion->decl.cls);
    for (size_t i = insertion->at; i < s.context.decls.size(); ++i)
      weak.push(s.context.decls[i].name, s.context.decls[i].cls);
  }
  try {
    ClsPtr k = ck.inferObject(weak, s.object);
    return verdictOutcome(ck.equalClasses(weak, k, s.inferredClass));
  } catch (const CheckError& e) {
    return e.kind() == ErrKind::FuelExhausted ? LemmaOutcome::Inconclusive : LemmaOutcome::Fail;
  }
}

namespace {

// Split Γ at var: (prefix, var's class, the declarations after it).
struct CtxSplit {
  Telescope prefix;
  ClsPtr cls;
  std::vector<Decl> rest;
};

CtxSplit splitAt(const DerivationSample& s, const std::string& var) {
  CtxSplit sp;
  size_t i = 0;
  for (; i < s.context.decls.size(); ++i) {
    if (s.context.decls[i].name == var) break;
    sp.prefix.push(s.context.decls[i].name, s.context.decls[i].cls);
  }
  if (i == s.context.decls.size())
    throw std::invalid_argument("'" + var + "' is not declared in the sample's context");
  sp.cls = s.context.decls[i].cls;
  for (++i; i < s.context.decls.size(); ++i) sp.rest.push_back(s.context.decls[i]);
  return sp;
}

// nullopt means the precondition could not be verified before fuel ran out
std::optional<bool> checksAgainst(const Checker& ck, const Telescope& ctx, const ObjPtr& o,
                                  const ClsPtr& k) {
  try {
    ck.checkObject(ctx, o, k);
    return true;
  } catch (const CheckError& e) {
    if (e.kind() == ErrKind::FuelExhausted) return std::nullopt;
    return false;
  }
}

}  // namespace

LemmaOutcome checkSubstitution(const Checker& ck, const DerivationSample& s,
                               const std::string& var, const ObjPtr& replacement) {
  CtxSplit sp = splitAt(s, var);
  auto pre = checksAgainst(ck, sp.prefix, replacement, sp.cls);
  if (!pre) return LemmaOutcome::Inconclusive;
  if (!*pre)
    throw std::invalid_argument("substitution: replacement does not check against the class of '" +
                                var + "'");
  Telescope sub = sp.prefix;
  for (const auto& d : sp.rest) sub.push(d.name, substCls(d.cls, var, replacement));
  try {
    ck.checkContext(sub);
    ck.checkObject(sub, substObj(s.object, var, replacement),
                   substCls(s.inferredClass, var, replacement));
    return LemmaOutcome::Pass;
  } catch (const CheckError& e) {
    return e.kind() == ErrKind::FuelExhausted ? LemmaOutcome::Inconclusive : LemmaOutcome::Fail;
  }
}

LemmaOutcome checkFunctionality(const Checker& ck, const DerivationSample& s,
                                const std::string& var, const ObjPtr& repl1,
                                const ObjPtr& repl2) {
  CtxSplit sp = splitAt(s, var);
  for (const ObjPtr* r : {&repl1, &repl2}) {
    auto pre = checksAgainst(ck, sp.prefix, *r, sp.cls);
    if (!pre) return LemmaOutcome::Inconclusive;
    if (!*pre)
      throw std::invalid_argument(
          "functionality: replacement does not check against the class of '" + var + "'");
  }
  Verdict eq = ck.equalObjectsAt(sp.prefix, repl1, repl2, sp.cls);
  if (eq.kind == VerdictKind::FuelExhausted) return LemmaOutcome::Inconclusive;
  if (!eq.proven())
    throw std::invalid_argument("functionality: the replacements are not provably equal");

  Telescope sub = sp.prefix;
  for (const auto& d : sp.rest) sub.push(d.name, substCls(d.cls, var, repl1));
  Verdict v = ck.equalObjectsAt(sub, substObj(s.object, var, repl1),
                                substObj(s.object, var, repl2),
                                substCls(s.inferredClass, var, repl1));
  return verdictOutcome(v);
}

// ---------------------------------------------------------------------------

long SuiteReport::failures() const {
  return presuppositions.fail + weakening.fail + substitution.fail + functionality.fail;
}

long SuiteReport::inconclusive() const {
  return presuppositions.inconclusive + weakening.inconclusive + substitution.inconclusive +
         functionality.inconclusive;
}

long SuiteReport::checksRun() const {
  return presuppositions.total() + weakening.total() + substitution.total() +
         functionality.total();
}

std::string SuiteReport::str() const {
  std::ostringstream os;
  os << "meta " << signatureId << " seed=" << seed << " samples=" << samples << "\n";
  auto line = [&](const char* name, const LemmaCounts& c) {
    os << name << " pass=" << c.pass << " fail=" << c.fail
       << " inconclusive=" << c.inconclusive << "\n";
  };
  line("presuppositions", presuppositions);
  line("weakening", weakening);
  line("substitution", substitution);
  line("functionality", functionality);
  return os.str();
}

SuiteReport runSuite(const std::string& sigId, const EnumBudget& budget, uint64_t seed) {
  Checker ck(stdsigs::load(sigId));
  std::vector<DerivationSample> samples = enumerate(ck, sigId, budget, seed);
  Gen gen(ck, budget, seed + 0x9e3779b97f4a7c15ull, sigId);

  SuiteReport rep;
  rep.signatureId = sigId;
  rep.seed = seed;
  rep.samples = static_cast<long>(samples.size());

  for (const auto& s : samples) {
    rep.presuppositions.add(checkPresuppositions(ck, s));

    std::optional<Insertion> ins;
    size_t at = gen.pick(s.context.decls.size() + 1);
    Telescope prefix;
    for (size_t i = 0; i < at; ++i) prefix.push(s.context.decls[i].name, s.context.decls[i].cls);
    if (auto dom = gen.sortCandidate(prefix)) {
      std::string n = "w";
      while (ck.signature().lookup(n) || s.context.lookup(n)) n += "'";
      ins = Insertion{at, {n, clsOfSort(*dom)}};
    }
    rep.weakening.add(checkWeakening(ck, s, ins));

    if (!s.context.decls.empty()) {
      size_t idx = gen.pick(s.context.decls.size());
      const Decl& target = s.context.decls[idx];
      Telescope g1;
      for (size_t i = 0; i < idx; ++i) g1.push(s.context.decls[i].name, s.context.decls[i].cls);
      ObjPtr repl;
      for (int t = 0; t < 12 && !repl; ++t) {
        ObjPtr c = gen.candidate(g1, 1);
        if (objSize(c) > budget.maxTermSize) continue;
        if (checksAgainst(ck, g1, c, target.cls) == std::optional<bool>(true)) repl = c;
      }
      if (repl) {
        rep.substitution.add(checkSubstitution(ck, s, target.name, repl));
        try {
          ObjPtr alt = ck.normalize(g1, repl);
          rep.functionality.add(checkFunctionality(ck, s, target.name, repl, alt));
        } catch (const CheckError& e) {
          if (e.kind() != ErrKind::FuelExhausted) throw;
          rep.functionality.add(LemmaOutcome::Inconclusive);
        }
      }
    }
  }
  return rep;
}

}  // namespace eqlf::meta

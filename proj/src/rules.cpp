// Miller-pattern matching, rule instantiation, and extraction of rewrite /
// reflection / unicity rules from equational signature constants.
#include <algorithm>
#include <stdexcept>

#include "eqlf/kernel.hpp"

namespace eqlf {

namespace {

// Matching locals are named "%0", "%1", ...; '%' is not lexable, so they can
// never collide with user identifiers or signature constants.
bool isLocalName(const std::string& n) { return !n.empty() && n[0] == '%'; }

struct Matcher {
  const std::set<std::string>& pvars;
  PatternSubst sub;
  std::set<std::string> locals;
  int fresh = 0;

  std::string mkLocal() { return "%" + std::to_string(fresh++); }

  bool bindFlex(const std::string& v, const std::vector<std::string>& argLocals,
                const ObjPtr& subj) {
    for (const auto& n : freeVarsObj(subj)) {
      if (!isLocalName(n)) continue;
      if (std::find(argLocals.begin(), argLocals.end(), n) == argLocals.end()) return false;
    }
    auto it = sub.find(v);
    if (it == sub.end()) {
      sub.emplace(v, PatternBinding{argLocals, subj});
      return true;
    }
    const PatternBinding& prev = it->second;
    if (prev.locals.size() != argLocals.size()) return false;
    // simultaneous rename argLocals -> prev.locals, via temporaries so a
    // permuted argument list cannot chain-rename
    ObjPtr renamed = subj;
    for (size_t i = 0; i < argLocals.size(); ++i)
      renamed = substObj(renamed, argLocals[i], Obj::fvar("%#" + std::to_string(i)));
    for (size_t i = 0; i < argLocals.size(); ++i)
      renamed = substObj(renamed, "%#" + std::to_string(i), Obj::fvar(prev.locals[i]));
    return alphaEqual(prev.body, renamed);
  }

  // A flexible spine is a pattern variable applied to distinct locals.
  bool flexSpine(const ObjPtr& pat, std::string& v, std::vector<std::string>& argLocals) {
    auto [h, args] = spine(pat);
    if (!h || h->tag != ObjTag::FVar || !pvars.count(h->name)) return false;
    v = h->name;
    argLocals.clear();
    std::set<std::string> seen;
    for (const auto& a : args) {
      if (a->tag != ObjTag::FVar || !locals.count(a->name) || seen.count(a->name)) return false;
      seen.insert(a->name);
      argLocals.push_back(a->name);
    }
    return true;
  }

  bool matchO(const ObjPtr& pat, const ObjPtr& subj) {
    if (!pat || !subj) return false;
    {
      std::string v;
      std::vector<std::string> argLocals;
      if (pat->tag == ObjTag::App || (pat->tag == ObjTag::FVar && pvars.count(pat->name))) {
        if (flexSpine(pat, v, argLocals)) return bindFlex(v, argLocals, subj);
        if (pat->tag == ObjTag::FVar) return false;  // flexible head, non-Miller shape
        auto [h, args] = spine(pat);
        (void)args;
        if (h && h->tag == ObjTag::FVar && pvars.count(h->name)) return false;
      }
    }
    if (pat->tag != subj->tag) return false;
    switch (pat->tag) {
      case ObjTag::FVar: return pat->name == subj->name;
      case ObjTag::BVar: return pat->index == subj->index;
      case ObjTag::Bullet:
      case ObjTag::Lvl:
      case ObjTag::LZero: return true;
      case ObjTag::LSuc: return matchO(pat->a, subj->a);
      case ObjTag::App: return matchO(pat->a, subj->a) && matchO(pat->b, subj->b);
      case ObjTag::PiSort:
      case ObjTag::Lam: {
        if (!matchO(pat->a, subj->a)) return false;
        std::string l = mkLocal();
        locals.insert(l);
        auto lv = Obj::fvar(l);
        return matchO(openObj(pat->b, lv), openObj(subj->b, lv));
      }
      case ObjTag::ClsObj: return matchC(pat->cls, subj->cls);
    }
    return false;
  }

  bool matchC(const ClsPtr& pat, const ClsPtr& subj) {
    if (!pat || !subj || pat->tag != subj->tag) return false;
    switch (pat->tag) {
      case ClsTag::Sort: return true;
      case ClsTag::Pi: {
        if (!matchO(pat->dom, subj->dom)) return false;
        std::string l = mkLocal();
        locals.insert(l);
        auto lv = Obj::fvar(l);
        return matchC(openCls(pat->cod, lv), openCls(subj->cod, lv));
      }
      case ClsTag::Eq:
        return matchO(pat->dom, subj->dom) && matchO(pat->lhs, subj->lhs) &&
               matchO(pat->rhs, subj->rhs);
      case ClsTag::Incl: return matchO(pat->obj, subj->obj);
    }
    return false;
  }
};

struct Instantiator {
  const PatternSubst& sub;

  ObjPtr flex(const ObjPtr& t, int depth) {
    auto [h, args] = spine(t);
    if (!h || h->tag != ObjTag::FVar) return nullptr;
    auto it = sub.find(h->name);
    if (it == sub.end()) return nullptr;
    const PatternBinding& b = it->second;
    if (args.size() < b.locals.size())
      throw std::logic_error("instantiate: pattern variable '" + h->name +
                             "' applied to too few arguments");
    ObjPtr res = depth > 0 ? shiftObj(b.body, depth, 0) : b.body;
    size_t i = 0;
    for (; i < b.locals.size(); ++i) res = substObj(res, b.locals[i], obj(args[i], depth));
    for (; i < args.size(); ++i) res = Obj::app(res, obj(args[i], depth));
    return res;
  }

  ObjPtr obj(const ObjPtr& t, int depth) {
    if (!t) return t;
    if (ObjPtr f = flex(t, depth)) return f;
    switch (t->tag) {
      case ObjTag::FVar:
      case ObjTag::BVar:
      case ObjTag::Bullet:
      case ObjTag::Lvl:
      case ObjTag::LZero: return t;
      case ObjTag::LSuc: {
        auto a = obj(t->a, depth);
        return a == t->a ? t : Obj::lsuc(a);
      }
      case ObjTag::PiSort: {
        auto d = obj(t->a, depth);
        auto c = obj(t->b, depth + 1);
        return (d == t->a && c == t->b) ? t : Obj::piSort(d, t->name, c);
      }
      case ObjTag::Lam: {
        auto d = obj(t->a, depth);
        auto c = obj(t->b, depth + 1);
        return (d == t->a && c == t->b) ? t : Obj::lam(d, t->name, c);
      }
      case ObjTag::App: {
        auto f = obj(t->a, depth);
        auto x = obj(t->b, depth);
        return (f == t->a && x == t->b) ? t : Obj::app(f, x);
      }
      case ObjTag::ClsObj: {
        auto k = cls(t->cls, depth);
        return k == t->cls ? t : Obj::clsObj(k);
      }
    }
    return t;
  }

  ClsPtr cls(const ClsPtr& k, int depth) {
    if (!k) return k;
    switch (k->tag) {
      case ClsTag::Sort: return k;
      case ClsTag::Pi: {
        auto d = obj(k->dom, depth);
        auto c = cls(k->cod, depth + 1);
        return (d == k->dom && c == k->cod) ? k : Cls::pi(d, k->hint, c);
      }
      case ClsTag::Eq: {
        auto s = obj(k->dom, depth);
        auto l = obj(k->lhs, depth);
        auto r = obj(k->rhs, depth);
        return (s == k->dom && l == k->lhs && r == k->rhs) ? k : Cls::eq(s, l, r);
      }
      case ClsTag::Incl: {
        auto o = obj(k->obj, depth);
        return o == k->obj ? k : Cls::incl(o);
      }
    }
    return k;
  }
};

// Checks the Miller condition and collects per-variable spine arities.
struct MillerScan {
  const std::set<std::string>& pvars;
  std::map<std::string, int> arity;
  std::set<std::string> locals;
  int fresh = 0;

  bool obj(const ObjPtr& t) {
    if (!t) return false;
    auto [h, args] = spine(t);
    if (h && h->tag == ObjTag::FVar && pvars.count(h->name)) {
      std::set<std::string> seen;
      for (const auto& a : args) {
        if (a->tag != ObjTag::FVar || !locals.count(a->name) || seen.count(a->name)) return false;
        seen.insert(a->name);
      }
      auto it = arity.find(h->name);
      if (it != arity.end() && it->second != (int)args.size()) return false;
      arity[h->name] = (int)args.size();
      return true;
    }
    switch (t->tag) {
      case ObjTag::FVar:
      case ObjTag::BVar:
      case ObjTag::Bullet:
      case ObjTag::Lvl:
      case ObjTag::LZero: return true;
      case ObjTag::LSuc: return obj(t->a);
      case ObjTag::App: return obj(t->a) && obj(t->b);
      case ObjTag::PiSort:
      case ObjTag::Lam: {
        if (!obj(t->a)) return false;
        std::string l = "%" + std::to_string(fresh++);
        locals.insert(l);
        return obj(openObj(t->b, Obj::fvar(l)));
      }
      case ObjTag::ClsObj: return cls(t->cls);
    }
    return false;
  }

  bool cls(const ClsPtr& k) {
    if (!k) return false;
    switch (k->tag) {
      case ClsTag::Sort: return true;
      case ClsTag::Pi: {
        if (!obj(k->dom)) return false;
        std::string l = "%" + std::to_string(fresh++);
        locals.insert(l);
        return cls(openCls(k->cod, Obj::fvar(l)));
      }
      case ClsTag::Eq: return obj(k->dom) && obj(k->lhs) && obj(k->rhs);
      case ClsTag::Incl: return obj(k->obj);
    }
    return false;
  }
};

// Every occurrence of an arity-n pattern variable in a template must head a
// spine of at least n arguments, or instantiation cannot build the result.
bool templateUsable(const ObjPtr& t, const std::map<std::string, int>& arity) {
  if (!t) return true;
  auto [h, args] = spine(t);
  if (h && h->tag == ObjTag::FVar) {
    auto it = arity.find(h->name);
    if (it != arity.end() && (int)args.size() < it->second) return false;
  }
  switch (t->tag) {
    case ObjTag::FVar:
    case ObjTag::BVar:
    case ObjTag::Bullet:
    case ObjTag::Lvl:
    case ObjTag::LZero: return true;
    case ObjTag::LSuc: return templateUsable(t->a, arity);
    case ObjTag::App: {
      // the head was vetted above; check every argument subtree
      auto [h2, args2] = spine(t);
      (void)h2;
      for (const auto& a : args2)
        if (!templateUsable(a, arity)) return false;
      return true;
    }
    case ObjTag::PiSort:
    case ObjTag::Lam:
      return templateUsable(t->a, arity) && templateUsable(t->b, arity);
    case ObjTag::ClsObj: return true;
  }
  return true;
}

std::set<std::string> patternVarsIn(const ObjPtr& t, const std::set<std::string>& pvars) {
  std::set<std::string> out;
  for (const auto& n : freeVarsObj(t))
    if (pvars.count(n)) out.insert(n);
  return out;
}

bool subsetOf(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::all_of(a.begin(), a.end(), [&](const std::string& x) { return b.count(x) > 0; });
}

}  // namespace

std::optional<PatternSubst> matchPattern(const ObjPtr& pattern, const ObjPtr& subject,
                                         const std::set<std::string>& pvars) {
  Matcher m{pvars, {}, {}, 0};
  if (!m.matchO(pattern, subject)) return std::nullopt;
  return std::move(m.sub);
}

std::optional<PatternSubst> matchClsPattern(const ClsPtr& pattern, const ClsPtr& subject,
                                            const std::set<std::string>& pvars) {
  Matcher m{pvars, {}, {}, 0};
  if (!m.matchC(pattern, subject)) return std::nullopt;
  return std::move(m.sub);
}

ObjPtr instantiate(const ObjPtr& tmpl, const PatternSubst& sub) {
  Instantiator in{sub};
  return in.obj(tmpl, 0);
}

ClsPtr instantiateCls(const ClsPtr& tmpl, const PatternSubst& sub) {
  Instantiator in{sub};
  return in.cls(tmpl, 0);
}

std::pair<Telescope, ClsPtr> peelTelescope(const ClsPtr& cls, const std::set<std::string>& avoid) {
  Telescope tele;
  std::set<std::string> taken = avoid;
  ClsPtr cur = cls;
  while (cur && cur->tag == ClsTag::Pi) {
    std::string x = freshName(cur->hint, taken);
    taken.insert(x);
    tele.push(x, clsOfSort(cur->dom));
    cur = openCls(cur->cod, Obj::fvar(x));
  }
  return {std::move(tele), cur};
}

SignatureRules extractRules(const Telescope& sig) {
  SignatureRules out;
  std::set<std::string> sigNames = sig.names();

  for (const auto& decl : sig.decls) {
    auto [tele, core] = peelTelescope(decl.cls, sigNames);
    if (!core || core->tag != ClsTag::Eq) continue;

    std::set<std::string> pvars;
    for (const auto& d : tele.decls) pvars.insert(d.name);

    const ObjPtr& s = core->dom;
    const ObjPtr& l = core->lhs;
    const ObjPtr& r = core->rhs;
    auto warn = [&](const std::string& why) { out.warnings.push_back(decl.name + ": " + why); };

    if (l->tag == ObjTag::FVar && pvars.count(l->name)) {
      std::set<std::string> sVars = patternVarsIn(s, pvars);

      // unicity shape: both endpoints are distinct bare variables of the
      // equation's own sort, and the sort pattern determines the rest
      if (r->tag == ObjTag::FVar && pvars.count(r->name) && r->name != l->name) {
        const ClsPtr* lc = tele.lookup(l->name);
        const ClsPtr* rc = tele.lookup(r->name);
        ClsPtr want = clsOfSort(s);
        bool clsOk = lc && rc && alphaEqual(*lc, want) && alphaEqual(*rc, want);
        bool cover = true;
        for (const auto& d : tele.decls)
          if (d.name != l->name && d.name != r->name && !sVars.count(d.name)) cover = false;
        MillerScan ms{pvars, {}, {}, 0};
        if (clsOk && cover && ms.obj(s)) {
          out.unicities.push_back(UnicityRule{decl.name, tele, s, pvars});
          continue;
        }
      }

      // reflection shape: some premise sort P determines the equation, so a
      // hypothesis of sort P justifies lhs = rhs
      {
        std::set<std::string> need = sVars;
        for (const auto& n : patternVarsIn(l, pvars)) need.insert(n);
        for (const auto& n : patternVarsIn(r, pvars)) need.insert(n);
        bool found = false;
        for (auto it = tele.decls.rbegin(); it != tele.decls.rend() && !found; ++it) {
          if (it->cls->tag != ClsTag::Incl) continue;
          const ObjPtr& p = it->cls->obj;
          std::set<std::string> pVarsIn = patternVarsIn(p, pvars);
          if (!subsetOf(need, pVarsIn)) continue;
          bool cover = true;
          for (const auto& d : tele.decls)
            if (d.name != it->name && !pVarsIn.count(d.name)) cover = false;
          if (!cover) continue;
          MillerScan ms{pvars, {}, {}, 0};
          if (!ms.obj(p)) continue;
          out.reflections.push_back(ReflectionRule{decl.name, tele, p, s, l, r, pvars});
          found = true;
        }
        if (found) continue;
      }

      // expansion: lhs is a bare variable, rhs rebuilt from the sort match
      {
        MillerScan ms{pvars, {}, {}, 0};
        if (ms.obj(s)) {
          std::set<std::string> bound = sVars;
          bound.insert(l->name);
          auto arity = ms.arity;
          arity[l->name] = 0;
          if (subsetOf(patternVarsIn(r, pvars), bound) && templateUsable(r, arity)) {
            out.rewrites.push_back(
                RewriteRule{decl.name, tele, s, l, r, RuleKind::Expansion, pvars});
            continue;
          }
        }
        warn("equation has a bare-variable left side but is not usable as an expansion rule");
        continue;
      }
    }

    // reduction: structural left side
    MillerScan ms{pvars, {}, {}, 0};
    if (!ms.obj(l)) {
      warn("left side is not a pattern (each variable must be applied to distinct bound variables)");
      continue;
    }
    std::set<std::string> bound = patternVarsIn(l, pvars);
    std::set<std::string> need = patternVarsIn(r, pvars);
    for (const auto& n : patternVarsIn(s, pvars)) need.insert(n);
    if (!subsetOf(need, bound)) {
      warn("right side or sort mentions variables the left side does not determine");
      continue;
    }
    if (!templateUsable(r, ms.arity) || !templateUsable(s, ms.arity)) {
      warn("right side applies a higher-order variable to too few arguments");
      continue;
    }
    out.rewrites.push_back(RewriteRule{decl.name, tele, s, l, r, RuleKind::Reduction, pvars});
  }
  return out;
}

}  // namespace eqlf

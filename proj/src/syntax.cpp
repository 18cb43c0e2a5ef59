#include "eqlf/syntax.hpp"

#include <algorithm>
#include <stdexcept>

namespace eqlf {

namespace {

ObjPtr mk(ObjTag tag) {
  auto o = std::make_shared<Obj>();
  o->tag = tag;
  return o;
}

ClsPtr mkc(ClsTag tag) {
  auto k = std::make_shared<Cls>();
  k->tag = tag;
  return k;
}

}  // namespace

ObjPtr Obj::fvar(std::string n) {
  auto o = std::make_shared<Obj>();
  o->tag = ObjTag::FVar;
  o->name = std::move(n);
  return o;
}

ObjPtr Obj::bvar(int i) {
  auto o = std::make_shared<Obj>();
  o->tag = ObjTag::BVar;
  o->index = i;
  return o;
}

ObjPtr Obj::bullet() {
  static const ObjPtr it = mk(ObjTag::Bullet);
  return it;
}

ObjPtr Obj::piSort(ObjPtr dom, std::string hint, ObjPtr cod) {
  auto o = mk(ObjTag::PiSort);
  auto m = std::const_pointer_cast<Obj>(o);
  m->a = std::move(dom);
  m->name = std::move(hint);
  m->b = std::move(cod);
  return o;
}

ObjPtr Obj::lam(ObjPtr dom, std::string hint, ObjPtr body) {
  auto o = mk(ObjTag::Lam);
  auto m = std::const_pointer_cast<Obj>(o);
  m->a = std::move(dom);
  m->name = std::move(hint);
  m->b = std::move(body);
  return o;
}

ObjPtr Obj::app(ObjPtr fn, ObjPtr arg) {
  auto o = mk(ObjTag::App);
  auto m = std::const_pointer_cast<Obj>(o);
  m->a = std::move(fn);
  m->b = std::move(arg);
  return o;
}

ObjPtr Obj::app(ObjPtr fn, const std::vector<ObjPtr>& args) {
  ObjPtr acc = std::move(fn);
  for (const auto& a : args) acc = app(acc, a);
  return acc;
}

ObjPtr Obj::lvl() {
  static const ObjPtr it = mk(ObjTag::Lvl);
  return it;
}

ObjPtr Obj::lzero() {
  static const ObjPtr it = mk(ObjTag::LZero);
  return it;
}

ObjPtr Obj::lsuc(ObjPtr i) {
  auto o = mk(ObjTag::LSuc);
  std::const_pointer_cast<Obj>(o)->a = std::move(i);
  return o;
}

ObjPtr Obj::clsObj(ClsPtr k) {
  auto o = mk(ObjTag::ClsObj);
  std::const_pointer_cast<Obj>(o)->cls = std::move(k);
  return o;
}

ClsPtr Cls::sort() {
  static const ClsPtr it = mkc(ClsTag::Sort);
  return it;
}

ClsPtr Cls::pi(ObjPtr dom, std::string hint, ClsPtr cod) {
  auto k = mkc(ClsTag::Pi);
  auto m = std::const_pointer_cast<Cls>(k);
  m->dom = std::move(dom);
  m->hint = std::move(hint);
  m->cod = std::move(cod);
  return k;
}

ClsPtr Cls::eq(ObjPtr sortObj, ObjPtr l, ObjPtr r) {
  auto k = mkc(ClsTag::Eq);
  auto m = std::const_pointer_cast<Cls>(k);
  m->dom = std::move(sortObj);
  m->lhs = std::move(l);
  m->rhs = std::move(r);
  return k;
}

ClsPtr Cls::incl(ObjPtr o) {
  auto k = mkc(ClsTag::Incl);
  std::const_pointer_cast<Cls>(k)->obj = std::move(o);
  return k;
}

const ClsPtr* Telescope::lookup(const std::string& name) const {
  // Later declarations win, though check_context rejects duplicates anyway.
  for (auto it = decls.rbegin(); it != decls.rend(); ++it)
    if (it->name == name) return &it->cls;
  return nullptr;
}

Telescope Telescope::extended(std::string name, ClsPtr cls) const {
  Telescope t(*this);
  t.push(std::move(name), std::move(cls));
  return t;
}

Telescope Telescope::concat(const Telescope& other) const {
  Telescope t(*this);
  for (const auto& d : other.decls) t.decls.push_back(d);
  return t;
}

std::set<std::string> Telescope::names() const {
  std::set<std::string> out;
  for (const auto& d : decls) out.insert(d.name);
  return out;
}

bool alphaEqual(const ObjPtr& a, const ObjPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->tag != b->tag) return false;
  switch (a->tag) {
    case ObjTag::FVar: return a->name == b->name;
    case ObjTag::BVar: return a->index == b->index;
    case ObjTag::Bullet:
    case ObjTag::Lvl:
    case ObjTag::LZero: return true;
    case ObjTag::LSuc: return alphaEqual(a->a, b->a);
    case ObjTag::PiSort:
    case ObjTag::Lam:
    case ObjTag::App: return alphaEqual(a->a, b->a) && alphaEqual(a->b, b->b);
    case ObjTag::ClsObj: return alphaEqual(a->cls, b->cls);
  }
  return false;
}

bool alphaEqual(const ClsPtr& a, const ClsPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->tag != b->tag) return false;
  switch (a->tag) {
    case ClsTag::Sort: return true;
    case ClsTag::Pi: return alphaEqual(a->dom, b->dom) && alphaEqual(a->cod, b->cod);
    case ClsTag::Eq:
      return alphaEqual(a->dom, b->dom) && alphaEqual(a->lhs, b->lhs) &&
             alphaEqual(a->rhs, b->rhs);
    case ClsTag::Incl: return alphaEqual(a->obj, b->obj);
  }
  return false;
}

namespace {

bool hasLooseCls(const ClsPtr& k, int depth);

bool hasLooseObj(const ObjPtr& t, int depth) {
  if (!t) return false;
  switch (t->tag) {
    case ObjTag::FVar:
    case ObjTag::Bullet:
    case ObjTag::Lvl:
    case ObjTag::LZero: return false;
    case ObjTag::BVar: return t->index >= depth;
    case ObjTag::LSuc: return hasLooseObj(t->a, depth);
    case ObjTag::PiSort:
    case ObjTag::Lam: return hasLooseObj(t->a, depth) || hasLooseObj(t->b, depth + 1);
    case ObjTag::App: return hasLooseObj(t->a, depth) || hasLooseObj(t->b, depth);
    case ObjTag::ClsObj: return hasLooseCls(t->cls, depth);
  }
  return false;
}

bool hasLooseCls(const ClsPtr& k, int depth) {
  if (!k) return false;
  switch (k->tag) {
    case ClsTag::Sort: return false;
    case ClsTag::Pi: return hasLooseObj(k->dom, depth) || hasLooseCls(k->cod, depth + 1);
    case ClsTag::Eq:
      return hasLooseObj(k->dom, depth) || hasLooseObj(k->lhs, depth) ||
             hasLooseObj(k->rhs, depth);
    case ClsTag::Incl: return hasLooseObj(k->obj, depth);
  }
  return false;
}

}  // namespace

// Raise loose bound indices by `by`. Needed when a replacement that itself
// mentions enclosing binders lands underneath additional ones.
ObjPtr shiftObj(const ObjPtr& t, int by, int cutoff) {
  if (!t) return t;
  switch (t->tag) {
    case ObjTag::FVar:
    case ObjTag::Bullet:
    case ObjTag::Lvl:
    case ObjTag::LZero: return t;
    case ObjTag::BVar: return t->index >= cutoff ? Obj::bvar(t->index + by) : t;
    case ObjTag::LSuc: {
      auto a = shiftObj(t->a, by, cutoff);
      return a == t->a ? t : Obj::lsuc(a);
    }
    case ObjTag::PiSort: {
      auto d = shiftObj(t->a, by, cutoff);
      auto c = shiftObj(t->b, by, cutoff + 1);
      return (d == t->a && c == t->b) ? t : Obj::piSort(d, t->name, c);
    }
    case ObjTag::Lam: {
      auto d = shiftObj(t->a, by, cutoff);
      auto c = shiftObj(t->b, by, cutoff + 1);
      return (d == t->a && c == t->b) ? t : Obj::lam(d, t->name, c);
    }
    case ObjTag::App: {
      auto f = shiftObj(t->a, by, cutoff);
      auto x = shiftObj(t->b, by, cutoff);
      return (f == t->a && x == t->b) ? t : Obj::app(f, x);
    }
    case ObjTag::ClsObj: {
      auto k = shiftCls(t->cls, by, cutoff);
      return k == t->cls ? t : Obj::clsObj(k);
    }
  }
  return t;
}

ClsPtr shiftCls(const ClsPtr& k, int by, int cutoff) {
  if (!k) return k;
  switch (k->tag) {
    case ClsTag::Sort: return k;
    case ClsTag::Pi: {
      auto d = shiftObj(k->dom, by, cutoff);
      auto c = shiftCls(k->cod, by, cutoff + 1);
      return (d == k->dom && c == k->cod) ? k : Cls::pi(d, k->hint, c);
    }
    case ClsTag::Eq: {
      auto s = shiftObj(k->dom, by, cutoff);
      auto l = shiftObj(k->lhs, by, cutoff);
      auto r = shiftObj(k->rhs, by, cutoff);
      return (s == k->dom && l == k->lhs && r == k->rhs) ? k : Cls::eq(s, l, r);
    }
    case ClsTag::Incl: {
      auto o = shiftObj(k->obj, by, cutoff);
      return o == k->obj ? k : Cls::incl(o);
    }
  }
  return k;
}

namespace {

// One traversal engine for subst / open / close. Exactly one of the three
// modes is active per call; unchanged subtrees are returned by pointer.
// When the replacement itself has loose indices (rewriting in place under
// binders), it is shifted by the local depth on insertion.
enum class Mode { SubstFree, OpenBound, CloseFree };

struct Rewriter {
  Mode mode;
  const std::string* name;  // SubstFree / CloseFree
  const ObjPtr* repl;       // SubstFree / OpenBound
  bool replLoose = false;

  ObjPtr place(int depth) const {
    if (replLoose && depth > 0) return shiftObj(*repl, depth, 0);
    return *repl;
  }

  ObjPtr obj(const ObjPtr& t, int depth) const {
    if (!t) return t;
    switch (t->tag) {
      case ObjTag::FVar:
        if (mode == Mode::SubstFree && t->name == *name) return place(depth);
        if (mode == Mode::CloseFree && t->name == *name) return Obj::bvar(depth);
        return t;
      case ObjTag::BVar:
        // Loose indices above the instantiated binder step down on open and
        // up on close, so both work on open subterms; locally closed inputs
        // are untouched.
        if (mode == Mode::OpenBound) {
          if (t->index == depth) return place(depth);
          if (t->index > depth) return Obj::bvar(t->index - 1);
        }
        if (mode == Mode::CloseFree && t->index >= depth) return Obj::bvar(t->index + 1);
        return t;
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

  ClsPtr cls(const ClsPtr& k, int depth) const {
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

}  // namespace

ObjPtr substObj(const ObjPtr& target, const std::string& name, const ObjPtr& repl) {
  Rewriter r{Mode::SubstFree, &name, &repl, hasLooseObj(repl, 0)};
  return r.obj(target, 0);
}

ClsPtr substCls(const ClsPtr& target, const std::string& name, const ObjPtr& repl) {
  Rewriter r{Mode::SubstFree, &name, &repl, hasLooseObj(repl, 0)};
  return r.cls(target, 0);
}

ObjPtr openObj(const ObjPtr& body, const ObjPtr& repl) {
  Rewriter r{Mode::OpenBound, nullptr, &repl, hasLooseObj(repl, 0)};
  return r.obj(body, 0);
}

ClsPtr openCls(const ClsPtr& body, const ObjPtr& repl) {
  Rewriter r{Mode::OpenBound, nullptr, &repl, hasLooseObj(repl, 0)};
  return r.cls(body, 0);
}

ObjPtr closeObj(const ObjPtr& t, const std::string& name) {
  Rewriter r{Mode::CloseFree, &name, nullptr};
  return r.obj(t, 0);
}

ClsPtr closeCls(const ClsPtr& t, const std::string& name) {
  Rewriter r{Mode::CloseFree, &name, nullptr};
  return r.cls(t, 0);
}

void freeVars(const ObjPtr& t, std::set<std::string>& out) {
  if (!t) return;
  switch (t->tag) {
    case ObjTag::FVar: out.insert(t->name); break;
    case ObjTag::BVar:
    case ObjTag::Bullet:
    case ObjTag::Lvl:
    case ObjTag::LZero: break;
    case ObjTag::LSuc: freeVars(t->a, out); break;
    case ObjTag::PiSort:
    case ObjTag::Lam:
    case ObjTag::App:
      freeVars(t->a, out);
      freeVars(t->b, out);
      break;
    case ObjTag::ClsObj: freeVars(t->cls, out); break;
  }
}

void freeVars(const ClsPtr& k, std::set<std::string>& out) {
  if (!k) return;
  switch (k->tag) {
    case ClsTag::Sort: break;
    case ClsTag::Pi:
      freeVars(k->dom, out);
      freeVars(k->cod, out);
      break;
    case ClsTag::Eq:
      freeVars(k->dom, out);
      freeVars(k->lhs, out);
      freeVars(k->rhs, out);
      break;
    case ClsTag::Incl: freeVars(k->obj, out); break;
  }
}

std::set<std::string> freeVarsObj(const ObjPtr& t) {
  std::set<std::string> s;
  freeVars(t, s);
  return s;
}

std::set<std::string> freeVarsCls(const ClsPtr& t) {
  std::set<std::string> s;
  freeVars(t, s);
  return s;
}

size_t objSize(const ObjPtr& t) {
  if (!t) return 0;
  switch (t->tag) {
    case ObjTag::FVar:
    case ObjTag::BVar:
    case ObjTag::Bullet:
    case ObjTag::Lvl:
    case ObjTag::LZero: return 1;
    case ObjTag::LSuc: return 1 + objSize(t->a);
    case ObjTag::PiSort:
    case ObjTag::Lam:
    case ObjTag::App: return 1 + objSize(t->a) + objSize(t->b);
    case ObjTag::ClsObj: return 1 + clsSize(t->cls);
  }
  return 1;
}

size_t clsSize(const ClsPtr& k) {
  if (!k) return 0;
  switch (k->tag) {
    case ClsTag::Sort: return 1;
    case ClsTag::Pi: return 1 + objSize(k->dom) + clsSize(k->cod);
    case ClsTag::Eq: return 1 + objSize(k->dom) + objSize(k->lhs) + objSize(k->rhs);
    case ClsTag::Incl: return 1 + objSize(k->obj);
  }
  return 1;
}

namespace {

bool usesIndexObj(const ObjPtr& t, int depth);

bool usesIndexCls(const ClsPtr& k, int depth) {
  if (!k) return false;
  switch (k->tag) {
    case ClsTag::Sort: return false;
    case ClsTag::Pi: return usesIndexObj(k->dom, depth) || usesIndexCls(k->cod, depth + 1);
    case ClsTag::Eq:
      return usesIndexObj(k->dom, depth) || usesIndexObj(k->lhs, depth) ||
             usesIndexObj(k->rhs, depth);
    case ClsTag::Incl: return usesIndexObj(k->obj, depth);
  }
  return false;
}

bool usesIndexObj(const ObjPtr& t, int depth) {
  if (!t) return false;
  switch (t->tag) {
    case ObjTag::FVar:
    case ObjTag::Bullet:
    case ObjTag::Lvl:
    case ObjTag::LZero: return false;
    case ObjTag::BVar: return t->index == depth;
    case ObjTag::LSuc: return usesIndexObj(t->a, depth);
    case ObjTag::PiSort:
    case ObjTag::Lam: return usesIndexObj(t->a, depth) || usesIndexObj(t->b, depth + 1);
    case ObjTag::App: return usesIndexObj(t->a, depth) || usesIndexObj(t->b, depth);
    case ObjTag::ClsObj: return usesIndexCls(t->cls, depth);
  }
  return false;
}

}  // namespace

bool usesBound0(const ObjPtr& body) { return usesIndexObj(body, 0); }
bool usesBound0(const ClsPtr& body) { return usesIndexCls(body, 0); }

std::pair<ObjPtr, std::vector<ObjPtr>> spine(const ObjPtr& t) {
  std::vector<ObjPtr> args;
  ObjPtr head = t;
  while (head && head->tag == ObjTag::App) {
    args.push_back(head->b);
    head = head->a;
  }
  std::reverse(args.begin(), args.end());
  return {head, std::move(args)};
}

namespace {

void keyObj(const ObjPtr& t, std::string& out);

void keyCls(const ClsPtr& k, std::string& out) {
  if (!k) {
    out += '?';
    return;
  }
  switch (k->tag) {
    case ClsTag::Sort: out += 'S'; break;
    case ClsTag::Pi:
      out += "P(";
      keyObj(k->dom, out);
      out += ',';
      keyCls(k->cod, out);
      out += ')';
      break;
    case ClsTag::Eq:
      out += "E(";
      keyObj(k->dom, out);
      out += ',';
      keyObj(k->lhs, out);
      out += ',';
      keyObj(k->rhs, out);
      out += ')';
      break;
    case ClsTag::Incl:
      out += "I(";
      keyObj(k->obj, out);
      out += ')';
      break;
  }
}

void keyObj(const ObjPtr& t, std::string& out) {
  if (!t) {
    out += '?';
    return;
  }
  switch (t->tag) {
    case ObjTag::FVar:
      out += 'f';
      out += t->name;
      out += ';';
      break;
    case ObjTag::BVar:
      out += 'b';
      out += std::to_string(t->index);
      out += ';';
      break;
    case ObjTag::Bullet: out += '*'; break;
    case ObjTag::Lvl: out += 'v'; break;
    case ObjTag::LZero: out += 'z'; break;
    case ObjTag::LSuc:
      out += "s(";
      keyObj(t->a, out);
      out += ')';
      break;
    case ObjTag::PiSort:
      out += "p(";
      keyObj(t->a, out);
      out += ',';
      keyObj(t->b, out);
      out += ')';
      break;
    case ObjTag::Lam:
      out += "l(";
      keyObj(t->a, out);
      out += ',';
      keyObj(t->b, out);
      out += ')';
      break;
    case ObjTag::App:
      out += "a(";
      keyObj(t->a, out);
      out += ',';
      keyObj(t->b, out);
      out += ')';
      break;
    case ObjTag::ClsObj:
      out += "c[";
      keyCls(t->cls, out);
      out += ']';
      break;
  }
}

}  // namespace

std::string alphaKey(const ObjPtr& t) {
  std::string s;
  s.reserve(64);
  keyObj(t, s);
  return s;
}

std::string alphaKey(const ClsPtr& k) {
  std::string s;
  s.reserve(64);
  keyCls(k, s);
  return s;
}

ClsPtr clsOfSort(const ObjPtr& s) {
  if (s && s->tag == ObjTag::PiSort) return Cls::pi(s->a, s->name, clsOfSort(s->b));
  if (s && s->tag == ObjTag::ClsObj) return s->cls;
  return Cls::incl(s);
}

std::string freshName(const std::string& hint, const std::set<std::string>& taken) {
  std::string base = hint.empty() ? "_" : hint;
  if (!taken.count(base)) return base;
  std::string cand = base;
  for (int i = 0; i < 1000; ++i) {
    cand += '\'';
    if (!taken.count(cand)) return cand;
  }
  throw std::runtime_error("freshName: exhausted candidates for " + hint);
}

}  // namespace eqlf

// Core term language: objects, classes, telescopes.
//
// Bound variables are de Bruijn indices, free variables are names, so
// alpha-equivalent terms are structurally equal and substitution of a
// locally closed term for a free name can never capture.
#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace eqlf {

class Obj;
class Cls;
using ObjPtr = std::shared_ptr<const Obj>;
using ClsPtr = std::shared_ptr<const Cls>;

enum class ObjTag {
  FVar,    // free variable / declared constant
  BVar,    // bound variable (de Bruijn index)
  Bullet,  // the canonical inhabitant of equality classes
  PiSort,  // dependent function sort  {x : S1} S2
  Lam,     // abstraction  [x : S1] O
  App,     // application
  Lvl,     // the built-in sort of universe levels
  LZero,   // level literal
  LSuc,    // level successor
  ClsObj,  // a class expression in object position; always rejected by the kernel
};

enum class ClsTag {
  Sort,  // the class of sorts
  Pi,    // dependent class  {x : S1} K2
  Eq,    // equality class  Eq(S; O1; O2)
  Incl,  // a sort used as a class
};

class Obj {
public:
  ObjTag tag;
  std::string name;  // FVar name; binder display hint for PiSort/Lam
  int index = 0;     // BVar
  ObjPtr a, b;       // PiSort: dom/cod, Lam: dom/body, App: fn/arg, LSuc: a
  ClsPtr cls;        // ClsObj payload

  static ObjPtr fvar(std::string n);
  static ObjPtr bvar(int i);
  static ObjPtr bullet();
  static ObjPtr piSort(ObjPtr dom, std::string hint, ObjPtr cod);
  static ObjPtr lam(ObjPtr dom, std::string hint, ObjPtr body);
  static ObjPtr app(ObjPtr fn, ObjPtr arg);
  static ObjPtr app(ObjPtr fn, const std::vector<ObjPtr>& args);
  static ObjPtr lvl();
  static ObjPtr lzero();
  static ObjPtr lsuc(ObjPtr i);
  static ObjPtr clsObj(ClsPtr k);
};

class Cls {
public:
  ClsTag tag;
  std::string hint;  // Pi binder display hint
  ObjPtr dom;        // Pi domain sort; Eq sort
  ClsPtr cod;        // Pi codomain
  ObjPtr lhs, rhs;   // Eq endpoints
  ObjPtr obj;        // Incl payload

  static ClsPtr sort();
  static ClsPtr pi(ObjPtr dom, std::string hint, ClsPtr cod);
  static ClsPtr eq(ObjPtr sortObj, ObjPtr l, ObjPtr r);
  static ClsPtr incl(ObjPtr o);
};

struct Decl {
  std::string name;
  ClsPtr cls;
};

// An ordered list of name : class declarations where each class may mention
// only earlier names. Doubles as context and signature.
class Telescope {
public:
  std::vector<Decl> decls;

  Telescope() = default;
  explicit Telescope(std::vector<Decl> ds) : decls(std::move(ds)) {}

  const ClsPtr* lookup(const std::string& name) const;
  bool contains(const std::string& name) const { return lookup(name) != nullptr; }
  void push(std::string name, ClsPtr cls) { decls.push_back({std::move(name), std::move(cls)}); }
  size_t size() const { return decls.size(); }
  bool empty() const { return decls.empty(); }

  Telescope extended(std::string name, ClsPtr cls) const;
  Telescope concat(const Telescope& other) const;
  std::set<std::string> names() const;
};

// Structural equality up to binder display hints (alpha-equivalence).
bool alphaEqual(const ObjPtr& a, const ObjPtr& b);
bool alphaEqual(const ClsPtr& a, const ClsPtr& b);

// Replace free occurrences of `name`. If `repl` mentions enclosing binders
// by loose indices it is shifted on insertion, so no capture either way.
ObjPtr substObj(const ObjPtr& target, const std::string& name, const ObjPtr& repl);
ClsPtr substCls(const ClsPtr& target, const std::string& name, const ObjPtr& repl);

// Instantiate the outermost bound variable of a binder body; loose indices
// above it step down (the binder layer disappears).
ObjPtr openObj(const ObjPtr& body, const ObjPtr& repl);
ClsPtr openCls(const ClsPtr& body, const ObjPtr& repl);

// Raise loose indices >= cutoff by `by`.
ObjPtr shiftObj(const ObjPtr& t, int by, int cutoff = 0);
ClsPtr shiftCls(const ClsPtr& k, int by, int cutoff = 0);

// Abstract free occurrences of `name` into the outermost bound variable.
ObjPtr closeObj(const ObjPtr& t, const std::string& name);
ClsPtr closeCls(const ClsPtr& t, const std::string& name);

void freeVars(const ObjPtr& t, std::set<std::string>& out);
void freeVars(const ClsPtr& t, std::set<std::string>& out);
std::set<std::string> freeVarsObj(const ObjPtr& t);
std::set<std::string> freeVarsCls(const ClsPtr& t);

size_t objSize(const ObjPtr& t);
size_t clsSize(const ClsPtr& t);

// True if the outermost bound variable occurs in the body.
bool usesBound0(const ObjPtr& body);
bool usesBound0(const ClsPtr& body);

// Application spine decomposition: f a1 ... an -> (f, [a1..an]).
std::pair<ObjPtr, std::vector<ObjPtr>> spine(const ObjPtr& t);

// Compact deterministic encoding, injective up to alpha-equivalence.
// Used as a map key; not meant to be read back.
std::string alphaKey(const ObjPtr& t);
std::string alphaKey(const ClsPtr& t);

// View a sort object as the class it denotes: dependent function sorts
// become dependent classes recursively, anything else is wrapped in Incl.
ClsPtr clsOfSort(const ObjPtr& s);

// `hint` if it avoids `taken`, else hint with primes appended.
std::string freshName(const std::string& hint, const std::set<std::string>& taken);

}  // namespace eqlf

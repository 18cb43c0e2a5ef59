#include <doctest.h>

#include "eqlf/syntax.hpp"

using namespace eqlf;

namespace {

ObjPtr fv(const char* n) { return Obj::fvar(n); }

}  // namespace

TEST_CASE("alpha equality ignores binder hints") {
  auto a = Obj::lam(fv("A"), "x", Obj::bvar(0));
  auto b = Obj::lam(fv("A"), "y", Obj::bvar(0));
  CHECK(alphaEqual(a, b));
  auto c = Obj::lam(fv("B"), "x", Obj::bvar(0));
  CHECK_FALSE(alphaEqual(a, c));
}

TEST_CASE("alpha equality distinguishes structure") {
  CHECK_FALSE(alphaEqual(fv("x"), fv("y")));
  CHECK(alphaEqual(Obj::app(fv("f"), fv("x")), Obj::app(fv("f"), fv("x"))));
  CHECK_FALSE(alphaEqual(Obj::app(fv("f"), fv("x")), Obj::app(fv("x"), fv("f"))));
  CHECK(alphaEqual(Obj::bullet(), Obj::bullet()));
  CHECK_FALSE(alphaEqual(Obj::lzero(), Obj::lvl()));
}

TEST_CASE("substitution replaces only the named free variable") {
  // [y:A] x  with x := y  -->  body becomes the free y; the bound variable
  // is an index, so there is nothing to capture
  auto t = Obj::lam(fv("A"), "y", fv("x"));
  auto r = substObj(t, "x", fv("y"));
  CHECK(r->tag == ObjTag::Lam);
  CHECK(r->b->tag == ObjTag::FVar);
  CHECK(r->b->name == "y");
  // untouched terms come back by pointer
  auto s = substObj(t, "zzz", fv("w"));
  CHECK(s == t);
}

TEST_CASE("substitution shifts replacements that mention enclosing binders") {
  // substituting m := (bound 0) under one binder must lift the index
  auto t = Obj::lam(fv("A"), "x", Obj::app(Obj::bvar(0), fv("m")));
  auto r = substObj(t, "m", Obj::bvar(0));
  REQUIRE(r->tag == ObjTag::Lam);
  CHECK(r->b->a->index == 0);
  CHECK(r->b->b->tag == ObjTag::BVar);
  CHECK(r->b->b->index == 1);
}

TEST_CASE("open instantiates index zero and renumbers looser indices") {
  // body mentions its own binder (0) and an enclosing one (1)
  auto body = Obj::app(Obj::bvar(0), Obj::bvar(1));
  auto opened = openObj(body, fv("c"));
  CHECK(opened->a->name == "c");
  CHECK(opened->b->tag == ObjTag::BVar);
  CHECK(opened->b->index == 0);
}

TEST_CASE("open shifts a replacement placed under inner binders") {
  // body = lam A. (bound 1) (bound 0); instantiating the outer binder with
  // (bound 0) must produce lam A. (bound 1) (bound 0) again
  auto body = Obj::lam(fv("A"), "y", Obj::app(Obj::bvar(1), Obj::bvar(0)));
  auto opened = openObj(body, Obj::bvar(0));
  REQUIRE(opened->tag == ObjTag::Lam);
  CHECK(opened->b->a->index == 1);
  CHECK(opened->b->b->index == 0);
}

TEST_CASE("close and open are inverses") {
  auto body = Obj::app(Obj::app(fv("f"), Obj::bvar(0)), fv("g"));
  auto opened = openObj(body, fv("x"));
  CHECK(alphaEqual(closeObj(opened, "x"), body));

  auto t = Obj::app(fv("x"), Obj::lam(fv("A"), "y", fv("x")));
  auto closed = closeObj(t, "x");
  CHECK(alphaEqual(openObj(closed, fv("x")), t));
  // closing maps occurrences at all depths to the right index
  CHECK(closed->a->tag == ObjTag::BVar);
  CHECK(closed->a->index == 0);
  CHECK(closed->b->b->index == 1);
}

TEST_CASE("shift raises only loose indices") {
  auto t = Obj::lam(fv("A"), "x", Obj::app(Obj::bvar(0), Obj::bvar(1)));
  auto s = shiftObj(t, 3, 0);
  REQUIRE(s->tag == ObjTag::Lam);
  CHECK(s->b->a->index == 0);  // bound by the lam: untouched
  CHECK(s->b->b->index == 4);  // loose: raised
  CHECK(shiftObj(fv("x"), 5, 0) != nullptr);
  CHECK(alphaEqual(shiftObj(fv("x"), 5, 0), fv("x")));
}

TEST_CASE("freeVars collects from all positions") {
  auto t = Obj::lam(fv("A"), "x", Obj::app(Obj::bvar(0), fv("g")));
  auto vars = freeVarsObj(t);
  CHECK(vars == std::set<std::string>{"A", "g"});
  auto k = Cls::eq(fv("s"), fv("l"), fv("r"));
  CHECK(freeVarsCls(k) == std::set<std::string>{"s", "l", "r"});
}

TEST_CASE("spine decomposes applications in order") {
  auto t = Obj::app(fv("f"), {fv("a"), fv("b"), fv("c")});
  auto [head, args] = spine(t);
  CHECK(head->name == "f");
  REQUIRE(args.size() == 3);
  CHECK(args[0]->name == "a");
  CHECK(args[2]->name == "c");
  auto [h2, a2] = spine(fv("x"));
  CHECK(h2->name == "x");
  CHECK(a2.empty());
}

TEST_CASE("usesBound0 sees through non-binding nodes only") {
  CHECK(usesBound0(Obj::bvar(0)));
  CHECK_FALSE(usesBound0(fv("x")));
  CHECK(usesBound0(Obj::app(fv("f"), Obj::bvar(0))));
  // under one more binder the reference is index 1
  CHECK(usesBound0(Obj::lam(fv("A"), "y", Obj::bvar(1))));
  CHECK_FALSE(usesBound0(Obj::lam(fv("A"), "y", Obj::bvar(0))));
}

TEST_CASE("clsOfSort turns function sorts into dependent classes") {
  // {x:a} {y:b} c, as a sort object
  auto s = Obj::piSort(fv("a"), "x", Obj::piSort(fv("b"), "y", fv("c")));
  auto k = clsOfSort(s);
  REQUIRE(k->tag == ClsTag::Pi);
  CHECK(k->dom->name == "a");
  REQUIRE(k->cod->tag == ClsTag::Pi);
  CHECK(k->cod->cod->tag == ClsTag::Incl);
  CHECK(k->cod->cod->obj->name == "c");
  // plain sorts wrap in Incl
  CHECK(clsOfSort(fv("nat"))->tag == ClsTag::Incl);
}

TEST_CASE("alphaKey is stable under hint renaming and injective on shape") {
  auto a = Obj::lam(fv("A"), "x", Obj::bvar(0));
  auto b = Obj::lam(fv("A"), "longname", Obj::bvar(0));
  CHECK(alphaKey(a) == alphaKey(b));
  CHECK(alphaKey(a) != alphaKey(Obj::lam(fv("A"), "x", fv("x"))));
  CHECK(alphaKey(Obj::lzero()) != alphaKey(Obj::lvl()));
}

TEST_CASE("freshName avoids taken names with primes") {
  CHECK(freshName("x", {}) == "x");
  CHECK(freshName("x", {"x"}) == "x'");
  CHECK(freshName("x", {"x", "x'"}) == "x''");
  CHECK(freshName("", {}) == "_");
}

TEST_CASE("telescope lookup finds the latest declaration") {
  Telescope t;
  t.push("a", Cls::sort());
  t.push("b", Cls::incl(fv("a")));
  CHECK(t.contains("a"));
  CHECK_FALSE(t.contains("c"));
  const ClsPtr* k = t.lookup("b");
  REQUIRE(k != nullptr);
  CHECK((*k)->tag == ClsTag::Incl);
  CHECK(t.names() == std::set<std::string>{"a", "b"});
  auto t2 = t.extended("c", Cls::sort());
  CHECK(t2.size() == 3);
  CHECK(t.size() == 2);
}

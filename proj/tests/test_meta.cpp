#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "eqlf/corpus.hpp"
#include "eqlf/evalt.hpp"
#include "eqlf/meta.hpp"
#include "eqlf/parser.hpp"

using namespace eqlf;
using namespace eqlf::meta;

namespace {

Telescope ctxOf(std::initializer_list<std::pair<const char*, const char*>> decls) {
  Telescope t;
  for (const auto& [n, c] : decls) t.push(n, parseClass(c));
  return t;
}

DerivationSample sampleOf(const char* sigId, Telescope ctx, const char* obj, const char* cls) {
  return {sigId, std::move(ctx), parseObject(obj), parseClass(cls)};
}

}  // namespace

TEST_CASE("enumeration is deterministic, kernel-valid, and well-seeded") {
  Checker ck(stdsigs::load("godel_t"));
  EnumBudget b;
  b.sampleCount = 100;

  auto run1 = enumerate(ck, "godel_t", b, 3);
  auto run2 = enumerate(ck, "godel_t", b, 3);
  REQUIRE(run1.size() == run2.size());
  CHECK(run1.size() == 100);
  for (size_t i = 0; i < run1.size(); ++i) {
    CHECK(alphaEqual(run1[i].object, run2[i].object));
    CHECK(alphaEqual(run1[i].inferredClass, run2[i].inferredClass));
  }

  // the smallest closed sample is present: (empty context, zero, el nat)
  bool sawZero = false, sawElCtxVar = false;
  for (const auto& s : run1) {
    CHECK(objSize(s.object) <= b.maxTermSize);
    CHECK(s.context.decls.size() <= b.maxCtxDepth);
    if (s.context.decls.empty() && alphaEqual(s.object, parseObject("zero")) &&
        alphaEqual(s.inferredClass, parseClass("el nat")))
      sawZero = true;
    for (const auto& d : s.context.decls)
      if (d.cls->tag == ClsTag::Incl && d.cls->obj->tag == ObjTag::App &&
          d.cls->obj->a->tag == ObjTag::FVar && d.cls->obj->a->name == "el")
        sawElCtxVar = true;
  }
  CHECK(sawZero);
  CHECK(sawElCtxVar);

  EnumBudget empty;
  empty.sampleCount = 0;
  CHECK(enumerate(ck, "godel_t", empty, 0).empty());
}

TEST_CASE("presuppositions pass on valid samples and catch corruption") {
  Checker ck(stdsigs::load("godel_t"));
  EnumBudget b;
  b.sampleCount = 60;
  for (const auto& s : enumerate(ck, "godel_t", b, 1)) {
    CAPTURE(printObj(s.object));
    CHECK(checkPresuppositions(ck, s) == LemmaOutcome::Pass);
  }

  // dangling variable in the object
  CHECK(checkPresuppositions(ck, sampleOf("godel_t", {}, "succ x", "el nat")) ==
        LemmaOutcome::Fail);
  // recorded class that the object does not have
  CHECK(checkPresuppositions(ck, sampleOf("godel_t", {}, "zero", "el (arr nat nat)")) ==
        LemmaOutcome::Fail);
  // ill-formed context entry
  CHECK(checkPresuppositions(
            ck, sampleOf("godel_t", ctxOf({{"y", "el mystery"}}), "zero", "el nat")) ==
        LemmaOutcome::Fail);
}

TEST_CASE("weakening holds at every insertion point and validates the insertion") {
  Checker ck(stdsigs::load("godel_t"));
  DerivationSample s =
      sampleOf("godel_t", ctxOf({{"x", "el nat"}, {"f", "el (arr nat nat)"}}),
               "app nat nat f (succ x)", "el nat");
  REQUIRE(checkPresuppositions(ck, s) == LemmaOutcome::Pass);

  CHECK(checkWeakening(ck, s, std::nullopt) == LemmaOutcome::Pass);
  for (size_t at = 0; at <= 2; ++at) {
    CAPTURE(at);
    CHECK(checkWeakening(ck, s, Insertion{at, {"y", parseClass("el nat")}}) ==
          LemmaOutcome::Pass);
  }

  CHECK_THROWS_AS(checkWeakening(ck, s, Insertion{0, {"x", parseClass("el nat")}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(checkWeakening(ck, s, Insertion{0, {"y", parseClass("el mystery")}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(checkWeakening(ck, s, Insertion{7, {"y", parseClass("el nat")}}),
                  std::invalid_argument);
}

TEST_CASE("substitution re-checks the substituted judgment") {
  Checker gck(stdsigs::load("godel_t"));
  DerivationSample plain =
      sampleOf("godel_t", ctxOf({{"x", "el nat"}}), "succ x", "el nat");
  CHECK(checkSubstitution(gck, plain, "x", evalt::numeral(2)) == LemmaOutcome::Pass);

  CHECK_THROWS_AS(checkSubstitution(gck, plain, "q", evalt::numeral(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(checkSubstitution(gck, plain, "x", parseObject("nat")),
                  std::invalid_argument);

  // substitution acts on later context entries too
  Checker eck(stdsigs::load("eq_type"));
  DerivationSample dep = sampleOf(
      "eq_type", ctxOf({{"x", "el nat"}, {"p", "el (eq nat x zero)"}}), "p",
      "el (eq nat x zero)");
  REQUIRE(checkPresuppositions(eck, dep) == LemmaOutcome::Pass);
  CHECK(checkSubstitution(eck, dep, "x", parseObject("zero")) == LemmaOutcome::Pass);
  CHECK(checkSubstitution(eck, dep, "x", parseObject("succ zero")) == LemmaOutcome::Pass);
}

TEST_CASE("functionality equates the two substitution instances") {
  Checker ck(stdsigs::load("godel_t"));
  DerivationSample s = sampleOf("godel_t", ctxOf({{"x", "el nat"}}), "succ x", "el nat");

  // a recursor instance and its reduct are provably equal replacements
  ObjPtr r1 = parseObject("rec nat (succ zero) ([k : el nat] [a : el nat] zero) zero");
  CHECK(checkFunctionality(ck, s, "x", r1, evalt::numeral(1)) == LemmaOutcome::Pass);
  CHECK(checkFunctionality(ck, s, "x", r1, r1) == LemmaOutcome::Pass);

  // inequal replacements violate the precondition
  CHECK_THROWS_AS(checkFunctionality(ck, s, "x", parseObject("zero"),
                                     parseObject("succ zero")),
                  std::invalid_argument);
}

TEST_CASE("suite runs are deterministic and clean") {
  EnumBudget b;
  b.sampleCount = 120;
  SuiteReport r1 = runSuite("godel_t", b, 0);
  SuiteReport r2 = runSuite("godel_t", b, 0);
  CHECK(r1.str() == r2.str());

  CHECK(r1.samples == 120);
  CHECK(r1.failures() == 0);
  CHECK(r1.presuppositions.total() == 120);
  CHECK(r1.weakening.total() == 120);
  CHECK(r1.substitution.total() > 0);
  CHECK(r1.functionality.total() > 0);
  CHECK(r1.str().find("presuppositions pass=") != std::string::npos);
  // inconclusive outcomes are legitimate but rare
  CHECK(r1.inconclusive() * 100 <= r1.checksRun());
}

TEST_CASE("every corpus signature stays clean across seeds") {
  EnumBudget b;
  b.sampleCount = 60;
  b.maxCtxDepth = 3;
  for (const auto& e : stdsigs::corpus()) {
    for (uint64_t seed = 0; seed < 3; ++seed) {
      CAPTURE(e.id);
      CAPTURE(seed);
      SuiteReport r = runSuite(e.id, b, seed);
      CHECK(r.samples > 0);
      CHECK(r.failures() == 0);
      CHECK(r.inconclusive() * 100 <= r.checksRun());
    }
  }
}

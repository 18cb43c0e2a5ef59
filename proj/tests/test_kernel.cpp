#include <doctest.h>

#include <initializer_list>
#include <utility>
#include <vector>

#include "eqlf/corpus.hpp"
#include "eqlf/kernel.hpp"
#include "eqlf/parser.hpp"
#include "eqlf/syntax.hpp"

using namespace eqlf;

namespace {

Telescope ctxOf(std::initializer_list<std::pair<const char*, const char*>> ds) {
  Telescope t;
  for (const auto& [n, k] : ds) t.push(n, parseClass(k));
  return t;
}

ObjPtr numeral(int n) {
  ObjPtr o = Obj::fvar("zero");
  for (int i = 0; i < n; ++i) o = Obj::app(Obj::fvar("succ"), o);
  return o;
}

template <class F>
ErrKind kindOf(F&& f) {
  try {
    f();
  } catch (const CheckError& e) {
    return e.kind();
  }
  FAIL("expected a check error");
  return ErrKind::UnboundVariable;  // unreachable
}

struct Collect : TraceSink {
  std::vector<TraceStep> steps;
  void onStep(const TraceStep& s) override { steps.push_back(s); }
};

const char* loopSigText =
    "tp : Sort. el : tp -> Sort. nat : tp.\n"
    "succ : el nat -> el nat. c : el nat.\n"
    "step : Eq(el nat; c; succ c).\n";

}  // namespace

TEST_CASE("context formation accepts and rejects per the rules") {
  Checker ck(stdsigs::load("godel_t"));
  ck.checkContext(Telescope{});
  ck.checkContext(ctxOf({{"A", "tp"}, {"x", "el A"}}));

  Checker empty((Telescope()));
  CHECK(kindOf([&] { empty.checkContext(ctxOf({{"x", "el nat"}})); }) ==
        ErrKind::UnboundVariable);
  CHECK(kindOf([&] { ck.checkContext(ctxOf({{"A", "tp"}, {"A", "tp"}})); }) ==
        ErrKind::DuplicateName);
  // context names may not shadow signature constants either
  CHECK(kindOf([&] { ck.checkContext(ctxOf({{"zero", "el nat"}})); }) ==
        ErrKind::DuplicateName);
}

TEST_CASE("class formation") {
  Checker ck(stdsigs::load("godel_t"));
  Telescope e;
  ck.checkClass(e, Cls::sort());
  ck.checkClass(e, parseClass("Eq(el nat; zero; zero)"));
  ck.checkClass(e, parseClass("{A : tp} el A -> el A"));

  // Sort is a class, not an object of Sort, so it cannot be a Pi domain
  CHECK(kindOf([&] { ck.checkClass(e, parseClass("{x : Sort} tp")); }) ==
        ErrKind::NotASort);
  // equality classes are not sorts: no hypotheses of equality class via Pi
  CHECK(kindOf([&] {
          ck.checkClass(e, parseClass("{p : Eq(el nat; zero; zero)} el nat"));
        }) == ErrKind::NotASort);
  CHECK(kindOf([&] { ck.checkClass(e, parseClass("Eq(el nat; zero; tp)")); }) ==
        ErrKind::EndpointIllTyped);
  CHECK(kindOf([&] { ck.checkClass(e, parseClass("el mystery")); }) ==
        ErrKind::UnboundVariable);
}

TEST_CASE("object inference") {
  Checker ck(stdsigs::load("godel_t"));
  Telescope e;
  CHECK(alphaEqual(ck.inferObject(e, parseObject("zero")), parseClass("el nat")));
  CHECK(alphaEqual(ck.inferObject(e, parseObject("succ zero")),
                   parseClass("el nat")));
  CHECK(alphaEqual(ck.inferObject(e, parseObject("[x : el nat] x")),
                   parseClass("{x : el nat} el nat")));
  CHECK(ck.inferObject(e, parseObject("{x : el nat} el nat"))->tag ==
        ClsTag::Sort);
  CHECK(ck.inferObject(e, parseObject("Lvl"))->tag == ClsTag::Sort);
  CHECK(alphaEqual(ck.inferObject(e, parseObject("lsuc lzero")),
                   parseClass("Lvl")));

  CHECK(kindOf([&] { ck.inferObject(e, Obj::bullet()); }) ==
        ErrKind::CannotInferBullet);
  CHECK(kindOf([&] { ck.inferObject(e, parseObject("mystery")); }) ==
        ErrKind::UnboundVariable);
  CHECK(kindOf([&] { ck.inferObject(e, parseObject("zero zero")); }) ==
        ErrKind::NotAFunction);
  CHECK(kindOf([&] { ck.inferObject(e, parseObject("succ tp")); }) ==
        ErrKind::ArgumentClassMismatch);
  CHECK(kindOf([&] { ck.inferObject(e, parseObject("Sort")); }) ==
        ErrKind::NotASort);
}

TEST_CASE("bullet checks against provable equations only") {
  Telescope sig = stdsigs::load("godel_t");
  Checker ck(sig);
  auto sigNames = sig.names();
  std::set<std::string> avoid(sigNames.begin(), sigNames.end());
  auto [tele, core] = peelTelescope(*sig.lookup("nat_beta_z"), avoid);
  REQUIRE(core->tag == ClsTag::Eq);
  ck.checkObject(tele, Obj::bullet(), core);  // the rule's own equation

  Telescope e;
  CHECK(kindOf([&] {
          ck.checkObject(e, Obj::bullet(),
                         parseClass("Eq(el nat; zero; succ zero)"));
        }) == ErrKind::EqualityNotProven);
  CHECK(kindOf([&] { ck.checkObject(e, Obj::bullet(), parseClass("el nat")); }) ==
        ErrKind::ClassMismatch);
}

TEST_CASE("lambda checking compares the annotated domain") {
  Checker ck(stdsigs::load("godel_t"));
  Telescope e;
  ck.checkObject(e, parseObject("[x : el nat] succ x"),
                 parseClass("el nat -> el nat"));
  CHECK(kindOf([&] {
          ck.checkObject(e, parseObject("[x : el (arr nat nat)] x"),
                         parseClass("{x : el nat} el nat"));
        }) == ErrKind::ClassMismatch);
  CHECK(kindOf([&] {
          ck.checkObject(e, parseObject("succ zero"), parseClass("tp"));
        }) == ErrKind::ClassMismatch);
}

TEST_CASE("class equality") {
  Checker ck(stdsigs::load("godel_t"));
  Telescope e;
  CHECK(ck.equalClasses(e, Cls::sort(), Cls::sort()).proven());
  CHECK_FALSE(
      ck.equalClasses(e, parseClass("nat"), parseClass("Eq(el nat; zero; zero)"))
          .proven());

  Checker uni(stdsigs::load("universes"));
  CHECK(uni.equalClasses(e, parseClass("ext lzero nat_bar"), parseClass("nat"))
            .proven());
  CHECK(uni.equalClasses(e, parseClass("{x : el (ext lzero nat_bar)} el nat"),
                         parseClass("{y : el nat} el nat"))
            .proven());
}

TEST_CASE("object equality follows the declared equations") {
  Telescope sig = stdsigs::load("godel_t");
  Checker ck(sig);
  auto sigNames = sig.names();
  std::set<std::string> avoid(sigNames.begin(), sigNames.end());
  auto [tele, core] = peelTelescope(*sig.lookup("nat_beta_z"), avoid);
  CHECK(ck.equalObjects(tele, core->lhs, core->rhs, core->dom).proven());

  Telescope e;
  CHECK(ck.equalObjects(e, parseObject("([x : el nat] x) zero"),
                        parseObject("zero"), parseObject("el nat"))
            .proven());
  CHECK_FALSE(ck.equalObjects(e, parseObject("zero"), parseObject("succ zero"),
                              parseObject("el nat"))
                  .proven());
}

TEST_CASE("hypothetical equations act through congruence closure") {
  Checker ck(stdsigs::load("godel_t"));
  Telescope ctx = ctxOf({{"A", "tp"},
                         {"b", "el A"},
                         {"s", "el nat -> el A -> el A"},
                         {"x", "el nat"},
                         {"h", "Eq(el nat; x; zero)"}});
  ck.checkContext(ctx);
  CHECK(ck.equalObjects(ctx, parseObject("rec A b s x"), parseObject("b"),
                        parseObject("el A"))
            .proven());
  // and congruently under a constructor
  CHECK(ck.equalObjects(ctx, parseObject("succ x"), parseObject("succ zero"),
                        parseObject("el nat"))
            .proven());
}

TEST_CASE("proofs of the same equation are unique") {
  Checker ck(stdsigs::load("godel_t"));
  Telescope ctx = ctxOf({{"p", "Eq(el nat; zero; zero)"},
                         {"q", "Eq(el nat; zero; zero)"}});
  Verdict v = ck.equalObjectsAt(ctx, parseObject("p"), parseObject("q"),
                                parseClass("Eq(el nat; zero; zero)"));
  CHECK(v.proven());
  CHECK(ck.equalObjectsAt(ctx, Obj::bullet(), parseObject("p"),
                          parseClass("Eq(el nat; zero; zero)"))
            .proven());
}

TEST_CASE("unicity rules prove equality at matching sorts") {
  Checker ck(stdsigs::load("eq_type"));
  Telescope ctx = ctxOf({{"A", "tp"},
                         {"a", "el A"},
                         {"b", "el A"},
                         {"p", "el (eq A a b)"},
                         {"q", "el (eq A a b)"}});
  ck.checkContext(ctx);
  CHECK(ck.equalObjects(ctx, parseObject("p"), parseObject("q"),
                        parseObject("el (eq A a b)"))
            .proven());
  // reflection: an eq-typed hypothesis yields the judgmental equality
  CHECK(ck.equalObjects(ctx, parseObject("a"), parseObject("b"),
                        parseObject("el A"))
            .proven());
}

TEST_CASE("rule extraction ignores plain constants and warns on non-patterns") {
  Telescope mini = parseSignature(
      "tp : Sort. el : tp -> Sort. nat : tp. zero : el nat. c : el nat.", "t");
  Checker::checkSignature(mini);
  SignatureRules r = extractRules(mini);
  CHECK(r.rewrites.empty());
  CHECK(r.warnings.empty());

  Telescope bad = parseSignature(
      "tp : Sort. el : tp -> Sort. nat : tp. zero : el nat.\n"
      "weird : {f : el nat -> el nat} Eq(el nat; f zero; zero).",
      "t");
  Checker::checkSignature(bad);
  SignatureRules rb = extractRules(bad);
  CHECK(rb.rewrites.empty());
  REQUIRE(rb.warnings.size() == 1);
  CHECK(rb.warnings[0].find("weird") != std::string::npos);
}

TEST_CASE("normalization computes with the recursor") {
  Checker ck(stdsigs::load("godel_t"));
  Telescope e;
  ObjPtr plus = parseObject(
      "[m : el nat] [n : el nat]"
      " rec nat n ([k : el nat] [acc : el nat] succ acc) m");
  ck.checkObject(e, plus, parseClass("el nat -> el nat -> el nat"));

  ObjPtr sum = Obj::app(Obj::app(plus, numeral(2)), numeral(2));
  ObjPtr nf = ck.normalize(e, sum);
  CHECK(alphaEqual(nf, numeral(4)));
  CHECK(alphaEqual(ck.normalize(e, nf), nf));  // idempotent
  CHECK(alphaEqual(ck.normalize(e, numeral(3)), numeral(3)));

  Telescope ctx = ctxOf({{"A", "tp"},
                         {"b", "el A"},
                         {"s", "el nat -> el A -> el A"},
                         {"n", "el nat"}});
  CHECK(alphaEqual(ck.normalize(ctx, parseObject("rec A b s (succ n)")),
                   parseObject("s n (rec A b s n)")));
}

TEST_CASE("class weak head normalization") {
  Checker gd(stdsigs::load("godel_t"));
  Telescope e;
  ClsPtr w = gd.whnfClass(e, parseClass("({x : el nat} el nat)"));
  REQUIRE(w->tag == ClsTag::Pi);
  CHECK(alphaEqual(w->dom, parseObject("el nat")));
  CHECK(w->cod->tag == ClsTag::Incl);

  Checker uni(stdsigs::load("universes"));
  CHECK(alphaEqual(uni.whnfClass(e, parseClass("ext lzero nat_bar")),
                   parseClass("nat")));
  ClsPtr eq = parseClass("Eq(el nat; zero; zero)");
  CHECK(alphaEqual(uni.whnfClass(e, eq), eq));
}

TEST_CASE("universe extension equations compute under level binders") {
  Checker ck(stdsigs::load("universes"));
  Telescope ctx = ctxOf({{"i", "Lvl"}, {"a", "el (u i)"}});
  CHECK(ck.equalObjects(ctx, parseObject("ext (lsuc i) (cum i a)"),
                        parseObject("ext i a"), parseObject("tp"))
            .proven());
  CHECK(ck.equalObjects(ctx, parseObject("ext (lsuc i) (u_bar i)"),
                        parseObject("u i"), parseObject("tp"))
            .proven());
}

TEST_CASE("fuel exhaustion is reported, distinctly and monotonically") {
  CHECK(CheckConfig{}.fuel == 10000);

  Telescope loopSig = parseSignature(loopSigText, "loop");
  Checker::checkSignature(loopSig);
  CheckConfig bounded;
  bounded.fuel = 500;  // the divergent term grows a node per step
  Checker ck(loopSig, bounded);
  Telescope e;
  try {
    ck.normalize(e, parseObject("c"));
    FAIL("expected fuel exhaustion");
  } catch (const CheckError& ex) {
    CHECK(ex.kind() == ErrKind::FuelExhausted);
  }

  CheckConfig small;
  small.fuel = 50;
  Checker cks(loopSig, small);
  Verdict v = cks.equalObjects(e, parseObject("c"), parseObject("zero"),
                               parseObject("el nat"));
  CHECK(v.kind == VerdictKind::FuelExhausted);
  CHECK(v.stepsUsed == 50);

  // bullet against an equation that cannot be decided within fuel
  CHECK(kindOf([&] {
          cks.checkObject(e, Obj::bullet(), parseClass("Eq(el nat; c; zero)"));
        }) == ErrKind::FuelExhausted);

  // more fuel never turns a proof into a failure
  Telescope gsig = stdsigs::load("godel_t");
  CheckConfig tiny;
  tiny.fuel = 3;
  Checker gtiny(gsig, tiny);
  ObjPtr plus = parseObject(
      "[m : el nat] [n : el nat]"
      " rec nat n ([k : el nat] [acc : el nat] succ acc) m");
  ObjPtr sum = Obj::app(Obj::app(plus, numeral(2)), numeral(2));
  Verdict vt = gtiny.equalObjects(e, sum, numeral(4), parseObject("el nat"));
  CHECK(vt.kind == VerdictKind::FuelExhausted);
  CHECK(vt.stepsUsed == 3);
  Checker gfull(gsig);
  CHECK(gfull.equalObjects(e, sum, numeral(4), parseObject("el nat")).proven());
}

TEST_CASE("eta can be disabled") {
  Telescope sig = stdsigs::load("godel_t");
  Telescope ctx = ctxOf({{"f", "el nat -> el nat"}});
  ObjPtr expanded = parseObject("[x : el nat] f x");

  Checker on(sig);
  CHECK(on.equalObjects(ctx, parseObject("f"), expanded,
                        parseObject("{x : el nat} el nat"))
            .proven());

  CheckConfig cfg;
  cfg.etaEnabled = false;
  Checker off(sig, cfg);
  CHECK_FALSE(off.equalObjects(ctx, parseObject("f"), expanded,
                               parseObject("{x : el nat} el nat"))
                  .proven());

  // signature expansion rules are eta too
  auto sigNames = sig.names();
  std::set<std::string> avoid(sigNames.begin(), sigNames.end());
  auto [tele, core] = peelTelescope(*sig.lookup("arr_eta"), avoid);
  CHECK(on.equalObjects(tele, core->lhs, core->rhs, core->dom).proven());
  CHECK_FALSE(off.equalObjects(tele, core->lhs, core->rhs, core->dom).proven());
}

TEST_CASE("traces report each rewrite with its position") {
  Telescope sig = stdsigs::load("godel_t");
  Collect sink;
  CheckConfig cfg;
  cfg.trace = &sink;
  Checker ck(sig, cfg);
  Telescope e;
  ObjPtr plus = parseObject(
      "[m : el nat] [n : el nat]"
      " rec nat n ([k : el nat] [acc : el nat] succ acc) m");
  ObjPtr sum = Obj::app(Obj::app(plus, numeral(1)), numeral(1));
  ck.normalize(e, sum);
  REQUIRE(!sink.steps.empty());
  bool sawBeta = false, sawRule = false;
  for (const auto& s : sink.steps) {
    CHECK((s.kind == TraceStep::Beta || s.kind == TraceStep::Rule));
    CHECK(s.before != nullptr);
    CHECK(s.after != nullptr);
    CHECK_FALSE(s.pathStr().empty());
    if (s.kind == TraceStep::Beta) {
      sawBeta = true;
      CHECK(s.ruleName == "app-lam");
    }
    if (s.kind == TraceStep::Rule) sawRule = true;
  }
  CHECK(sawBeta);
  CHECK(sawRule);
  // the first redex is the inner application, one step into the term
  CHECK(sink.steps[0].pathStr() == "0");
}

TEST_CASE("signature checking localizes errors") {
  Telescope bad = parseSignature("tp : Sort. c : el tp.", "t");
  try {
    Checker::checkSignature(bad);
    FAIL("expected a check error");
  } catch (const CheckError& ex) {
    CHECK(ex.kind() == ErrKind::UnboundVariable);
    CHECK(std::string(ex.what()).find("'c'") != std::string::npos);
  }
  CHECK(kindOf([&] {
          Checker::checkSignature(parseSignature("tp : Sort. tp : Sort.", "t"));
        }) == ErrKind::DuplicateName);
}

TEST_CASE("inference presupposes well-formed results") {
  // whatever infer returns must itself check
  Telescope sig = stdsigs::load("godel_t");
  Checker ck(sig);
  Telescope ctx = ctxOf({{"A", "tp"}, {"x", "el A"}});
  for (const char* s :
       {"zero", "succ zero", "x", "rec A x ([k : el nat] [a : el A] a)",
        "[y : el A] y", "lam nat nat ([y : el nat] succ y)"}) {
    CAPTURE(s);
    ClsPtr k = ck.inferObject(ctx, parseObject(s));
    ck.checkClass(ctx, k);
  }
}

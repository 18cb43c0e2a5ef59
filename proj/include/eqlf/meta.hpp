// Executable test suites for the framework's basic metatheory: samples of
// valid inference judgments are enumerated under a budget, then each lemma
// (presuppositions, weakening, substitution, functionality) is re-checked on
// the kernel as a runtime property.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqlf/kernel.hpp"
#include "eqlf/syntax.hpp"

namespace eqlf::meta {

struct EnumBudget {
  size_t maxTermSize = 10;
  size_t maxCtxDepth = 4;
  size_t sampleCount = 500;
};

// A judgment Γ ⊢ O : K that held on the kernel at generation time.
struct DerivationSample {
  std::string signatureId;
  Telescope context;
  ObjPtr object;
  ClsPtr inferredClass;
};

// Deterministic for a fixed (signature id, budget, seed): the stream starts
// with every bare constant that infers on its own, then generate-and-keep
// random candidates validated by the kernel.
std::vector<DerivationSample> enumerate(const Checker& ck, const std::string& sigId,
                                        const EnumBudget& budget, uint64_t seed = 0);
std::vector<DerivationSample> enumerate(const std::string& sigId, const EnumBudget& budget,
                                        uint64_t seed = 0);

enum class LemmaOutcome { Pass, Fail, Inconclusive };

const char* lemmaOutcomeName(LemmaOutcome o);

// A declaration to splice into the middle of a sample's context.
struct Insertion {
  size_t at;  // 0..context.size(): how many existing declarations precede it
  Decl decl;
};

// Presuppositions: the context checks, the class checks, and the object
// still infers something provably equal to the recorded class.
LemmaOutcome checkPresuppositions(const Checker& ck, const DerivationSample& s);

// Weakening: after splicing a fresh well-formed declaration into the
// context, the object still infers a provably equal class. No insertion is
// the identity case. Throws std::invalid_argument if the declaration's name
// collides or its class is ill-formed at the insertion point.
LemmaOutcome checkWeakening(const Checker& ck, const DerivationSample& s,
                            const std::optional<Insertion>& insertion);

// Substitution: with x declared mid-context and a replacement checking
// against its class in the prefix, the substituted judgment re-checks.
// Throws std::invalid_argument if x is not in the context or the
// replacement does not check.
LemmaOutcome checkSubstitution(const Checker& ck, const DerivationSample& s,
                               const std::string& var, const ObjPtr& replacement);

// Functionality: two provably equal replacements yield provably equal
// substitution instances at the substituted class. Preconditions as for
// substitution, plus the replacements must be provably equal (fuel running
// out while verifying that is reported as Inconclusive, not an error).
LemmaOutcome checkFunctionality(const Checker& ck, const DerivationSample& s,
                                const std::string& var, const ObjPtr& repl1,
                                const ObjPtr& repl2);

struct LemmaCounts {
  long pass = 0, fail = 0, inconclusive = 0;
  long total() const { return pass + fail + inconclusive; }
  void add(LemmaOutcome o);
};

struct SuiteReport {
  std::string signatureId;
  uint64_t seed = 0;
  long samples = 0;
  LemmaCounts presuppositions, weakening, substitution, functionality;

  long failures() const;
  long inconclusive() const;
  long checksRun() const;
  std::string str() const;  // line-oriented, one lemma per line
};

// Enumerates samples and exercises all four lemmas on each, deriving
// insertions and replacements from the same deterministic stream.
SuiteReport runSuite(const std::string& sigId, const EnumBudget& budget, uint64_t seed);

}  // namespace eqlf::meta

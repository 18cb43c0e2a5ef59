// Command-line driver: signature checking, class inference, equality
// queries, normalization, the bundled corpus, and metatheory suites.
//
// Exit codes: 0 ok or proven; 1 ill-formed or not proven; 2 parse or usage
// error; 3 fuel exhausted. Results go to stdout one per line, diagnostics
// to stderr.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eqlf/corpus.hpp"
#include "eqlf/kernel.hpp"
#include "eqlf/meta.hpp"
#include "eqlf/parser.hpp"

namespace {

using namespace eqlf;

constexpr int kOk = 0, kNotOk = 1, kUsage = 2, kFuel = 3;

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// an expression argument is inline text, or @path to read a file
struct ExprArg {
  std::string text;
  std::string label;
};

ExprArg exprArg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    std::string path = arg.substr(1);
    return {readFile(path), path};
  }
  return {arg, "<expr>"};
}

// -s values and positional files, in that order; a name that matches a
// bundled corpus id loads the embedded text, anything else is a file path;
// several sources concatenate in order into one signature
Telescope loadSignature(const std::vector<std::string>& sources) {
  Telescope sig;
  for (const auto& src : sources) {
    Telescope part;
    if (const stdsigs::CorpusEntry* e = stdsigs::find(src))
      part = parseSignature(e->text, e->filePath);
    else
      part = parseSignature(readFile(src), src);
    for (auto& d : part.decls) sig.decls.push_back(std::move(d));
  }
  return sig;
}

struct CollectTrace : TraceSink {
  std::vector<TraceStep> steps;
  void onStep(const TraceStep& s) override { steps.push_back(s); }
};

// one line per step: the rule fired (app-lam for framework beta) and the
// position of the redex as a path of child indices from the root
std::string renderTrace(const std::vector<TraceStep>& steps) {
  std::ostringstream os;
  for (const auto& s : steps) os << "trace " << s.ruleName << " " << s.pathStr() << "\n";
  return os.str();
}

struct Common {
  std::vector<std::string> sigs;
  std::vector<std::string> files;  // positional signature sources
  std::vector<std::string> exprs;
  std::string cls;
  long fuel = 10000;
  bool trace = false;
  bool noEta = false;
  CLI::App* sub = nullptr;

  std::vector<std::string> sources() const {
    std::vector<std::string> all = sigs;
    all.insert(all.end(), files.begin(), files.end());
    return all;
  }

  CheckConfig config() const {
    CheckConfig cfg;
    cfg.fuel = fuel;
    if (sub->count("--fuel") == 0) {
      if (const char* v = std::getenv("EQLF_FUEL")) {
        char* end = nullptr;
        long f = std::strtol(v, &end, 10);
        if (*v == '\0' || end == nullptr || *end != '\0' || f < 1)
          throw std::invalid_argument("EQLF_FUEL must be a positive integer, got '" +
                                      std::string(v) + "'");
        cfg.fuel = f;
      }
    }
    cfg.etaEnabled = !noEta;
    return cfg;
  }
};

void addCommon(CLI::App* sub, Common& c, bool exprs) {
  c.sub = sub;
  sub->add_option("-s,--signature", c.sigs,
                  "signature file or bundled id (repeatable, concatenated in order)");
  sub->add_option("files", c.files, "additional signature files");
  if (exprs) sub->add_option("-e,--expr", c.exprs, "object expression, or @file (repeatable)");
  sub->add_option("--fuel", c.fuel, "rewrite-step budget per query")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--trace", c.trace, "log each rewrite step");
  sub->add_flag("--no-eta", c.noEta, "disable type-directed eta");
}

Checker makeChecker(const Common& c) {
  auto sources = c.sources();
  if (sources.empty()) throw std::invalid_argument("no signature given (use -s or a file)");
  return Checker::checkSignature(loadSignature(sources), c.config());
}

int doCheck(const Common& c) {
  Checker ck = makeChecker(c);
  for (const auto& w : ck.rules().warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "ok decls=" << ck.signature().decls.size()
            << " rewrites=" << ck.rules().rewrites.size() << "\n";
  return kOk;
}

int doType(const Common& c) {
  if (c.exprs.empty()) throw std::invalid_argument("type needs at least one -e expression");
  Checker ck = makeChecker(c);
  for (const auto& raw : c.exprs) {
    ExprArg e = exprArg(raw);
    ObjPtr o = parseObject(e.text, e.label);
    std::cout << printCls(ck.inferObject({}, o)) << "\n";
  }
  return kOk;
}

int doEq(const Common& c) {
  if (c.exprs.size() != 2 || c.cls.empty())
    throw std::invalid_argument("eq needs exactly two -e expressions and a -c class");
  Checker ck = makeChecker(c);
  ExprArg ea = exprArg(c.exprs[0]), eb = exprArg(c.exprs[1]);
  ObjPtr a = parseObject(ea.text, ea.label);
  ObjPtr b = parseObject(eb.text, eb.label);
  ClsPtr k = parseClass(c.cls, "<class>");
  ck.checkClass({}, k);
  ck.checkObject({}, a, k);
  ck.checkObject({}, b, k);

  CollectTrace sink;
  Checker query = ck;
  if (c.trace) query.cfg.trace = &sink;
  Verdict v = query.equalObjectsAt({}, a, b, k);
  if (c.trace) std::cout << renderTrace(sink.steps);
  std::cout << v.str() << "\n";
  if (v.kind == VerdictKind::ProvenEqual) return kOk;
  return v.kind == VerdictKind::NotProven ? kNotOk : kFuel;
}

int doNorm(const Common& c) {
  if (c.exprs.empty()) throw std::invalid_argument("norm needs at least one -e expression");
  Checker ck = makeChecker(c);
  for (const auto& raw : c.exprs) {
    ExprArg e = exprArg(raw);
    ObjPtr o = parseObject(e.text, e.label);
    CollectTrace sink;
    Checker query = ck;
    if (c.trace) query.cfg.trace = &sink;
    ObjPtr n = query.normalize({}, o);
    if (c.trace) std::cout << renderTrace(sink.steps);
    std::cout << printObj(n) << "\n";
  }
  return kOk;
}

int doCorpus() {
  for (const auto& e : stdsigs::corpus())
    std::cout << e.id << " rewrites=" << e.expectedRuleCount << " " << e.description << "\n";
  return kOk;
}

struct MetaArgs {
  std::vector<std::string> ids;
  std::vector<uint64_t> seeds;
  size_t samples = 500;
  size_t termSize = 10;
  size_t ctxDepth = 4;
};

int doMeta(const MetaArgs& m) {
  std::vector<std::string> ids = m.ids;
  if (ids.empty())
    for (const auto& e : stdsigs::corpus()) ids.push_back(e.id);
  for (const auto& id : ids)
    if (!stdsigs::find(id)) throw std::invalid_argument("unknown corpus id '" + id + "'");
  std::vector<uint64_t> seeds = m.seeds.empty() ? std::vector<uint64_t>{0} : m.seeds;

  meta::EnumBudget budget{m.termSize, m.ctxDepth, m.samples};
  long failures = 0;
  for (const auto& id : ids)
    for (uint64_t seed : seeds) {
      meta::SuiteReport r = meta::runSuite(id, budget, seed);
      std::cout << r.str();
      failures += r.failures();
    }
  return failures == 0 ? kOk : kNotOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equational logical framework driver"};
  app.require_subcommand(1);

  Common checkArgs, typeArgs, eqArgs, normArgs;
  CLI::App* check = app.add_subcommand("check", "check a signature");
  addCommon(check, checkArgs, false);
  CLI::App* type = app.add_subcommand("type", "infer the class of closed objects");
  addCommon(type, typeArgs, true);
  CLI::App* eq = app.add_subcommand("eq", "decide a closed equality (semi-decision)");
  addCommon(eq, eqArgs, true);
  eq->add_option("-c,--class", eqArgs.cls, "class at which the two objects are compared");
  CLI::App* norm = app.add_subcommand("norm", "normalize closed objects");
  addCommon(norm, normArgs, true);
  CLI::App* corpus = app.add_subcommand("corpus", "list the bundled signatures");

  MetaArgs metaArgs;
  CLI::App* metaCmd = app.add_subcommand("meta", "run the metatheory suites");
  metaCmd->add_option("ids", metaArgs.ids, "corpus ids (default: all)");
  metaCmd->add_option("--seed", metaArgs.seeds, "generator seed (repeatable; default 0)");
  metaCmd->add_option("--samples", metaArgs.samples, "samples per suite");
  metaCmd->add_option("--term-size", metaArgs.termSize, "max sample object size");
  metaCmd->add_option("--ctx-depth", metaArgs.ctxDepth, "max sample context depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return doCheck(checkArgs);
    if (*type) return doType(typeArgs);
    if (*eq) return doEq(eqArgs);
    if (*norm) return doNorm(normArgs);
    if (*corpus) return doCorpus();
    if (*metaCmd) return doMeta(metaArgs);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    if (!e.expected().empty()) {
      std::cerr << "expected:";
      for (const auto& x : e.expected()) std::cerr << " " << x;
      std::cerr << "\n";
    }
    return kUsage;
  } catch (const CheckError& e) {
    std::cerr << "error [" << errKindName(e.kind()) << "]: " << e.what() << "\n";
    return e.kind() == ErrKind::FuelExhausted ? kFuel : kNotOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

// Concrete syntax: lexer, parser, elaborator and printer.
//
// One surface grammar covers objects and classes; elaboration is mode
// directed. A Pi or arrow met in class position becomes a dependent class,
// in object position a dependent function sort. Domain positions of binders
// and the sort position of Eq elaborate in object mode. Class expressions
// that cannot denote objects (Sort, Eq(...)) still parse in object position
// and are embedded as improper objects for the kernel to reject with a
// proper diagnostic.
#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqlf/syntax.hpp"

namespace eqlf {

struct SourceSpan {
  std::string file;
  int startLine = 1, startCol = 1;
  int endLine = 1, endCol = 1;

  std::string str() const;
};

enum class SurfTag { Name, Sort, Lvl, Star, LZero, LSuc, Pi, Arrow, Lam, App, Eq, Paren };

struct SurfExpr;
using SurfPtr = std::shared_ptr<const SurfExpr>;

struct SurfExpr {
  SurfTag tag;
  std::string name;  // Name payload; Pi/Lam binder
  SurfPtr a, b, c;   // Pi/Lam: dom/body; Arrow: lhs/rhs; App: fn/arg;
                     // Eq: sort/lhs/rhs; LSuc/Paren: a
  SourceSpan span;
};

struct SurfaceDecl {
  std::string name;
  SurfPtr cls;
  SourceSpan span;
};

class ParseError : public std::runtime_error {
public:
  ParseError(std::string msg, SourceSpan sp, std::vector<std::string> expected);
  const SourceSpan& span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }

private:
  SourceSpan span_;
  std::vector<std::string> expected_;
};

// Surface layer.
std::vector<SurfaceDecl> parseSurfaceSignature(const std::string& text, const std::string& file);
SurfPtr parseSurfaceExpr(const std::string& text, const std::string& file);

// Elaboration to core. Throws ParseError on improper binder reuse only via
// parse; elaboration itself is total.
ObjPtr elabObject(const SurfPtr& e);
ClsPtr elabClass(const SurfPtr& e);

// Parse + elaborate.
Telescope parseSignature(const std::string& text, const std::string& file);
ObjPtr parseObject(const std::string& text, const std::string& file = "<expr>");
ClsPtr parseClass(const std::string& text, const std::string& file = "<class>");

// Printing with minimal parentheses. parse(print(x)) is alpha-equal to x.
std::string printObj(const ObjPtr& o);
std::string printCls(const ClsPtr& k);
std::string printDecl(const Decl& d);
std::string printTelescope(const Telescope& t);

}  // namespace eqlf

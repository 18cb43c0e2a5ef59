#include "eqlf/parser.hpp"

#include <cassert>
#include <sstream>

namespace eqlf {

std::string SourceSpan::str() const {
  std::ostringstream os;
  os << file << ':' << startLine << ':' << startCol;
  if (endLine != startLine || endCol != startCol)
    os << '-' << endLine << ':' << endCol;
  return os.str();
}

ParseError::ParseError(std::string msg, SourceSpan sp, std::vector<std::string> expected)
    : std::runtime_error(sp.str() + ": " + msg), span_(std::move(sp)),
      expected_(std::move(expected)) {}

namespace {

enum class Tok {
  Ident, KwSort, KwLvl, KwEq, KwLzero, KwLsuc,
  LBrace, RBrace, LBrack, RBrack, LParen, RParen,
  Colon, Semi, Dot, Arrow, Star, End,
};

struct Token {
  Tok kind;
  std::string text;
  int line = 1, col = 1, endLine = 1, endCol = 1;
};

bool identStart(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool identCont(char c) { return identStart(c) || (c >= '0' && c <= '9') || c == '\''; }

class Lexer {
public:
  Lexer(const std::string& text, std::string file) : text_(text), file_(std::move(file)) {
    run();
  }

  const std::vector<Token>& tokens() const { return toks_; }
  const std::string& file() const { return file_; }

private:
  void run() {
    size_t i = 0;
    int line = 1, col = 1;
    auto advance = [&](size_t n) {
      for (size_t k = 0; k < n; ++k) {
        if (text_[i + k] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      i += n;
    };
    while (i < text_.size()) {
      char c = text_[i];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(1);
        continue;
      }
      if (c == '-' && i + 1 < text_.size() && text_[i + 1] == '-') {
        while (i < text_.size() && text_[i] != '\n') advance(1);
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (identStart(c)) {
        size_t j = i;
        while (j < text_.size() && identCont(text_[j])) ++j;
        t.text = text_.substr(i, j - i);
        if (t.text == "Sort") t.kind = Tok::KwSort;
        else if (t.text == "Lvl") t.kind = Tok::KwLvl;
        else if (t.text == "Eq") t.kind = Tok::KwEq;
        else if (t.text == "lzero") t.kind = Tok::KwLzero;
        else if (t.text == "lsuc") t.kind = Tok::KwLsuc;
        else t.kind = Tok::Ident;
        advance(j - i);
      } else if (c == '-' && i + 1 < text_.size() && text_[i + 1] == '>') {
        t.kind = Tok::Arrow;
        t.text = "->";
        advance(2);
      } else {
        switch (c) {
          case '{': t.kind = Tok::LBrace; break;
          case '}': t.kind = Tok::RBrace; break;
          case '[': t.kind = Tok::LBrack; break;
          case ']': t.kind = Tok::RBrack; break;
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          case ':': t.kind = Tok::Colon; break;
          case ';': t.kind = Tok::Semi; break;
          case '.': t.kind = Tok::Dot; break;
          case '*': t.kind = Tok::Star; break;
          default: {
            SourceSpan sp{file_, line, col, line, col + 1};
            throw ParseError(std::string("unexpected character '") + c + "'", sp, {});
          }
        }
        t.text = std::string(1, c);
        advance(1);
      }
      t.endLine = line;
      t.endCol = col;
      toks_.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.text = "<end of input>";
    end.line = end.endLine = line;
    end.col = end.endCol = col;
    toks_.push_back(std::move(end));
  }

  const std::string& text_;
  std::string file_;
  std::vector<Token> toks_;
};

const char* tokName(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::KwSort: return "'Sort'";
    case Tok::KwLvl: return "'Lvl'";
    case Tok::KwEq: return "'Eq'";
    case Tok::KwLzero: return "'lzero'";
    case Tok::KwLsuc: return "'lsuc'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Dot: return "'.'";
    case Tok::Arrow: return "'->'";
    case Tok::Star: return "'*'";
    case Tok::End: return "end of input";
  }
  return "?";
}

SourceSpan spanOf(const std::string& file, const Token& t) {
  return SourceSpan{file, t.line, t.col, t.endLine, t.endCol};
}

SourceSpan join(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan s = a;
  s.endLine = b.endLine;
  s.endCol = b.endCol;
  return s;
}

class Parser {
public:
  Parser(const std::string& text, const std::string& file)
      : lex_(text, file), file_(file) {}

  std::vector<SurfaceDecl> signature() {
    std::vector<SurfaceDecl> out;
    while (peek().kind != Tok::End) {
      Token name = expect(Tok::Ident, "declaration name");
      expect(Tok::Colon, "':'");
      SurfPtr cls = expr();
      Token dot = expect(Tok::Dot, "'.'");
      SurfaceDecl d;
      d.name = name.text;
      d.cls = cls;
      d.span = join(spanOf(file_, name), spanOf(file_, dot));
      out.push_back(std::move(d));
    }
    return out;
  }

  SurfPtr topExpr() {
    SurfPtr e = expr();
    if (peek().kind != Tok::End)
      fail("trailing input after expression", {"end of input"});
    return e;
  }

private:
  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    if (i >= lex_.tokens().size()) i = lex_.tokens().size() - 1;
    return lex_.tokens()[i];
  }

  Token next() { return lex_.tokens()[pos_ < lex_.tokens().size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    throw ParseError(msg + ", found " + tokName(peek().kind), spanOf(file_, peek()),
                     std::move(expected));
  }

  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what, {what});
    return next();
  }

  static SurfPtr node(SurfTag tag, SourceSpan sp) {
    auto e = std::make_shared<SurfExpr>();
    e->tag = tag;
    e->span = std::move(sp);
    return e;
  }

  // expr := binder expr | arrow
  SurfPtr expr() {
    Tok k = peek().kind;
    if (k == Tok::LBrace || k == Tok::LBrack) {
      Token open = next();
      Token name = expect(Tok::Ident, "binder name");
      expect(Tok::Colon, "':'");
      SurfPtr dom = expr();
      expect(k == Tok::LBrace ? Tok::RBrace : Tok::RBrack,
             k == Tok::LBrace ? "'}'" : "']'");
      SurfPtr body = expr();  // spans maximally right
      auto e = node(k == Tok::LBrace ? SurfTag::Pi : SurfTag::Lam,
                    join(spanOf(file_, open), body->span));
      auto m = std::const_pointer_cast<SurfExpr>(e);
      m->name = name.text;
      m->a = dom;
      m->b = body;
      return e;
    }
    return arrow();
  }

  // arrow := app ("->" expr)?   right associative
  SurfPtr arrow() {
    SurfPtr lhs = application();
    if (peek().kind == Tok::Arrow) {
      next();
      SurfPtr rhs = expr();
      auto e = node(SurfTag::Arrow, join(lhs->span, rhs->span));
      auto m = std::const_pointer_cast<SurfExpr>(e);
      m->a = lhs;
      m->b = rhs;
      return e;
    }
    return lhs;
  }

  bool atomStart(Tok k) const {
    switch (k) {
      case Tok::Ident:
      case Tok::KwSort:
      case Tok::KwLvl:
      case Tok::KwEq:
      case Tok::KwLzero:
      case Tok::KwLsuc:
      case Tok::LParen:
      case Tok::Star: return true;
      default: return false;
    }
  }

  SurfPtr application() {
    if (!atomStart(peek().kind)) fail("expected an expression", {"expression"});
    SurfPtr acc = atom();
    while (atomStart(peek().kind)) {
      SurfPtr arg = atom();
      auto e = node(SurfTag::App, join(acc->span, arg->span));
      auto m = std::const_pointer_cast<SurfExpr>(e);
      m->a = acc;
      m->b = arg;
      acc = e;
    }
    return acc;
  }

  SurfPtr atom() {
    Token t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        next();
        auto e = node(SurfTag::Name, spanOf(file_, t));
        std::const_pointer_cast<SurfExpr>(e)->name = t.text;
        return e;
      }
      case Tok::KwSort: next(); return node(SurfTag::Sort, spanOf(file_, t));
      case Tok::KwLvl: next(); return node(SurfTag::Lvl, spanOf(file_, t));
      case Tok::Star: next(); return node(SurfTag::Star, spanOf(file_, t));
      case Tok::KwLzero: next(); return node(SurfTag::LZero, spanOf(file_, t));
      case Tok::KwLsuc: {
        next();
        SurfPtr arg = atom();
        auto e = node(SurfTag::LSuc, join(spanOf(file_, t), arg->span));
        std::const_pointer_cast<SurfExpr>(e)->a = arg;
        return e;
      }
      case Tok::KwEq: {
        next();
        expect(Tok::LParen, "'('");
        SurfPtr s = expr();
        expect(Tok::Semi, "';'");
        SurfPtr l = expr();
        expect(Tok::Semi, "';'");
        SurfPtr r = expr();
        Token close = expect(Tok::RParen, "')'");
        auto e = node(SurfTag::Eq, join(spanOf(file_, t), spanOf(file_, close)));
        auto m = std::const_pointer_cast<SurfExpr>(e);
        m->a = s;
        m->b = l;
        m->c = r;
        return e;
      }
      case Tok::LParen: {
        next();
        SurfPtr inner = expr();
        Token close = expect(Tok::RParen, "')'");
        auto e = node(SurfTag::Paren, join(spanOf(file_, t), spanOf(file_, close)));
        std::const_pointer_cast<SurfExpr>(e)->a = inner;
        return e;
      }
      default:
        fail("expected an expression", {"expression"});
    }
  }

  Lexer lex_;
  std::string file_;
  size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Elaboration. The stack holds binder names innermost-last; an empty entry
// marks the anonymous binder introduced by an arrow codomain.

ObjPtr elabO(const SurfPtr& e, std::vector<std::string>& stack);

ClsPtr elabC(const SurfPtr& e, std::vector<std::string>& stack) {
  switch (e->tag) {
    case SurfTag::Sort: return Cls::sort();
    case SurfTag::Lvl: return Cls::incl(Obj::lvl());
    case SurfTag::Pi: {
      ObjPtr dom = elabO(e->a, stack);
      stack.push_back(e->name);
      ClsPtr cod = elabC(e->b, stack);
      stack.pop_back();
      return Cls::pi(dom, e->name, cod);
    }
    case SurfTag::Arrow: {
      ObjPtr dom = elabO(e->a, stack);
      stack.push_back("");
      ClsPtr cod = elabC(e->b, stack);
      stack.pop_back();
      return Cls::pi(dom, "", cod);
    }
    case SurfTag::Eq: {
      ObjPtr s = elabO(e->a, stack);
      ObjPtr l = elabO(e->b, stack);
      ObjPtr r = elabO(e->c, stack);
      return Cls::eq(s, l, r);
    }
    case SurfTag::Paren: return elabC(e->a, stack);
    default: return Cls::incl(elabO(e, stack));
  }
}

ObjPtr elabO(const SurfPtr& e, std::vector<std::string>& stack) {
  switch (e->tag) {
    case SurfTag::Name: {
      for (size_t i = stack.size(); i-- > 0;)
        if (stack[i] == e->name) return Obj::bvar(static_cast<int>(stack.size() - 1 - i));
      return Obj::fvar(e->name);
    }
    case SurfTag::Sort: return Obj::clsObj(Cls::sort());
    case SurfTag::Lvl: return Obj::lvl();
    case SurfTag::Star: return Obj::bullet();
    case SurfTag::LZero: return Obj::lzero();
    case SurfTag::LSuc: return Obj::lsuc(elabO(e->a, stack));
    case SurfTag::Pi:
    case SurfTag::Lam: {
      ObjPtr dom = elabO(e->a, stack);
      stack.push_back(e->name);
      ObjPtr body = elabO(e->b, stack);
      stack.pop_back();
      return e->tag == SurfTag::Pi ? Obj::piSort(dom, e->name, body)
                                   : Obj::lam(dom, e->name, body);
    }
    case SurfTag::Arrow: {
      ObjPtr dom = elabO(e->a, stack);
      stack.push_back("");
      ObjPtr cod = elabO(e->b, stack);
      stack.pop_back();
      return Obj::piSort(dom, "", cod);
    }
    case SurfTag::Eq: {
      ObjPtr s = elabO(e->a, stack);
      ObjPtr l = elabO(e->b, stack);
      ObjPtr r = elabO(e->c, stack);
      return Obj::clsObj(Cls::eq(s, l, r));
    }
    case SurfTag::App: {
      ObjPtr f = elabO(e->a, stack);
      ObjPtr a = elabO(e->b, stack);
      return Obj::app(f, a);
    }
    case SurfTag::Paren: return elabO(e->a, stack);
  }
  assert(false && "unreachable");
  return nullptr;
}

}  // namespace

std::vector<SurfaceDecl> parseSurfaceSignature(const std::string& text, const std::string& file) {
  Parser p(text, file);
  return p.signature();
}

SurfPtr parseSurfaceExpr(const std::string& text, const std::string& file) {
  Parser p(text, file);
  return p.topExpr();
}

ObjPtr elabObject(const SurfPtr& e) {
  std::vector<std::string> stack;
  return elabO(e, stack);
}

ClsPtr elabClass(const SurfPtr& e) {
  std::vector<std::string> stack;
  return elabC(e, stack);
}

Telescope parseSignature(const std::string& text, const std::string& file) {
  Telescope t;
  for (const auto& d : parseSurfaceSignature(text, file))
    t.push(d.name, elabClass(d.cls));
  return t;
}

ObjPtr parseObject(const std::string& text, const std::string& file) {
  return elabObject(parseSurfaceExpr(text, file));
}

ClsPtr parseClass(const std::string& text, const std::string& file) {
  return elabClass(parseSurfaceExpr(text, file));
}

// ---------------------------------------------------------------------------
// Printer. Precedence: 0 = anywhere, 1 = arrow operand or tighter,
// 2 = application head, 3 = atom. Binders and arrows extend maximally right,
// so bodies and arrow codomains never need parentheses.

namespace {

constexpr int PREC_TOP = 0;
constexpr int PREC_ARROW = 1;
constexpr int PREC_APP = 2;
constexpr int PREC_ATOM = 3;

struct Printer {
  std::vector<std::string> stack;  // binder names in scope, innermost last

  std::string bound(int index) const {
    int i = static_cast<int>(stack.size()) - 1 - index;
    if (i < 0) return "#" + std::to_string(index);  // loose index; diagnostic only
    return stack[static_cast<size_t>(i)];
  }

  std::string pickName(const std::string& hint, const ObjPtr& bodyO, const ClsPtr& bodyC) {
    std::set<std::string> taken(stack.begin(), stack.end());
    if (bodyO) freeVars(bodyO, taken);
    if (bodyC) freeVars(bodyC, taken);
    return freshName(hint, taken);
  }

  void obj(const ObjPtr& t, int prec, std::string& out) {
    switch (t->tag) {
      case ObjTag::FVar: out += t->name; return;
      case ObjTag::BVar: out += bound(t->index); return;
      case ObjTag::Bullet: out += '*'; return;
      case ObjTag::Lvl: out += "Lvl"; return;
      case ObjTag::LZero: out += "lzero"; return;
      case ObjTag::LSuc: {
        bool paren = prec > PREC_APP;
        if (paren) out += '(';
        out += "lsuc ";
        obj(t->a, PREC_ATOM, out);
        if (paren) out += ')';
        return;
      }
      case ObjTag::PiSort: {
        if (!usesBound0(t->b)) {
          bool paren = prec > PREC_ARROW;
          if (paren) out += '(';
          obj(t->a, PREC_APP, out);
          out += " -> ";
          stack.push_back("");
          obj(t->b, PREC_ARROW, out);
          stack.pop_back();
          if (paren) out += ')';
          return;
        }
        bool paren = prec > PREC_TOP;
        if (paren) out += '(';
        std::string x = pickName(t->name, t->b, nullptr);
        out += '{';
        out += x;
        out += " : ";
        obj(t->a, PREC_TOP, out);
        out += "} ";
        stack.push_back(x);
        obj(t->b, PREC_TOP, out);
        stack.pop_back();
        if (paren) out += ')';
        return;
      }
      case ObjTag::Lam: {
        bool paren = prec > PREC_TOP;
        if (paren) out += '(';
        std::string x = pickName(t->name, t->b, nullptr);
        out += '[';
        out += x;
        out += " : ";
        obj(t->a, PREC_TOP, out);
        out += "] ";
        stack.push_back(x);
        obj(t->b, PREC_TOP, out);
        stack.pop_back();
        if (paren) out += ')';
        return;
      }
      case ObjTag::App: {
        bool paren = prec > PREC_APP;
        if (paren) out += '(';
        obj(t->a, PREC_APP, out);
        out += ' ';
        obj(t->b, PREC_ATOM, out);
        if (paren) out += ')';
        return;
      }
      case ObjTag::ClsObj:
        // Improper object; printable for diagnostics. Sort and Eq forms
        // re-elaborate to the same improper embedding.
        cls(t->cls, prec, out);
        return;
    }
  }

  void cls(const ClsPtr& k, int prec, std::string& out) {
    switch (k->tag) {
      case ClsTag::Sort: out += "Sort"; return;
      case ClsTag::Incl: obj(k->obj, prec, out); return;
      case ClsTag::Eq: {
        out += "Eq(";
        obj(k->dom, PREC_TOP, out);
        out += "; ";
        obj(k->lhs, PREC_TOP, out);
        out += "; ";
        obj(k->rhs, PREC_TOP, out);
        out += ')';
        return;
      }
      case ClsTag::Pi: {
        if (!usesBound0(k->cod)) {
          bool paren = prec > PREC_ARROW;
          if (paren) out += '(';
          obj(k->dom, PREC_APP, out);
          out += " -> ";
          stack.push_back("");
          cls(k->cod, PREC_ARROW, out);
          stack.pop_back();
          if (paren) out += ')';
          return;
        }
        bool paren = prec > PREC_TOP;
        if (paren) out += '(';
        std::string x = pickName(k->hint, nullptr, k->cod);
        out += '{';
        out += x;
        out += " : ";
        obj(k->dom, PREC_TOP, out);
        out += "} ";
        stack.push_back(x);
        cls(k->cod, PREC_TOP, out);
        stack.pop_back();
        if (paren) out += ')';
        return;
      }
    }
  }
};

}  // namespace

std::string printObj(const ObjPtr& o) {
  Printer p;
  std::string s;
  p.obj(o, PREC_TOP, s);
  return s;
}

std::string printCls(const ClsPtr& k) {
  Printer p;
  std::string s;
  p.cls(k, PREC_TOP, s);
  return s;
}

std::string printDecl(const Decl& d) { return d.name + " : " + printCls(d.cls) + "."; }

std::string printTelescope(const Telescope& t) {
  std::string out;
  for (const auto& d : t.decls) {
    out += printDecl(d);
    out += '\n';
  }
  return out;
}

}  // namespace eqlf

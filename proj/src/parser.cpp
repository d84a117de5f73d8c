#include <algorithm>
#include <cctype>
#include <set>

#include "cforge/surface.hpp"

namespace cforge {

namespace {

std::string joinExpected(const std::vector<std::string>& exp) {
  std::string s;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    if (i) s += ", ";
    s += exp[i];
  }
  return s;
}

}  // namespace

ParseError::ParseError(int l, int c, std::vector<std::string> exp, std::string f, const std::string& detail)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " +
                         (detail.empty() ? "expected " + joinExpected(exp) + " but found " + f
                                         : detail + " (found " + f + ")")),
      line(l),
      col(c),
      expected(std::move(exp)),
      found(std::move(f)) {}

Dialect dialectForPath(std::string_view path) {
  return path.size() >= 6 && path.substr(path.size() - 6) == ".lamsx" ? Dialect::LamSx : Dialect::LamS;
}

namespace {

enum class Tok { Int, Ident, TyVar, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
  std::size_t begin, end;
};

const std::set<std::string> kKeywords = {"let", "in", "if", "then", "else", "blame", "true", "false",
                                         "letrec", "and", "id", "bot", "Dyn", "Int", "Bool"};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  static const char* const kLong[] = {";;", "->", "=>", "~>"};
  while (i < src.size()) {
    char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t{Tok::Sym, "", line, col, i, i};
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (ch == '\'' && i + 1 < src.size() && std::isalpha(static_cast<unsigned char>(src[i + 1]))) {
      std::size_t j = i + 1;
      while (j < src.size() && std::isalnum(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::TyVar;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      bool matched = false;
      for (const char* sym : kLong) {
        if (src.substr(i, 2) == sym) {
          t.text = sym;
          advance(2);
          matched = true;
          break;
        }
      }
      if (!matched) {
        static const std::string kSingle = "\\.:(),<>;!?^{}+-*=";
        if (kSingle.find(ch) == std::string::npos)
          throw ParseError(line, col, {"a token"}, std::string("'") + ch + "'", "unexpected character");
        t.text = std::string(1, ch);
        advance(1);
      }
    }
    t.end = i;
    out.push_back(t);
  }
  out.push_back(Token{Tok::End, "", line, col, i, i});
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, Dialect d) : toks_(lex(src)), d_(d) {}

  Program program() {
    Program p;
    p.dialect = d_;
    if (kw("letrec")) {
      ++pos_;
      p.defs.push_back(def());
      while (kw("and")) {
        ++pos_;
        p.defs.push_back(def());
      }
      expectKw("in");
    }
    p.main = expr();
    expectEnd();
    std::vector<std::string> names;
    for (const auto& d : p.defs) {
      if (std::find(names.begin(), names.end(), d.name) != names.end())
        throw ParseError(1, 1, {"distinct definition names"}, d.name, "duplicate definition " + d.name);
      names.push_back(d.name);
    }
    for (auto& d : p.defs) d.fn = resolve(d.fn, {}, names);
    p.main = resolve(p.main, {}, names);
    return p;
  }

  Term termOnly() {
    Term t = expr();
    expectEnd();
    return t;
  }

  Type typeOnly() {
    Type t = type();
    expectEnd();
    return t;
  }

  Coercion coercionOnly() {
    Coercion c = coercion();
    expectEnd();
    return c;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Dialect d_;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
  bool kw(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Ident && peek(k).text == s; }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  [[noreturn]] void error(std::vector<std::string> expected, const std::string& detail = "") const {
    const Token& t = peek();
    throw ParseError(t.line, t.col, std::move(expected), describe(t), detail);
  }

  void expectSym(const char* s) {
    if (!sym(s)) error({std::string("'") + s + "'"});
    ++pos_;
  }
  void expectKw(const char* s) {
    if (!kw(s)) error({std::string("'") + s + "'"});
    ++pos_;
  }
  void expectEnd() {
    if (peek().kind != Tok::End) error({"end of input"});
  }

  std::string ident() {
    if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) error({"identifier"});
    return toks_[pos_++].text;
  }

  std::string label() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || !std::isalpha(static_cast<unsigned char>(t.text[0])) ||
        t.text.find('\'') != std::string::npos)
      error({"blame label"});
    return toks_[pos_++].text;
  }

  // ---- types ----

  Type type() {
    Type a = atype();
    if (sym("->") || sym("=>") || sym("~>")) {
      std::string op = toks_[pos_++].text;
      Type b = type();
      if (op == "->") return funT(a, b);
      if (op == "=>") return fun2T(a, b);
      return crcT(a, b);
    }
    return a;
  }

  Type atype() {
    if (kw("Dyn")) return ++pos_, dynT();
    if (kw("Int")) return ++pos_, intT();
    if (kw("Bool")) return ++pos_, boolT();
    if (peek().kind == Tok::TyVar) {
      std::string s = toks_[pos_].text;
      int id = 0;
      for (char c : s)
        if (std::isdigit(static_cast<unsigned char>(c))) id = id * 10 + (c - '0');
      ++pos_;
      return varT(id);
    }
    if (sym("(")) {
      ++pos_;
      Type t = type();
      expectSym(")");
      return t;
    }
    error({"Dyn", "Int", "Bool", "'('", "type variable"});
  }

  Type groundType() {
    std::size_t at = pos_;
    Type t = atype();
    if (!isGround(t)) {
      pos_ = at;
      error({"ground type"});
    }
    return t;
  }

  // ---- coercions ----

  struct Item {
    enum Kind { Proj, Inj, Full } kind;
    Type g;
    std::string label;
    Coercion c;
  };

  bool groundAhead() const {
    if (kw("Int") || kw("Bool")) return true;
    return sym("(") && kw("Dyn", 1) && (sym("->", 2) || sym("=>", 2)) && kw("Dyn", 3) && sym(")", 4) &&
           (sym("!", 5) || sym("?", 5));
  }

  Item item() {
    if (kw("id")) {
      ++pos_;
      expectSym("{");
      Type t = type();
      expectSym("}");
      return {Item::Full, nullptr, "", idC(t)};
    }
    if (kw("bot")) {
      ++pos_;
      expectSym("{");
      Type g = groundType();
      expectSym(",");
      std::string p = label();
      expectSym(",");
      Type h = groundType();
      if (typeEq(g, h)) error({"'}'"}, "failure coercion needs two different ground types");
      expectSym("}");
      return {Item::Full, nullptr, "", failC(g, p, h)};
    }
    if (groundAhead()) {
      Type g = groundType();
      if (sym("!")) {
        ++pos_;
        return {Item::Inj, g, "", nullptr};
      }
      expectSym("?");
      expectSym("^");
      std::string p = label();
      return {Item::Proj, g, p, nullptr};
    }
    if (sym("(")) {
      ++pos_;
      Coercion c = coercion();
      expectSym(")");
      return {Item::Full, nullptr, "", c};
    }
    error({"id", "bot", "ground type", "'('"});
  }

  Coercion seq() {
    const Token& start = peek();
    std::vector<Item> items{item()};
    while (sym(";")) {
      ++pos_;
      items.push_back(item());
    }
    std::size_t i = 0;
    const Item* proj = nullptr;
    const Item* mid = nullptr;
    const Item* inj = nullptr;
    if (i < items.size() && items[i].kind == Item::Proj) proj = &items[i++];
    if (i < items.size() && items[i].kind == Item::Full) mid = &items[i++];
    if (i < items.size() && items[i].kind == Item::Inj) inj = &items[i++];
    auto bad = [&](const std::string& why) {
      throw ParseError(start.line, start.col, {"canonical coercion"}, describe(start), why);
    };
    if (i != items.size()) bad("coercion sequence is not of the form G?^p ; g ; G!");
    Coercion core = mid ? mid->c : nullptr;
    if (inj) core = injC(core ? core : idC(inj->g), inj->g);
    if (proj) core = projC(proj->g, proj->label, core ? core : idC(proj->g));
    if (items.size() > 1 || proj || inj) {
      try {
        coercionType(core);
      } catch (const CoercionError& e) {
        bad(e.what());
      }
      if (!isCanonical(core)) bad("coercion is not in canonical form");
    }
    return core;
  }

  Coercion coercion() {
    Coercion c = seq();
    if (sym("->") || sym("=>")) {
      TypeKind arrow = peek().text == "->" ? TypeKind::Fun : TypeKind::Fun2;
      ++pos_;
      Coercion r = coercion();
      return mkFun(c, r, arrow);
    }
    return c;
  }

  // ---- terms ----

  struct Piece {
    Term t;
    bool bareApp = false;
  };

  void noBareApp(const Piece& p) const {
    if (p.bareApp)
      error({"parenthesized application"}, "an application used as an operand must be parenthesized");
  }

  Def def() {
    std::string name = ident();
    expectSym("(");
    std::string x = ident();
    expectSym(":");
    Type a = type();
    if (d_ == Dialect::LamSx) {
      expectSym(",");
      std::string k = ident();
      expectSym(":");
      Type b = type();
      expectSym(")");
      expectSym("=");
      Term body = expr();
      return {name, mkAbs2(x, a, k, b, body)};
    }
    expectSym(")");
    expectSym(":");
    Type b = type();
    expectSym("=");
    Term body = expr();
    return {name, mkAbs(x, a, body, b)};
  }

  Term expr() {
    if (sym("\\")) {
      ++pos_;
      if (d_ == Dialect::LamSx) {
        expectSym("(");
        std::string x = ident();
        expectSym(":");
        Type a = type();
        expectSym(",");
        std::string k = ident();
        expectSym(":");
        Type b = type();
        expectSym(")");
        expectSym(".");
        return mkAbs2(x, a, k, b, expr());
      }
      std::string x = ident();
      expectSym(":");
      Type a = type();
      expectSym(".");
      return mkAbs(x, a, expr());
    }
    if (kw("let")) {
      ++pos_;
      std::string x = ident();
      expectSym("=");
      Term bound = expr();
      expectKw("in");
      return mkLet(x, bound, expr());
    }
    if (kw("if")) {
      ++pos_;
      Term c = expr();
      expectKw("then");
      Term t = expr();
      expectKw("else");
      return mkIf(c, t, expr());
    }
    return composeLevel().t;
  }

  Piece composeLevel() {
    Piece l = relLevel();
    while (sym(";;")) {
      noBareApp(l);
      ++pos_;
      Piece r = relLevel();
      noBareApp(r);
      l = {mkCompose(l.t, r.t)};
    }
    return l;
  }

  Piece relLevel() {
    Piece l = addLevel();
    if (sym("=") || sym("<")) {
      OpKind op = peek().text == "=" ? OpKind::Eq : OpKind::Lt;
      noBareApp(l);
      ++pos_;
      Piece r = addLevel();
      noBareApp(r);
      return {mkOp(op, l.t, r.t)};
    }
    return l;
  }

  Piece addLevel() {
    Piece l = mulLevel();
    while (sym("+") || sym("-")) {
      OpKind op = peek().text == "+" ? OpKind::Add : OpKind::Sub;
      noBareApp(l);
      ++pos_;
      Piece r = mulLevel();
      noBareApp(r);
      l = {mkOp(op, l.t, r.t)};
    }
    return l;
  }

  Piece mulLevel() {
    Piece l = chain();
    while (sym("*")) {
      noBareApp(l);
      ++pos_;
      Piece r = chain();
      noBareApp(r);
      l = {mkOp(OpKind::Mul, l.t, r.t)};
    }
    return l;
  }

  bool adjacent(std::size_t k) const { return peek(k).begin == peek(k - 1).end; }

  bool atomAhead() const {
    const Token& t = peek();
    if (t.kind == Tok::Int) return true;
    if (t.kind == Tok::Ident) {
      if (!kKeywords.count(t.text)) return true;
      return t.text == "true" || t.text == "false" || t.text == "blame";
    }
    return sym("(");
  }

  Piece chain() {
    Piece p{atom()};
    for (;;) {
      if (sym("<") && sym("<", 1) && adjacent(1)) {
        pos_ += 2;
        Coercion c = coercion();
        expectSym(">");
        if (!sym(">") || !adjacent(0)) error({"'>>'"});
        ++pos_;
        p = {mkCoerced(p.t, c), p.bareApp};
        continue;
      }
      if (sym("<")) {
        std::size_t save = pos_;
        try {
          ++pos_;
          if (d_ == Dialect::LamS) {
            Coercion c = coercion();
            expectSym(">");
            p = {mkCrcApp(p.t, c), p.bareApp};
          } else {
            std::size_t inner = pos_;
            try {
              Coercion c = coercion();
              expectSym(">");
              p = {mkCrcAppX(p.t, mkCrcLit(c)), p.bareApp};
              continue;
            } catch (const ParseError&) {
              pos_ = inner;  // not a bare coercion literal
            }
            Term n = expr();
            expectSym(">");
            p = {mkCrcAppX(p.t, n), p.bareApp};
          }
          continue;
        } catch (const ParseError&) {
          pos_ = save;  // a comparison, not a coercion application
          break;
        }
      }
      if (d_ == Dialect::LamSx && sym("(")) {
        ++pos_;
        Term a = expr();
        expectSym(",");
        Term k = expr();
        expectSym(")");
        p = {mkApp2(p.t, a, k), true};
        continue;
      }
      if (d_ == Dialect::LamS && atomAhead()) {
        Term a = atom();
        p = {mkApp(p.t, a), true};
        continue;
      }
      break;
    }
    return p;
  }

  bool coercionLiteralAhead() const {
    return kw("id") || kw("bot") || kw("Int") || kw("Bool") || sym("(");
  }

  Term atom() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      ++pos_;
      try {
        return mkInt(std::stoll(t.text));
      } catch (const std::out_of_range&) {
        --pos_;
        error({"integer literal"}, "integer literal out of range");
      }
    }
    if (kw("true")) return ++pos_, mkBool(true);
    if (kw("false")) return ++pos_, mkBool(false);
    if (kw("blame")) {
      ++pos_;
      return mkBlame(label());
    }
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) return mkVar(toks_[pos_++].text);
    if (sym("(") && sym("-", 1) && peek(2).kind == Tok::Int && sym(")", 3)) {
      std::string digits = peek(2).text;
      pos_ += 2;
      unsigned long long v = 0;
      try {
        v = std::stoull(digits);
      } catch (const std::out_of_range&) {
        error({"integer literal"}, "integer literal out of range");
      }
      if (v > (1ULL << 63)) error({"integer literal"}, "integer literal out of range");
      pos_ += 2;
      return mkInt(static_cast<std::int64_t>(0ULL - v));
    }
    if (d_ == Dialect::LamSx && coercionLiteralAhead()) {
      std::size_t save = pos_;
      try {
        return mkCrcLit(seq());
      } catch (const ParseError&) {
        pos_ = save;
        if (!sym("(")) throw;
      }
    }
    if (sym("(")) {
      ++pos_;
      Term m = expr();
      expectSym(")");
      return m;
    }
    error({"integer", "true", "false", "identifier", "blame", "'('"});
  }

  static Term resolve(const Term& m, std::vector<std::string> bound, const std::vector<std::string>& globals) {
    if (!m) return m;
    auto isBound = [&](const std::string& x) { return std::find(bound.begin(), bound.end(), x) != bound.end(); };
    switch (m->kind) {
      case TermKind::Var:
        if (!isBound(m->x) && std::find(globals.begin(), globals.end(), m->x) != globals.end())
          return mkGlobal(m->x);
        return m;
      case TermKind::Abs: {
        bound.push_back(m->x);
        Term b = resolve(m->a, bound, globals);
        return withChildren(m, b);
      }
      case TermKind::Abs2: {
        bound.push_back(m->x);
        bound.push_back(m->k);
        Term b = resolve(m->a, bound, globals);
        return withChildren(m, b);
      }
      case TermKind::Let: {
        Term a = resolve(m->a, bound, globals);
        bound.push_back(m->x);
        Term b = resolve(m->b, bound, globals);
        return withChildren(m, a, b);
      }
      default:
        return withChildren(m, resolve(m->a, bound, globals), resolve(m->b, bound, globals),
                            resolve(m->d, bound, globals));
    }
  }
};

}  // namespace

Program parseProgram(std::string_view text, Dialect d) { return Parser(text, d).program(); }
Term parseTerm(std::string_view text, Dialect d) { return Parser(text, d).termOnly(); }
Type parseType(std::string_view text) { return Parser(text, Dialect::LamS).typeOnly(); }
Coercion parseCoercion(std::string_view text) { return Parser(text, Dialect::LamS).coercionOnly(); }

}  // namespace cforge

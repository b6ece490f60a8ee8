#include "lcs/syntax.hpp"

#include <cctype>
#include <cstring>
#include <sstream>

namespace lcs {

ParseError::ParseError(const std::string& msg, Location loc)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + msg), where(loc) {}

std::vector<Token> tokenize(const std::string& text) {
  static const char* multi[] = {"~>", "=>", "->", "<=", ">=", "!=", "&&", "||"};
  std::vector<Token> out;
  Location loc;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++loc.line;
        loc.column = 1;
      } else {
        ++loc.column;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Location start = loc;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' ||
                                 text[j] == '\'' || text[j] == '#'))
        ++j;
      out.push_back({Tok::Ident, text.substr(i, j - i), start});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::Number, text.substr(i, j - i), start});
      advance(j - i);
      continue;
    }
    if (c == '\'') {
      out.push_back({Tok::Quote, "'", start});
      advance(1);
      continue;
    }
    bool matched = false;
    for (const char* m : multi) {
      if (text.compare(i, std::strlen(m), m) == 0) {
        out.push_back({Tok::Punct, m, start});
        advance(std::strlen(m));
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::strchr("()[],;:.<>=+-*/%!~|", c)) {
      out.push_back({Tok::Punct, std::string(1, c), start});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }
  out.push_back({Tok::End, "", loc});
  return out;
}

TermParser::TermParser(const std::vector<Token>& toks, size_t pos, ParseScope& scope)
    : toks_(toks), pos_(pos), scope_(scope) {}

const Token& TermParser::peek(size_t k) const {
  size_t p = std::min(pos_ + k, toks_.size() - 1);
  return toks_[p];
}

bool TermParser::isPunct(const char* p, size_t k) const {
  const Token& t = peek(k);
  return t.kind == Tok::Punct && t.text == p;
}

Token TermParser::next() {
  Token t = peek();
  if (pos_ < toks_.size() - 1) ++pos_;
  return t;
}

void TermParser::expect(const char* p) {
  if (!isPunct(p)) fail(std::string("expected '") + p + "' but found '" + peek().text + "'", peek().loc);
  next();
}

void TermParser::fail(const std::string& msg, Location loc) const { throw ParseError(msg, loc); }

Term TermParser::build(const std::string& name, std::vector<Term> args, Location loc) {
  const FunctionSymbol* f = scope_.sig->find(name);
  if (!f) fail("unknown symbol '" + name + "'", loc);
  bool arityOk = false;
  for (auto& r : f->ranks) arityOk = arityOk || r.args.size() == args.size();
  if (!arityOk) fail("arity mismatch for '" + name + "': got " + std::to_string(args.size()) + " arguments", loc);
  try {
    return mkApp(*scope_.sig, name, std::move(args));
  } catch (const SortError& e) {
    fail(e.what(), loc);
  }
}

Term TermParser::parseExpr() { return implies(); }

Term TermParser::implies() {
  Term a = disj();
  if (isPunct("->")) {
    Location loc = next().loc;
    Term b = implies();
    return build("->", {a, b}, loc);
  }
  return a;
}

Term TermParser::disj() {
  Term a = conj();
  while (isPunct("||")) {
    Location loc = next().loc;
    a = build("||", {a, conj()}, loc);
  }
  return a;
}

Term TermParser::conj() {
  Term a = negation();
  while (isPunct("&&")) {
    Location loc = next().loc;
    a = build("&&", {a, negation()}, loc);
  }
  return a;
}

Term TermParser::negation() {
  if (isPunct("!")) {
    Location loc = next().loc;
    return build("!", {negation()}, loc);
  }
  return comparison();
}

Term TermParser::comparison() {
  Term a = stack();
  for (const char* op : {"=", "!=", "<", "<=", ">", ">="}) {
    if (isPunct(op)) {
      Location loc = next().loc;
      Term b = stack();
      return build(op, {a, b}, loc);
    }
  }
  return a;
}

Term TermParser::stack() {
  Term a = additive();
  if (isPunct("~>")) {
    Location loc = next().loc;
    Term b = stack();
    return build("cons", {a, b}, loc);
  }
  return a;
}

Term TermParser::additive() {
  Term a = multiplicative();
  while (isPunct("+") || isPunct("-")) {
    Token op = next();
    a = build(op.text, {a, multiplicative()}, op.loc);
  }
  return a;
}

Term TermParser::multiplicative() {
  Term a = unary();
  while (isPunct("*") || isPunct("/") || isPunct("%")) {
    Token op = next();
    a = build(op.text, {a, unary()}, op.loc);
  }
  return a;
}

Term TermParser::unary() {
  if (isPunct("-")) {
    Location loc = next().loc;
    if (peek().kind == Tok::Number) return mkInt(-BigInt(next().text));
    return build("neg", {unary()}, loc);
  }
  return primary();
}

Term TermParser::quantifier(bool exists) {
  std::vector<Term> vars;
  auto saved = scope_.vars;
  do {
    Token v = next();
    if (v.kind != Tok::Ident) fail("expected bound variable", v.loc);
    expect(":");
    Token s = next();
    SortId sort = intern(s.text);
    if (s.kind != Tok::Ident || !scope_.sig->hasSort(sort)) fail("unknown sort '" + s.text + "'", s.loc);
    Term var = mkVar(v.text, sort);
    scope_.vars[v.text] = var;
    vars.push_back(var);
  } while (isPunct(",") && (next(), true));
  expect(".");
  Term body = parseExpr();
  scope_.vars = saved;
  if (body->sort != sorts::Bool()) fail("quantifier body must be Bool", peek().loc);
  return mkQuant(exists, vars, body);
}

Term TermParser::primary() {
  Token t = next();
  switch (t.kind) {
    case Tok::Number:
      return mkInt(BigInt(t.text));
    case Tok::Quote: {
      Token id = next();
      if (id.kind != Tok::Ident) fail("expected identifier after quote", id.loc);
      return mkId(id.text);
    }
    case Tok::Ident:
      return identifier(t);
    case Tok::Punct:
      if (t.text == "(") {
        Term e = parseExpr();
        expect(")");
        return e;
      }
      if (t.text == "[") {
        std::vector<Term> items;
        if (!isPunct("]")) {
          items.push_back(parseExpr());
          while (isPunct(",")) {
            next();
            items.push_back(parseExpr());
          }
        }
        expect("]");
        Term acc = build("nil", {}, t.loc);
        for (size_t i = items.size(); i-- > 0;) acc = build("cons", {items[i], acc}, t.loc);
        return acc;
      }
      break;
    case Tok::End:
      fail("unexpected end of input", t.loc);
  }
  fail("unexpected token '" + t.text + "'", t.loc);
}

Term TermParser::identifier(const Token& tok) {
  const std::string& name = tok.text;
  if (name == "exists" || name == "forall") return quantifier(name == "exists");
  if (name == "true") return mkTrue();
  if (name == "false") return mkFalse();
  if (isPunct("(")) {
    next();
    std::vector<Term> args;
    if (!isPunct(")")) {
      args.push_back(parseExpr());
      while (isPunct(",")) {
        next();
        args.push_back(parseExpr());
      }
    }
    expect(")");
    return build(name, std::move(args), tok.loc);
  }
  if (scope_.inlineVars && isPunct(":") && peek(1).kind == Tok::Ident) {
    next();
    Token s = next();
    SortId sort = intern(s.text);
    if (!scope_.sig->hasSort(sort)) fail("unknown sort '" + s.text + "'", s.loc);
    auto it = scope_.vars.find(name);
    if (it != scope_.vars.end() && it->second->sort != sort)
      fail("variable '" + name + "' already has sort " + nameOf(it->second->sort), tok.loc);
    Term v = mkVar(name, sort);
    scope_.vars[name] = v;
    return v;
  }
  if (auto it = scope_.vars.find(name); it != scope_.vars.end()) return it->second;
  if (auto it = scope_.macros.find(name); it != scope_.macros.end()) return it->second;
  if (const FunctionSymbol* f = scope_.sig->find(name)) {
    for (auto& r : f->ranks)
      if (r.args.empty()) return build(name, {}, tok.loc);
    fail("symbol '" + name + "' used without arguments", tok.loc);
  }
  if (scope_.ids.count(name)) return mkId(name);
  fail("unknown name '" + name + "'", tok.loc);
}

Term parseTerm(const std::string& text, ParseScope& scope) {
  auto toks = tokenize(text);
  TermParser p(toks, 0, scope);
  Term t = p.parseExpr();
  if (toks[p.position()].kind != Tok::End)
    throw ParseError("trailing input '" + toks[p.position()].text + "'", toks[p.position()].loc);
  return t;
}

namespace {

const char* infixOf(Term t) {
  if (t->tag != Tag::App || t->kind != SymKind::Builtin) return nullptr;
  switch (t->theory) {
    case Theory::Add: return "+";
    case Theory::Sub: return "-";
    case Theory::Mul: return "*";
    case Theory::Div: return "/";
    case Theory::Mod: return "%";
    case Theory::Lt: return "<";
    case Theory::Le: return "<=";
    case Theory::Gt: return ">";
    case Theory::Ge: return ">=";
    case Theory::Eq: return "=";
    case Theory::Ne: return "!=";
    case Theory::And: return "&&";
    case Theory::Or: return "||";
    case Theory::Implies: return "->";
    default: return nullptr;
  }
}

void print(std::ostream& os, Term t, const PrintOptions& opt) {
  switch (t->tag) {
    case Tag::Var:
      os << t->str();
      if (opt.annotateVars) os << ":" << nameOf(t->sort);
      return;
    case Tag::Int:
      os << t->ival;
      return;
    case Tag::Bool:
      os << (t->bval ? "true" : "false");
      return;
    case Tag::Id:
      if (opt.quoteIds) os << "'";
      os << t->str();
      return;
    case Tag::Quant: {
      os << "(" << (t->exists ? "exists " : "forall ");
      for (size_t i = 0; i + 1 < t->args.size(); ++i)
        os << (i ? ", " : "") << t->args[i]->str() << ":" << nameOf(t->args[i]->sort);
      os << " . ";
      print(os, t->body(), opt);
      os << ")";
      return;
    }
    case Tag::App:
      break;
  }
  if (const char* op = infixOf(t)) {
    os << "(";
    print(os, t->args[0], opt);
    os << " " << op << " ";
    print(os, t->args[1], opt);
    os << ")";
    return;
  }
  if (isTheory(t, Theory::Not)) {
    os << "!";
    bool paren = t->args[0]->tag == Tag::App && !infixOf(t->args[0]) && t->args[0]->args.empty();
    if (paren) os << "(";
    print(os, t->args[0], opt);
    if (paren) os << ")";
    return;
  }
  const std::string& name = t->str();
  if (name == "nil" && t->args.empty()) {
    os << "[]";
    return;
  }
  if (name == "cons" && t->args.size() == 2) {
    std::vector<Term> items;
    Term cur = t;
    while (cur->tag == Tag::App && cur->str() == "cons" && cur->args.size() == 2) {
      items.push_back(cur->args[0]);
      cur = cur->args[1];
    }
    if (cur->tag == Tag::App && cur->str() == "nil" && cur->args.empty()) {
      os << "[";
      for (size_t i = 0; i < items.size(); ++i) {
        if (i) os << ", ";
        print(os, items[i], opt);
      }
      os << "]";
      return;
    }
    os << "(";
    for (Term it : items) {
      print(os, it, opt);
      os << " ~> ";
    }
    print(os, cur, opt);
    os << ")";
    return;
  }
  os << name;
  if (t->args.empty()) return;
  os << "(";
  for (size_t i = 0; i < t->args.size(); ++i) {
    if (i) os << ", ";
    print(os, t->args[i], opt);
  }
  os << ")";
}

}  // namespace

std::string printTerm(Term t, const PrintOptions& opt) {
  std::ostringstream os;
  print(os, t, opt);
  return os.str();
}

std::string show(Term t) { return t ? printTerm(t) : std::string("<null>"); }

}  // namespace lcs

#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcs/term.hpp"

namespace lcs {

struct Location {
  int line = 1;
  int column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, Location loc);
  Location where;
};

enum class Tok : uint8_t { Ident, Number, Punct, Quote, End };

struct Token {
  Tok kind;
  std::string text;
  Location loc;
};

std::vector<Token> tokenize(const std::string& text);

struct ParseScope {
  const Signature* sig = nullptr;
  std::map<std::string, Term> vars;
  std::map<std::string, Term> macros;
  std::set<std::string> ids;
  bool inlineVars = true;
};

class TermParser {
 public:
  TermParser(const std::vector<Token>& toks, size_t pos, ParseScope& scope);
  Term parseExpr();
  size_t position() const { return pos_; }

 private:
  const Token& peek(size_t k = 0) const;
  bool isPunct(const char* p, size_t k = 0) const;
  void expect(const char* p);
  Token next();
  Term implies();
  Term disj();
  Term conj();
  Term negation();
  Term comparison();
  Term stack();
  Term additive();
  Term multiplicative();
  Term unary();
  Term primary();
  Term quantifier(bool exists);
  Term identifier(const Token& tok);
  Term build(const std::string& name, std::vector<Term> args, Location loc);
  [[noreturn]] void fail(const std::string& msg, Location loc) const;

  const std::vector<Token>& toks_;
  size_t pos_;
  ParseScope& scope_;
};

Term parseTerm(const std::string& text, ParseScope& scope);

struct PrintOptions {
  bool annotateVars = false;
  bool quoteIds = false;
};

std::string printTerm(Term t, const PrintOptions& opt = {});
std::string show(Term t);

}  // namespace lcs

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <string>
#include <vector>

#include "lcs/signature.hpp"

namespace lcs {

using BigInt = boost::multiprecision::cpp_int;

enum class Tag : uint8_t { Var, App, Int, Bool, Id, Quant };

struct Node;
using Term = const Node*;

enum : uint8_t {
  kHasVar = 1,
  kHasAxiom = 2,
  kHasQuant = 4,
  kHasConstructor = 8,
};

struct Node {
  Tag tag;
  SymKind kind;      // App only
  Theory theory;     // App only, builtin symbols
  bool exists;       // Quant only
  uint8_t flags;
  Name name;         // Var / App / Id
  SortId sort;
  BigInt ival;
  bool bval;
  std::vector<Term> args;  // App: children; Quant: bound variables followed by the body
  size_t hash;

  bool isVar() const { return tag == Tag::Var; }
  bool isApp() const { return tag == Tag::App; }
  bool isLiteral() const { return tag == Tag::Int || tag == Tag::Bool || tag == Tag::Id; }
  bool ground() const { return !(flags & kHasVar); }
  bool hasAxiom() const { return flags & kHasAxiom; }
  bool hasConstructor() const { return flags & kHasConstructor; }
  bool isTrue() const { return tag == Tag::Bool && bval; }
  bool isFalse() const { return tag == Tag::Bool && !bval; }
  const std::string& str() const { return nameOf(name); }
  Term body() const { return args.back(); }
};

struct TermLess {
  bool operator()(Term a, Term b) const;
};
int compareTerms(Term a, Term b);

Term mkVar(Name name, SortId sort);
Term mkVar(const std::string& name, SortId sort);
Term mkInt(const BigInt& v);
Term mkInt(long v);
Term mkBool(bool b);
Term mkId(Name name);
Term mkId(const std::string& name);
Term mkAppRaw(Name name, SymKind kind, Theory th, SortId sort, std::vector<Term> args);
// Sort is the least result sort; throws SortError if no rank accepts the arguments.
Term mkApp(const Signature& sig, Name name, std::vector<Term> args);
Term mkApp(const Signature& sig, const std::string& name, std::vector<Term> args);
Term mkTheory(Theory th, std::vector<Term> args);
Term mkQuant(bool exists, std::vector<Term> vars, Term body);

// Formula helpers with light local simplification.
Term mkTrue();
Term mkFalse();
Term mkNot(Term a);
Term mkAnd(Term a, Term b);
Term mkAnd(const std::vector<Term>& xs);
Term mkOr(Term a, Term b);
Term mkOr(const std::vector<Term>& xs);
Term mkImplies(Term a, Term b);
Term mkEq(Term a, Term b);
Term mkExists(const std::vector<Term>& vars, Term body);

bool isTheory(Term t, Theory th);
std::vector<Term> conjuncts(Term t);
std::vector<Term> disjuncts(Term t);

size_t termSize(Term t);
size_t liveNodeCount();

// A variable name fresh for the whole process.
Name freshName(Name base);

}  // namespace lcs

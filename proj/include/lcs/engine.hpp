#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lcs/signature.hpp"
#include "lcs/solver.hpp"
#include "lcs/subst.hpp"
#include "lcs/term.hpp"

namespace lcs {

struct RewriteRule {
  std::string label;
  Term lhs = nullptr;
  Term rhs = nullptr;
  Term cond = nullptr;
};

struct Lctrs {
  std::vector<RewriteRule> rules;
  SortId configSort = 0;
};

class AxiomSet {
 public:
  void add(RewriteRule eq);
  const std::vector<RewriteRule>* forSymbol(Name f) const;
  size_t size() const;
  const std::map<Name, std::vector<RewriteRule>>& all() const { return eqs_; }

 private:
  std::map<Name, std::vector<RewriteRule>> eqs_;
};

struct LanguageDefinition {
  std::string name;
  Signature sig;
  Lctrs semantics;
  AxiomSet axioms;
  std::map<std::string, BigInt> params;
};

// Unification modulo builtins and axiomatized symbols.
struct Unifier {
  Term constraint = nullptr;
  Subst subst;
  std::vector<Term> fresh;  // existential variables introduced by unrolling
};

struct UnifyResult {
  std::vector<Unifier> unifiers;
  bool incomplete = false;
};

struct UnifyOptions {
  const AxiomSet* axioms = nullptr;
  int depth = 0;
};

using Bindable = std::unordered_set<Term>;

UnifyResult unify(Term a, Term b, const Bindable& bindable, const UnifyOptions& opt);
UnifyResult umbUnify(Term t1, Term t2);
UnifyResult umasUnify(Term t1, Term t2, const AxiomSet& axioms, int depth);

struct Purified {
  Term term;
  Term constraint;
  std::vector<Term> fresh;
};

// Replaces each maximal non-variable builtin subterm under a constructor by a
// fresh variable; the defining equalities are returned as the constraint.
Purified purify(Term t);

class NormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NondeterminismError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TopMostVerdict {
  bool ok = true;
  std::vector<std::string> offending;
};

TopMostVerdict checkTopMost(const Lctrs& lctrs, const Signature& sig);

struct EngineOptions {
  int unrollDepth = 4;
  int fuel = 10000;
  bool deterministic = false;
};

struct Derivative {
  Term term = nullptr;
  Term constraint = nullptr;  // phi && step
  Term step = nullptr;        // unifier and rule constraint alone
  Term rawStep = nullptr;     // step before abstraction of leftover axiomatized subterms
  std::vector<Term> fresh;    // existential in step
  std::string rule;
  bool flagged = false;       // abstraction or unknown satisfiability
  bool abstracted = false;
};

struct DerivativeSet {
  std::vector<Derivative> items;
  bool incomplete = false;
};

struct Chain {
  Term term;
  Term constraint;
  int depth;
  bool flagged;
};

class Engine {
 public:
  Engine(const LanguageDefinition& lang, Solver* solver, EngineOptions opt = {});

  const LanguageDefinition& language() const { return lang_; }
  const EngineOptions& options() const { return opt_; }
  Solver* solver() const { return solver_; }

  Term normalize(Term t);
  // Ground-only contract: throws NormalizationError if an axiomatized symbol remains.
  Term normalizeGround(Term t);

  std::optional<Term> stepConcrete(Term cfg);
  std::vector<Term> successorsConcrete(Term cfg);

  DerivativeSet derivatives(Term t, Term phi);
  std::vector<Chain> derivativesBounded(Term t, Term phi, int minSteps, int maxSteps);

  // Replaces axiomatized builtin-sorted subterms left in a constraint by fresh variables.
  Term abstractResidual(Term phi, std::vector<Term>& fresh);

  size_t ruleApplications() const { return applications_; }

 private:
  Term normalizeRec(Term t, int& fuel);
  bool mayMatch(Term subject, Term pattern) const;
  const std::vector<std::pair<RewriteRule, Bindable>>& sealedFor(Name f);

  const LanguageDefinition& lang_;
  Solver* solver_;
  EngineOptions opt_;
  std::unordered_map<Term, Term> normCache_;
  std::map<Name, std::vector<std::pair<RewriteRule, Bindable>>> sealed_;
  size_t applications_ = 0;
};

}  // namespace lcs

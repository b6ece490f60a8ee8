#pragma once

#include <random>
#include <string>
#include <vector>

#include "lcs/prover.hpp"

namespace lcs::props {

struct Report {
  size_t checks = 0;
  size_t skipped = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  void fail(std::string msg) {
    if (violations.size() < 20) violations.push_back(std::move(msg));
    else if (violations.size() == 20) violations.push_back("...");
  }
};

struct Fixture {
  std::string term;
  std::string constraint;
};

// Constrained IMP1 configurations over Int variables I J K and a Bool variable B.
const std::vector<Fixture>& oracleFixtures();
Term parseFixture(const LanguageDefinition& lang, const std::string& text);

// Derivatives instantiated under every valuation of the fixture variables over
// the integers lo..hi must coincide with the concrete one-step successors.
Report derivativeOracle(const LanguageDefinition& lang, Solver& solver, const std::vector<Fixture>& fixtures, int lo,
                        int hi);

// A ground term of the given sort drawn from the nullary constructors, literals and small environments.
Term randomGround(const Signature& sig, SortId sort, std::mt19937& rng);

// Valuations rho with rho(phi) true, grounding every variable in vars.
std::vector<Subst> sampleValuations(const Signature& sig, Solver& solver, Term phi, const VarSet& vars, int count,
                                    std::mt19937& rng);

struct UnifyCase {
  std::string origin;
  Term left;
  Term right;
  std::shared_ptr<const LanguageDefinition> lang;
};

// Unification problems drawn from the fixtures against the semantics rules and
// from the circularities and goals of every bundled problem.
std::vector<UnifyCase> unificationCorpus();

Report unifierSoundness(const std::vector<UnifyCase>& cases, Solver& solver, int samples, int depth, unsigned seed);

// Random IMP2 programs run concretely; the stack never grows beyond k + 1 entries.
Report stackBound(int traces, int k, unsigned seed);

struct RunResult {
  Term last = nullptr;
  size_t steps = 0;
  bool terminated = false;
  std::vector<Term> trace;
};

RunResult runConcrete(const LanguageDefinition& lang, Term start, size_t budget, bool keepTrace);

// Checks the simulation claim of every goal of the problem by running both sides
// for the shared input N in lo..hi; a violation is an instance whose lhs run ends
// in a configuration that no rhs configuration relates to through the base set.
Report bruteForceSimulation(const EquivalenceProblem& p, Direction d, SimKind mode, int lo, int hi,
                            size_t budget = 20000);

}  // namespace lcs::props

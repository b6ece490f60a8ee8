#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lcs/engine.hpp"
#include "lcs/langdef.hpp"
#include "lcs/solver.hpp"

namespace lcs {

struct ProverConfig {
  int lhsStepBound = 100;
  int rhsBound = 100;
  int unrollDepth = 4;
  size_t maxNodes = 20000;
  bool failFast = true;
  SolverConfig smt;
};

enum class Verdict : uint8_t { Proved, Failed, BoundExceeded };
std::string toString(Verdict v);

enum class ProofRule : uint8_t { Axiom, Base, Circ, Step, Stuck, Bound };
std::string toString(ProofRule r);

struct Citation {
  std::string label;
  bool circularity = false;
  int rhsSteps = 0;
};

struct FlaggedStep {
  std::string rule;
  Term condition;  // the rule condition as instantiated, before abstraction
};

struct ProofNode {
  ProofRule rule = ProofRule::Stuck;
  Term lhs = nullptr;
  Term rhs = nullptr;
  Term constraint = nullptr;
  int guard = 0;
  int depth = 0;
  std::vector<Citation> cover;  // Base/Circ witnesses for (part of) the constraint
  std::vector<Citation> blocked;  // circularities that matched but were not admissible at this guard
  Term covered = nullptr;       // disjunction of the witnessed constraints
  Term residual = nullptr;      // what is left for Step, or left open
  Term stepCover = nullptr;     // disjunction of the successor conditions at a Step node
  std::string query;            // side condition that closed the node
  std::vector<FlaggedStep> flagged;
  bool incompleteUnification = false;
  std::string note;
  std::optional<Valuation> model;
  std::vector<ProofNode> children;
};

struct ProofOutcome {
  std::string goal;
  SimKind mode = SimKind::Full;
  Verdict verdict = Verdict::Failed;
  ProofNode root;
  size_t nodes = 0;
  size_t smtQueries = 0;
  double wallMillis = 0;
};

// Every Stuck or Bound leaf of the tree.
std::vector<const ProofNode*> frontier(const ProofOutcome& o);

struct Sides {
  const LanguageDefinition* left;
  const LanguageDefinition* right;
};

class Prover {
 public:
  Prover(Sides sides, Solver& solver, ProverConfig cfg);

  ProofOutcome prove(const SimulationFormula& goal, const std::vector<SimulationFormula>& G,
                     const std::vector<SimulationFormula>& B, SimKind mode);

  // sub((P, Q), R): the constraint under which (P, Q) is an instance of a member of R.
  Term subsumption(Term P, Term Q, const std::vector<SimulationFormula>& R);

  Engine& leftEngine() { return left_; }
  Engine& rightEngine() { return right_; }

 private:
  struct Search;
  ProofNode sequent(Search& s, Term P, Term Q, Term phi, int g, int depth);
  Term cover(Term P, Term Qchain, Term chainPhi, const SimulationFormula& R, const VarSet& ctx);
  bool lhsMayMatch(Term P, Term phi, const SimulationFormula& R);

  Sides sides_;
  Solver& solver_;
  ProverConfig cfg_;
  Engine left_;
  Engine right_;
};

struct GoalSetResult {
  Direction direction = Direction::Fwd;
  SimKind mode = SimKind::Full;
  Verdict verdict = Verdict::Failed;  // Proved only when every member of G is proved
  bool boundHit = false;              // some member ran into the left step bound
  std::vector<ProofOutcome> outcomes;
  double wallMillis = 0;
  size_t smtQueries = 0;
  size_t proofNodes = 0;
};

// Goal and base sets of a problem for one direction; bwd swaps every formula.
std::vector<SimulationFormula> goalSet(const EquivalenceProblem& p, Direction d);
std::vector<SimulationFormula> baseSet(const EquivalenceProblem& p, Direction d);

// Proves every member of G (goals and circularities) with guard 0.
GoalSetResult proveAll(const EquivalenceProblem& p, Direction d, SimKind mode, const ProverConfig& cfg);

struct EquivalenceResult {
  GoalSetResult fwd;
  GoalSetResult bwd;
  Verdict combined = Verdict::Failed;
};

EquivalenceResult proveEquivalence(const EquivalenceProblem& p, SimKind mode, const ProverConfig& cfg);

std::string explainFailure(const ProofOutcome& o);

struct TreeCheck {
  bool guardDiscipline = true;
  bool partialProgress = true;
  bool stepExhaustive = true;
  std::vector<std::string> problems;
  bool ok() const { return guardDiscipline && partialProgress && stepExhaustive; }
};

// Structural checks of a Proved tree; Step exhaustiveness costs one validity query per Step node.
TreeCheck checkProofTree(const ProofOutcome& o, SimKind mode, Solver& solver);

std::string renderTree(const ProofNode& n, int indent = 0);

}  // namespace lcs

#include "doctest.h"
#include "helpers.hpp"

using namespace lcs;
using namespace lcs::sorts;

namespace {

std::shared_ptr<EquivalenceProblem> fixture(const std::string& file) {
  static DefinitionLibrary lib;
  return lib.loadFile(std::string(LCS_FIXTURE_DIR) + "/" + file).problem;
}

void checkTrees(const GoalSetResult& r) {
  for (auto& o : r.outcomes) {
    if (o.verdict != Verdict::Proved) continue;
    TreeCheck tc = checkProofTree(o, r.mode, test::solver());
    std::string problems;
    for (auto& p : tc.problems) problems += p + "\n";
    INFO(o.goal << "\n" << problems);
    CHECK(tc.ok());
  }
}

}  // namespace

TEST_CASE("f(N) is fully simulated by F(N, 0, 0)") {
  auto p = test::problem("example1");
  GoalSetResult r = proveAll(*p, Direction::Fwd, SimKind::Full, ProverConfig{});
  CHECK((r.verdict == Verdict::Proved));
  CHECK(r.outcomes.size() == 3);
  checkTrees(r);
}

TEST_CASE("F(N, 0, 0) is not shown to fully simulate f(N), and the report names the guard") {
  auto p = test::problem("example1");
  GoalSetResult r = proveAll(*p, Direction::Bwd, SimKind::Full, ProverConfig{});
  CHECK((r.verdict == Verdict::Failed));
  const ProofOutcome& failed = r.outcomes.back();
  REQUIRE((failed.verdict != Verdict::Proved));
  std::string report = explainFailure(failed);
  CHECK(report.find("circularity attempt at depth 0 with guard 0") != std::string::npos);
}

TEST_CASE("IMP2 failures name the stack bound") {
  auto p = test::problem("example2");
  GoalSetResult r = proveAll(*p, Direction::Fwd, SimKind::Full, ProverConfig{});
  CHECK((r.verdict == Verdict::Failed));
  const ProofOutcome* failed = nullptr;
  for (auto& o : r.outcomes)
    if (o.verdict != Verdict::Proved) failed = &o;
  REQUIRE(failed);
  std::string report = explainFailure(*failed);
  CHECK(report.find("len(") != std::string::npos);
  CHECK(report.find("< 10") != std::string::npos);
  CHECK(report.find("countermodel") != std::string::npos);
}

TEST_CASE("loop unswitching is a full equivalence") {
  auto p = test::problem("example5");
  EquivalenceResult r = proveEquivalence(*p, SimKind::Full, ProverConfig{});
  CHECK((r.fwd.verdict == Verdict::Proved));
  CHECK((r.bwd.verdict == Verdict::Proved));
  CHECK((r.combined == Verdict::Proved));
  checkTrees(r.fwd);
  checkTrees(r.bwd);
}

TEST_CASE("proof trees of optimizations pass the structural checks") {
  for (const char* name : {"code_hoisting", "loop_unswitching", "constant_propagation", "loop_peeling"}) {
    auto p = test::problem(name);
    for (Direction d : {Direction::Fwd, Direction::Bwd}) {
      GoalSetResult r = proveAll(*p, d, SimKind::Full, ProverConfig{});
      INFO(name << " " << toString(d));
      CHECK((r.verdict == Verdict::Proved));
      checkTrees(r);
    }
  }
}

TEST_CASE("partial-mode proofs pass the progress check") {
  auto p = test::problem("loop_fusion_c1");
  for (Direction d : {Direction::Fwd, Direction::Bwd}) {
    GoalSetResult r = proveAll(*p, d, SimKind::Partial, ProverConfig{});
    CHECK((r.verdict == Verdict::Proved));
    checkTrees(r);
  }
}

TEST_CASE("wrong transformations are not proved") {
  for (const char* file : {"hoisting-swapped-branches.def", "unrolling-odd-bound.def", "interchange-wrong-reset.def"}) {
    auto p = fixture(file);
    REQUIRE(p);
    EquivalenceResult r = proveEquivalence(*p, SimKind::Full, ProverConfig{});
    INFO(file);
    CHECK((r.combined != Verdict::Proved));
  }
}

TEST_CASE("the base case relates equal results") {
  auto p = test::problem("example1");
  ProverConfig cfg;
  Solver s;
  Prover prover(Sides{p->left.get(), p->right.get()}, s, cfg);
  Term fs = p->goals[0].lhs->args[2];
  test::Scope parse(*p->left);
  parse.var("env", Env());
  Term six = parse("cfg([6], env, fsnil)");
  Term seven = parse("cfg([7], env, fsnil)");
  six = mkApp(p->left->sig, "cfg", {six->args[0], six->args[1], fs});
  seven = mkApp(p->left->sig, "cfg", {seven->args[0], seven->args[1], fs});
  CHECK(s.isValid(prover.subsumption(six, six, baseSet(*p, Direction::Fwd))) == Validity::Valid);
  CHECK(s.isValid(prover.subsumption(six, seven, baseSet(*p, Direction::Fwd))) != Validity::Valid);
}

TEST_CASE("backward goal and base sets swap sides") {
  auto p = test::problem("example4");
  auto fwd = goalSet(*p, Direction::Fwd);
  auto bwd = goalSet(*p, Direction::Bwd);
  REQUIRE(fwd.size() == bwd.size());
  for (size_t i = 0; i < fwd.size(); ++i) {
    CHECK(fwd[i].lhs == bwd[i].rhs);
    CHECK(fwd[i].rhs == bwd[i].lhs);
  }
  auto bf = baseSet(*p, Direction::Fwd), bb = baseSet(*p, Direction::Bwd);
  REQUIRE(bf.size() == bb.size());
  CHECK(bf[0].lhs == bb[0].rhs);
}

TEST_CASE("a tiny step bound yields BoundExceeded") {
  auto p = test::problem("example5");
  ProverConfig cfg;
  cfg.lhsStepBound = 2;
  GoalSetResult r = proveAll(*p, Direction::Fwd, SimKind::Full, cfg);
  CHECK((r.verdict == Verdict::Failed));
  CHECK(r.boundHit);
  CHECK((r.outcomes.front().verdict == Verdict::BoundExceeded));
}

TEST_CASE("proofs are deterministic") {
  auto p = test::problem("loop_unswitching");
  GoalSetResult a = proveAll(*p, Direction::Fwd, SimKind::Full, ProverConfig{});
  GoalSetResult b = proveAll(*p, Direction::Fwd, SimKind::Full, ProverConfig{});
  REQUIRE(a.outcomes.size() == b.outcomes.size());
  for (size_t i = 0; i < a.outcomes.size(); ++i) {
    CHECK((a.outcomes[i].verdict == b.outcomes[i].verdict));
    CHECK(a.outcomes[i].nodes == b.outcomes[i].nodes);
    CHECK(renderTree(a.outcomes[i].root) == renderTree(b.outcomes[i].root));
  }
}

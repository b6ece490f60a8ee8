#include "doctest.h"
#include "helpers.hpp"

using namespace lcs;
using namespace lcs::sorts;

namespace {
Term I() { return mkVar("i", Int()); }
Term N() { return mkVar("N", Int()); }
}  // namespace

TEST_CASE("satisfiability of linear integer constraints") {
  Solver& s = test::solver();
  CHECK(s.isSatisfiable(mkAnd(mkTheory(Theory::Gt, {I(), N()}), mkTheory(Theory::Le, {I(), N()}))).unsat());
  CHECK(s.isSatisfiable(mkTheory(Theory::Le, {mkInt(0L), N()})).sat());
}

TEST_CASE("validity") {
  Solver& s = test::solver();
  Term x = mkVar("x", Int()), y = mkVar("y", Int());
  CHECK(s.isValid(mkEq(x, x)) == Validity::Valid);
  CHECK(s.isValid(mkImplies(mkEq(x, y), mkEq(x, y))) == Validity::Valid);
  CHECK(s.isValid(mkTheory(Theory::Le, {x, y})) == Validity::Invalid);
}

TEST_CASE("models of satisfiable constraints") {
  Solver& s = test::solver();
  Term n = N();
  auto none = s.checkSatWithModel(mkAnd(mkTheory(Theory::Ge, {n, mkInt(0L)}), mkTheory(Theory::Lt, {n, mkInt(0L)})));
  CHECK_FALSE(none.has_value());
  auto some = s.checkSatWithModel(mkTheory(Theory::Ge, {n, mkInt(0L)}));
  REQUIRE(some.has_value());
  REQUIRE(some->count(n) == 1);
  CHECK(some->at(n)->tag == Tag::Int);
  CHECK(some->at(n)->ival >= 0);
}

TEST_CASE("environments are arrays") {
  Solver& s = test::solver();
  Term env = mkVar("env", Env());
  Term upd = mkTheory(Theory::Update, {env, mkId("x"), mkInt(3L)});
  CHECK(s.isValid(mkEq(mkTheory(Theory::Lookup, {upd, mkId("x")}), mkInt(3L))) == Validity::Valid);
  CHECK(s.isValid(mkEq(mkTheory(Theory::Lookup, {upd, mkId("y")}), mkTheory(Theory::Lookup, {env, mkId("y")}))) ==
        Validity::Valid);
}

TEST_CASE("queries never mention constructors") {
  auto imp1 = buildImp1();
  Term skip = mkApp(imp1->sig, "skip", {});
  Term e = mkVar("e", intern("Exp"));
  CHECK_THROWS_AS(encodeQuery(mkEq(e, skip)), QueryPurityError);
  CHECK_NOTHROW(encodeQuery(mkTheory(Theory::Le, {N(), mkInt(3L)})));
}

TEST_CASE("a missing solver is a transport error") {
  SolverConfig cfg;
  cfg.command = "/nonexistent/solver-binary";
  CHECK_THROWS_AS(
      {
        Solver s(cfg);
        s.isSatisfiable(mkTheory(Theory::Le, {N(), mkInt(3L)}));
      },
      SolverTransportError);
}

TEST_CASE("cached unsat answers are reproduced by a second solver session") {
  Solver s;
  s.isSatisfiable(mkAnd(mkTheory(Theory::Gt, {I(), N()}), mkTheory(Theory::Le, {I(), N()})));
  s.isSatisfiable(mkAnd(mkEq(I(), mkInt(1L)), mkEq(I(), mkInt(2L))));
  auto qs = s.unsatQueries();
  REQUIRE(qs.size() >= 2);
  Solver other;
  for (auto& q : qs) CHECK(other.runRaw(q).unsat());
}

TEST_CASE("repeated queries hit the cache") {
  Solver s;
  Term q = mkTheory(Theory::Le, {N(), mkInt(7L)});
  s.isSatisfiable(q);
  size_t before = s.stats().queries;
  s.isSatisfiable(q);
  CHECK(s.stats().queries == before);
  CHECK(s.stats().cacheHits >= 1);
}

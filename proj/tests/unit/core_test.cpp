#include "doctest.h"
#include "helpers.hpp"
#include "lcs/eval.hpp"

using namespace lcs;
using namespace lcs::sorts;

TEST_CASE("terms are hash-consed") {
  CHECK(mkInt(3L) == mkInt(3L));
  CHECK(mkVar("I", Int()) == mkVar("I", Int()));
  CHECK(mkVar("I", Int()) != mkVar("I", Bool()));
  auto imp1 = buildImp1();
  Term a = mkApp(imp1->sig, "plus", {mkInt(1L), mkId("x")});
  Term b = mkApp(imp1->sig, "plus", {mkInt(1L), mkId("x")});
  CHECK(a == b);
  CHECK(a->sort == intern("Exp"));
}

TEST_CASE("ill-sorted applications are rejected") {
  auto imp1 = buildImp1();
  CHECK_THROWS_AS(mkApp(imp1->sig, "assign", {mkInt(1L), mkInt(2L)}), SortError);
  CHECK_THROWS_AS(mkApp(imp1->sig, "plus", {mkInt(1L)}), SortError);
}

TEST_CASE("euclidean division and remainder") {
  CHECK(euclidMod(-7, 3) == 2);
  CHECK(euclidDiv(-7, 3) == -3);
  CHECK(euclidMod(7, -3) == 1);
  CHECK(euclidDiv(7, -3) == -2);
}

TEST_CASE("simplification folds ground arithmetic and environment lookups") {
  Term I = mkVar("I", Int());
  CHECK(simplify(mkTheory(Theory::Add, {mkInt(2L), mkInt(3L)})) == mkInt(5L));
  CHECK(simplify(mkTheory(Theory::Lt, {mkInt(2L), mkInt(3L)}))->isTrue());
  Term env = mkTheory(Theory::Update, {mkTheory(Theory::EmptyEnv, {}), mkId("x"), mkInt(14L)});
  CHECK(simplify(mkTheory(Theory::Lookup, {env, mkId("x")})) == mkInt(14L));
  CHECK(simplify(mkAnd(mkTheory(Theory::Le, {I, I}), mkTrue()))->isTrue());
  CHECK(simplify(mkTheory(Theory::Sub, {mkTheory(Theory::Add, {I, mkInt(1L)}), mkInt(1L)})) == I);
}

TEST_CASE("substitution and fresh renaming") {
  Term I = mkVar("I", Int()), J = mkVar("J", Int());
  Term t = mkTheory(Theory::Add, {I, J});
  Subst s{{I, mkInt(4L)}};
  CHECK(substitute(s, t) == mkTheory(Theory::Add, {mkInt(4L), J}));
  Renamed r = freshRename(t, mkTheory(Theory::Le, {I, J}));
  VarSet vs = freeVariables(r.term);
  CHECK(vs.size() == 2);
  CHECK(vs.count(I) == 0);
  CHECK(vs.count(J) == 0);
  CHECK(substitute(r.renaming, t) == r.term);
}

TEST_CASE("printed goals of every bundled problem parse back to the same term") {
  DefinitionLibrary& lib = DefinitionLibrary::bundled();
  size_t checked = 0;
  for (const std::string& name : lib.problemNames()) {
    auto p = lib.problem(name);
    std::vector<SimulationFormula> fs = p->goals;
    fs.insert(fs.end(), p->circularities.begin(), p->circularities.end());
    fs.insert(fs.end(), p->base.begin(), p->base.end());
    for (auto& f : fs) {
      PrintOptions opt{true, true};
      for (auto [t, lang] : {std::pair{f.lhs, p->left.get()}, std::pair{f.rhs, p->right.get()},
                             std::pair{f.constraint ? f.constraint : mkTrue(), p->left.get()}}) {
        ParseScope scope;
        scope.sig = &lang->sig;
        std::string text = printTerm(t, opt);
        INFO(name << ": " << text);
        CHECK(parseTerm(text, scope) == t);
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("parse errors carry a location") {
  auto imp1 = buildImp1();
  test::Scope parse(*imp1, {"x"});
  try {
    parse("cfg([assign(x, plus(1, ))], emptyEnv, fsnil)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.where.line == 1);
    CHECK(e.where.column > 20);
  }
  CHECK_THROWS(parse("cfg([frobnicate(1)], emptyEnv, fsnil)"));
}

TEST_CASE("list sugar builds the stack") {
  auto imp1 = buildImp1();
  test::Scope parse(*imp1, {"x"});
  Term a = parse("[1, x]");
  Term b = parse("1 ~> x ~> []");
  Term c = mkApp(imp1->sig, "cons",
                 {mkInt(1L), mkApp(imp1->sig, "cons", {mkId("x"), mkApp(imp1->sig, "nil", {})})});
  CHECK(a == b);
  CHECK(a == c);
}

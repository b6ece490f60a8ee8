#include <set>

#include "doctest.h"
#include "helpers.hpp"

using namespace lcs;
using namespace lcs::sorts;

TEST_CASE("every bundled language and problem validates") {
  DefinitionLibrary& lib = DefinitionLibrary::bundled();
  CHECK(lib.hasLanguage("imp1"));
  CHECK(lib.hasLanguage("imp2"));
  for (const std::string& name : lib.languageNames()) {
    INFO(name);
    CHECK(validateLanguage(*lib.language(name)).empty());
  }
  for (const std::string& name : lib.problemNames()) {
    INFO(name);
    CHECK(validateProblem(*lib.problem(name)).empty());
  }
}

TEST_CASE("the bundled languages match the hand-built ones") {
  DefinitionLibrary& lib = DefinitionLibrary::bundled();
  auto a = lib.language("imp1");
  auto b = buildImp1();
  CHECK(a->semantics.rules.size() == b->semantics.rules.size());
  auto c = lib.language("imp2", {{"k", 10}});
  auto d = buildImp2(10);
  CHECK(c->semantics.rules.size() == d->semantics.rules.size());
  CHECK(c->params.at("k") == 10);
}

TEST_CASE("definition errors point at the offending line") {
  DefinitionLibrary lib;
  std::string text =
      "problem broken;\n"
      "uses imp1;\n"
      "id x;\n"
      "goal cfg([assign(x)], emptyEnv, fsnil) ~ cfg([skip], emptyEnv, fsnil);\n";
  try {
    lib.load("broken.def", text);
    FAIL("expected a definition error");
  } catch (const DefinitionError& e) {
    CHECK(e.file == "broken.def");
    CHECK(e.where.line == 4);
  }
  CHECK_THROWS_AS(lib.load("unknown.def", "problem p;\nuses imp7;\n"), DefinitionError);
}

TEST_CASE("a problem can be loaded from text and proved") {
  DefinitionLibrary lib;
  std::string text =
      "problem swap_assignments;\n"
      "uses imp1;\n"
      "id x y;\n"
      "var env env1 env2 : Env;\n"
      "var fs : Funcs;\n"
      "goal cfg([seq(assign(x, 1), assign(y, 2))], env, fs) ~ cfg([seq(assign(y, 2), assign(x, 1))], env, fs);\n"
      "base cfg([], env1, fs) ~ cfg([], env2, fs) if lookup(env1, x) = lookup(env2, x) && lookup(env1, y) = "
      "lookup(env2, y);\n"
      "query equiv full;\n";
  auto loaded = lib.load("swap.def", text);
  REQUIRE(loaded.problem);
  CHECK(loaded.problem->name == "swap_assignments");
  CHECK((proveEquivalence(*loaded.problem, SimKind::Full, ProverConfig{}).combined == Verdict::Proved));
}

TEST_CASE("expected verdicts cover the corpus") {
  DefinitionLibrary& lib = DefinitionLibrary::bundled();
  auto expected = expectedVerdicts();
  std::set<std::string> named;
  for (auto& e : expected) {
    INFO(e.problem);
    CHECK(lib.hasProblem(e.problem));
    CHECK((e.verdict == "Proved" || e.verdict == "Failed"));
    named.insert(e.problem);
  }
  for (auto& n : corpusProblems()) {
    auto p = lib.problem(n);
    bool proves = std::any_of(p->queries.begin(), p->queries.end(),
                              [](const Query& q) { return q.kind != Query::Kind::Run; });
    if (proves) CHECK(named.count(n) == 1);
  }
  std::set<std::string> rows;
  for (auto& n : corpusProblems()) {
    auto p = lib.problem(n);
    if (named.count(n) && p->row.rfind("example", 0) != 0) rows.insert(p->row);
  }
  CHECK(rows.size() == 19);
  CHECK(lib.problem("loop_interchange")->attributes.count("bounded") == 1);
  CHECK(lib.problem("loop_flattening")->attributes.count("bounded") == 1);
  CHECK(lib.problem("loop_tiling_02")->attributes.count("bounded") == 1);
}

TEST_CASE("schema constants become uninterpreted functions of their read sets") {
  auto p = test::problem("code_hoisting");
  REQUIRE(p->schema.size() == 4);
  const Signature& sig = p->left->sig;
  const FunctionSymbol* b1 = sig.find("iota_B1");
  REQUIRE(b1);
  CHECK(b1->kind == SymKind::Builtin);
  CHECK(b1->ranks[0].result == Bool());
  CHECK(b1->ranks[0].args.size() == 1);
  const FunctionSymbol* s2 = sig.find("iota_S2_Z");
  REQUIRE(s2);
  CHECK(s2->ranks[0].result == Int());
  CHECK(s2->ranks[0].args.size() == 3);
  CHECK_FALSE(sig.find("iota_S2_Y"));

  Engine eng(*p->left, &test::solver());
  test::Scope parse(*p->left, {"X", "Y", "Z"});
  parse.var("env", Env()).var("fs", intern("Funcs"));
  DerivativeSet ds = eng.derivatives(parse("cfg([S1], env, fs)"), mkTrue());
  REQUIRE(ds.items.size() == 1);
  Term expected = parse("cfg([], update(env, Y, iota_S1_Y(lookup(env, X), lookup(env, Y))), fs)");
  CHECK(test::solver().isValid(mkImplies(ds.items[0].constraint, mkEq(ds.items[0].term->args[1], expected->args[1]))) ==
        Validity::Valid);
  CHECK(ds.items[0].term->args[0] == expected->args[0]);
}

TEST_CASE("a schema statement leaves variables outside its write set untouched") {
  auto p = test::problem("code_hoisting");
  Engine eng(*p->left, &test::solver());
  test::Scope parse(*p->left, {"X", "Y", "Z"});
  parse.var("env", Env()).var("fs", intern("Funcs"));
  DerivativeSet ds = eng.derivatives(parse("cfg([S2], env, fs)"), mkTrue());
  REQUIRE(ds.items.size() == 1);
  Term env2 = ds.items[0].term->args[1];
  CHECK(test::solver().isValid(mkAnd(mkEq(parse("lookup(env, X)"), mkTheory(Theory::Lookup, {env2, mkId("X")})),
                                     mkEq(parse("lookup(env, Y)"), mkTheory(Theory::Lookup, {env2, mkId("Y")})))) ==
        Validity::Valid);
  CHECK(test::solver().isValid(mkEq(parse("lookup(env, Z)"), mkTheory(Theory::Lookup, {env2, mkId("Z")}))) ==
        Validity::Invalid);
}

TEST_CASE("a schema condition evaluates to its uninterpreted predicate") {
  auto p = test::problem("code_hoisting");
  Engine eng(*p->left, &test::solver());
  test::Scope parse(*p->left, {"X", "Y", "Z"});
  parse.var("env", Env()).var("fs", intern("Funcs"));
  DerivativeSet ds = eng.derivatives(parse("cfg([B1], env, fs)"), mkTrue());
  REQUIRE(ds.items.size() == 1);
  CHECK(ds.items[0].term == parse("cfg([iota_B1(lookup(env, X))], env, fs)"));
}

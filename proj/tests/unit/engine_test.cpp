#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lcs/eval.hpp"
#include "properties.hpp"

using namespace lcs;
using namespace lcs::sorts;

namespace {

Term lookupIn(Term env, const char* id) { return simplify(mkTheory(Theory::Lookup, {env, mkId(id)})); }

size_t stackLength(Term cfg) {
  size_t n = 0;
  for (Term es = cfg->args[0]; es->args.size() == 2; es = es->args[1]) ++n;
  return n;
}

}  // namespace

TEST_CASE("golden trace: x := x + 2 from x = 12") {
  auto p = test::problem("intro");
  size_t steps = 0;
  Term end = test::runQuery(*p, 0, &steps);
  auto imp1 = buildImp1();
  test::Scope parse(*imp1, {"x"});
  CHECK(end == parse("cfg([], update(emptyEnv, x, 14), fsnil)"));
  CHECK(steps + 1 == 8);
}

TEST_CASE("golden trace: x := f(10) with f(y) = if y > 5 then y + x else 0") {
  auto p = test::problem("call_trace");
  size_t steps = 0;
  Term end = test::runQuery(*p, 0, &steps);
  REQUIRE(end->args.size() == 3);
  CHECK(end->args[0] == mkApp(p->left->sig, "nil", {}));
  CHECK(lookupIn(end->args[1], "x") == mkInt(22L));
  CHECK(steps == 15);

  Term start = nullptr;
  for (auto& q : p->queries)
    if (q.kind == Query::Kind::Run) start = q.term;
  REQUIRE(start);
  std::vector<Term> tr = test::trace(*p->left, start);
  test::Scope parse(*p->left, {"x", "y", "f"});
  size_t at = 0;
  for (const char* stack : {"[call(app(f, 10)), assign(x, hole)]", "[ite(gt(10, 5), plus(10, x), 0), assign(x, hole)]",
                            "[gt(10, 5), ite(hole, plus(10, x), 0), assign(x, hole)]",
                            "[12, plus(10, hole), assign(x, hole)]", "[22, assign(x, hole)]", "[assign(x, 22)]"}) {
    Term want = parse(stack);
    INFO(stack);
    while (at < tr.size() && tr[at]->args[0] != want) ++at;
    CHECK(at < tr.size());
  }
}

TEST_CASE("golden traces: f(3) and F(3, 0, 0) both end in [6]") {
  auto p = test::problem("example1");
  for (size_t q : {0u, 1u}) {
    Term end = test::runQuery(*p, q);
    test::Scope parse(*p->left);
    CHECK(end->args[0] == parse("[6]"));
    Engine eng(*p->left, nullptr);
    CHECK_FALSE(eng.stepConcrete(end).has_value());
  }
}

TEST_CASE("IMP2 with k = 10 gets stuck on f(12) with a full stack") {
  auto p = test::problem("example2");
  Term end = test::runQuery(*p, 0);
  CHECK(stackLength(end) == 11);
  Engine eng(*p->left, nullptr);
  CHECK_FALSE(eng.stepConcrete(end).has_value());
  auto imp1 = test::problem("example1");
  Term ok = test::runToEnd(*imp1->left, p->queries.back().term);
  CHECK(stackLength(ok) == 1);
}

TEST_CASE("the stack bound follows the language parameter") {
  DefinitionLibrary& lib = DefinitionLibrary::bundled();
  auto small = lib.language("imp2", {{"k", 3}});
  test::Scope parse(*small, {"f", "x"});
  Term fs = parse("fsbind(f, lam(x, ite(leq(0, x), plus(x, call(app(f, minus(x, 1)))), 0)), fsnil)");
  auto start = [&](long n) {
    return mkApp(small->sig, "cfg",
                 {parse("[call(app(f, " + std::to_string(n) + "))]"), mkTheory(Theory::EmptyEnv, {}), fs});
  };
  CHECK(stackLength(test::runToEnd(*small, start(1))) == 1);
  CHECK(stackLength(test::runToEnd(*small, start(5))) == 4);
}

TEST_CASE("axiomatized symbols normalize") {
  auto imp1 = buildImp1();
  Engine eng(*imp1, nullptr);
  test::Scope parse(*imp1, {"x", "y"});
  CHECK(eng.normalize(parse("val(7)"))->isTrue());
  CHECK(eng.normalize(parse("val(plus(1, 2))"))->isFalse());
  CHECK(eng.normalize(parse("subst(y, 10, ite(gt(y, 5), plus(y, x), 0))")) ==
        parse("ite(gt(10, 5), plus(10, x), 0)"));
  CHECK(eng.normalize(parse("len([1, 2, 3])")) == mkInt(3L));
  auto p = test::problem("example1");
  Engine eng1(*p->left, nullptr);
  test::Scope parse1(*p->left);
  CHECK(eng1.normalize(parse1("reduce(4, 3)")) == parse1("[]"));
  CHECK(eng1.normalize(parse1("reduce(3, 3)")) == parse1("[plus(3, hole)]"));
}

TEST_CASE("subst agrees with first-order substitution on generated expressions") {
  auto imp1 = buildImp1();
  const Signature& sig = imp1->sig;
  Engine eng(*imp1, nullptr);
  std::mt19937 rng(5);
  const char* ids[] = {"x", "y", "z"};
  std::function<Term(int)> gen = [&](int depth) -> Term {
    int c = depth <= 0 ? static_cast<int>(rng() % 2) : static_cast<int>(rng() % 9);
    switch (c) {
      case 0: return mkInt(static_cast<long>(rng() % 7) - 3);
      case 1: return mkId(ids[rng() % 3]);
      case 2: return mkApp(sig, "plus", {gen(depth - 1), gen(depth - 1)});
      case 3: return mkApp(sig, "minus", {gen(depth - 1), gen(depth - 1)});
      case 4: return mkApp(sig, "leq", {gen(depth - 1), gen(depth - 1)});
      case 5: return mkApp(sig, "not", {gen(depth - 1)});
      case 6: return mkApp(sig, "ite", {gen(depth - 1), gen(depth - 1), gen(depth - 1)});
      case 7: return mkApp(sig, "assign", {mkId(ids[rng() % 3]), gen(depth - 1)});
      default: return mkApp(sig, "seq", {gen(depth - 1), mkApp(sig, "skip", {})});
    }
  };
  std::function<Term(Term, Term, Term)> direct = [&](Term x, Term v, Term t) -> Term {
    if (t == x) return v;
    if (t->tag != Tag::App) return t;
    std::vector<Term> args;
    for (size_t i = 0; i < t->args.size(); ++i)
      args.push_back(t->str() == "assign" && i == 0 ? t->args[i] : direct(x, v, t->args[i]));
    return rebuild(t, std::move(args));
  };
  for (int n = 0; n < 200; ++n) {
    Term e = gen(4);
    Term x = mkId(ids[rng() % 3]);
    Term v = mkInt(static_cast<long>(rng() % 11) - 5);
    Term viaAxioms = eng.normalize(mkApp(sig, "subst", {x, v, e}));
    INFO(show(e));
    CHECK(viaAxioms == eng.normalize(direct(x, v, e)));
  }
}

TEST_CASE("IMP1 and IMP2 are top-most; a configuration argument breaks it") {
  auto imp1 = buildImp1();
  auto imp2 = buildImp2(10);
  CHECK(checkTopMost(imp1->semantics, imp1->sig).ok);
  CHECK(checkTopMost(imp2->semantics, imp2->sig).ok);
  LanguageDefinition wrapped = *imp1;
  wrapped.sig.addSymbol("wrap", SymKind::Constructor, Rank{{intern("Cfg")}, intern("Cfg")});
  TopMostVerdict v = checkTopMost(wrapped.semantics, wrapped.sig);
  CHECK_FALSE(v.ok);
  REQUIRE(v.offending.size() == 1);
  CHECK(v.offending[0].find("wrap") != std::string::npos);
}

TEST_CASE("concrete stepping is deterministic on the golden programs") {
  for (const char* name : {"intro", "call_trace", "example1", "example2"}) {
    auto p = test::problem(name);
    for (auto& q : p->queries)
      if (q.kind == Query::Kind::Run) CHECK_NOTHROW(test::runToEnd(*p->left, q.term));
  }
}

TEST_CASE("derivatives of a conditional split on the condition") {
  auto imp1 = buildImp1();
  Engine eng(*imp1, &test::solver());
  test::Scope parse(*imp1);
  parse.var("B", Bool()).var("I", Int()).var("env", Env());
  Term t = parse("cfg([ite(B, skip, skip)], env, fsnil)");
  DerivativeSet ds = eng.derivatives(t, mkTrue());
  CHECK(ds.items.size() == 2);
  CHECK_FALSE(ds.incomplete);
  Term B = parse("B");
  bool sawTrue = false, sawFalse = false;
  for (auto& d : ds.items) {
    if (test::solver().isValid(mkImplies(d.constraint, B)) == Validity::Valid) sawTrue = true;
    if (test::solver().isValid(mkImplies(d.constraint, mkNot(B))) == Validity::Valid) sawFalse = true;
  }
  CHECK(sawTrue);
  CHECK(sawFalse);
  CHECK(eng.derivatives(parse("cfg([I], env, fsnil)"), mkTrue()).items.empty());
  CHECK(eng.derivativesBounded(t, mkTrue(), 0, 0).size() == 1);
  CHECK(eng.derivativesBounded(t, mkTrue(), 0, 2).size() == 3);
}

TEST_CASE("a call has a single successor") {
  auto p = test::problem("example1");
  Engine eng(*p->left, &test::solver());
  test::Scope parse(*p->left, {"f", "x"});
  parse.var("N", Int()).var("env", Env());
  Term t = parse("cfg([call(app(f, N))], env, fsbind(f, lam(x, x), fsnil))");
  DerivativeSet ds = eng.derivatives(t, parse("0 <= N"));
  CHECK(ds.items.size() == 1);
}

TEST_CASE("unification modulo builtins") {
  auto imp1 = buildImp1();
  test::Scope parse(*imp1);
  parse.var("i1", Int()).var("i2", Int()).var("y", Int()).var("a", Int()).var("b", Int());
  parse.var("e", intern("Exp"));
  UnifyResult r = umbUnify(parse("plus(i1, i2)"), parse("plus(3, y)"));
  REQUIRE(r.unifiers.size() == 1);
  const Unifier& u = r.unifiers[0];
  Term l = simplify(substitute(u.subst, parse("plus(i1, i2)")));
  Term rr = simplify(substitute(u.subst, parse("plus(3, y)")));
  CHECK(test::solver().isValid(mkImplies(u.constraint, mkEq(l->args[0], rr->args[0]))) == Validity::Valid);
  CHECK(l->args[1] == rr->args[1]);
  CHECK(umbUnify(parse("skip"), parse("plus(a, b)")).unifiers.empty());
  UnifyResult sub = umbUnify(parse("e"), parse("5"));
  REQUIRE(sub.unifiers.size() == 1);
  CHECK(sub.unifiers[0].constraint->isTrue());
  CHECK(sub.unifiers[0].subst.at(parse("e")) == mkInt(5L));
}

TEST_CASE("unification modulo axiomatized symbols unrolls reduce") {
  auto p = test::problem("example1");
  test::Scope parse(*p->left);
  parse.var("I", Int()).var("N", Int()).var("env", Env()).var("env2", Env());
  parse.var("fs", intern("Funcs")).var("fs2", intern("Funcs"));
  UnifyResult r = umasUnify(parse("cfg([], env, fs)"), parse("cfg(reduce(I, N), env2, fs2)"), p->left->axioms, 4);
  bool found = false;
  for (auto& u : r.unifiers) {
    Term e1 = substitute(u.subst, parse("env")), e2 = substitute(u.subst, parse("env2"));
    if (e1 == e2 && test::solver().isValid(mkImplies(u.constraint, parse("I > N"))) == Validity::Valid) found = true;
  }
  CHECK(found);
  Term t = parse("cfg([I], env, fs)");
  UnifyResult self = umasUnify(t, t, p->left->axioms, 4);
  REQUIRE_FALSE(self.unifiers.empty());
  CHECK(self.unifiers[0].constraint->isTrue());
}

TEST_CASE("purification abstracts builtin subterms under constructors") {
  auto imp1 = buildImp1();
  test::Scope parse(*imp1);
  parse.var("I", Int()).var("J", Int()).var("es", intern("Stack")).var("env", Env());
  Term t = parse("cfg(I + J ~> es, env, fsnil)");
  Purified p = purify(t);
  REQUIRE(p.fresh.size() == 1);
  CHECK(p.term != t);
  CHECK(p.constraint == mkEq(p.fresh[0], parse("I + J")));
  CHECK(substitute(Subst{{p.fresh[0], parse("I + J")}}, p.term) == t);
  Term pure = parse("cfg([skip], env, fsnil)");
  CHECK(purify(pure).term == pure);
  CHECK(purify(pure).constraint->isTrue());
}

TEST_CASE("derivatives agree with concrete successors on the fixture corpus") {
  REQUIRE(props::oracleFixtures().size() == 20);
  props::Report r = props::derivativeOracle(*buildImp1(), test::solver(), props::oracleFixtures(), -2, 3);
  INFO(test::describe(r));
  CHECK(r.ok());
  CHECK(r.checks > 500);
}

TEST_CASE("unifiers are sound on sampled valuations") {
  props::Report r = props::unifierSoundness(props::unificationCorpus(), test::solver(), 100, 4, 7);
  INFO(test::describe(r));
  CHECK(r.ok());
  CHECK(r.checks >= 100 * 50);
}

TEST_CASE("IMP2 stack never exceeds k + 1 entries") {
  props::Report r = props::stackBound(50, 10, 11);
  INFO(test::describe(r));
  CHECK(r.ok());
  CHECK(r.skipped > 0);
}

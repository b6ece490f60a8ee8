#include <set>

#include "lcs/langdef.hpp"

namespace lcs {

namespace {

void collectVars(const EquivalenceProblem& p, VarSet& out) {
  for (auto* set : {&p.goals, &p.circularities, &p.base})
    for (auto& f : *set) {
      freeVariables(f.lhs, out);
      freeVariables(f.rhs, out);
      freeVariables(f.constraint, out);
    }
}

void addRules(LanguageDefinition& lang, const ReadWriteSpec& spec) {
  Signature& sig = lang.sig;
  SortId exp = intern("Exp");
  if (!sig.hasSort(exp) || !sig.find("cfg") || !sig.find("val"))
    throw SortError("schema constants need the IMP configuration signature");
  sig.addSymbol(spec.name, SymKind::Constructor, Rank{{}, exp});
  Term c = mkApp(sig, spec.name, {});
  lang.axioms.add(RewriteRule{"val-" + spec.name, mkApp(sig, "val", {c}), mkFalse(), nullptr});

  Term es = mkVar("es", intern("Stack"));
  Term env = mkVar("env", sorts::Env());
  Term fs = mkVar("fs", intern("Funcs"));
  declareSchemaFunctions(sig, spec);
  std::vector<Term> reads;
  for (auto& x : spec.reads) reads.push_back(mkTheory(Theory::Lookup, {env, mkId(x)}));
  Term lhs = mkApp(sig, "cfg", {mkApp(sig, "cons", {c, es}), env, fs});
  Term rhs;
  if (spec.role == SchemaRole::Statement) {
    Term out = env;
    for (auto& y : spec.writes) {
      std::string iota = "iota_" + spec.name + "_" + y;
      out = mkTheory(Theory::Update, {out, mkId(y), mkApp(sig, iota, reads)});
    }
    rhs = mkApp(sig, "cfg", {es, out, fs});
  } else {
    std::string iota = "iota_" + spec.name;
    rhs = mkApp(sig, "cfg", {mkApp(sig, "cons", {mkApp(sig, iota, reads), es}), env, fs});
  }
  lang.semantics.rules.push_back(RewriteRule{"schema-" + spec.name, lhs, rhs, nullptr});
}

}  // namespace

void declareSchemaFunctions(Signature& sig, const ReadWriteSpec& spec) {
  std::vector<SortId> argSorts(spec.reads.size(), sorts::Int());
  if (spec.role == SchemaRole::Statement) {
    for (auto& y : spec.writes) sig.addSymbol("iota_" + spec.name + "_" + y, SymKind::Builtin, Rank{argSorts, sorts::Int()});
  } else {
    SortId result = spec.role == SchemaRole::Condition ? sorts::Bool() : sorts::Int();
    sig.addSymbol("iota_" + spec.name, SymKind::Builtin, Rank{argSorts, result});
  }
}

void abstractSchema(EquivalenceProblem& p) {
  VarSet vars;
  collectVars(p, vars);
  std::set<std::string> specified;
  for (auto& s : p.schema) {
    if (!specified.insert(s.name).second) throw SortError("duplicate read/write spec for " + s.name);
  }
  SortId exp = intern("Exp");
  for (Term v : vars)
    if (v->sort == exp && !specified.count(v->str()))
      throw SortError("structural variable " + v->str() + " has no read/write spec");
  if (p.schema.empty()) return;

  std::vector<LanguageDefinition*> langs{p.left.get()};
  if (p.right != p.left) langs.push_back(p.right.get());
  for (auto* l : langs)
    for (auto& spec : p.schema) addRules(*l, spec);

  Subst sigma;
  for (auto& spec : p.schema) {
    Term c = mkApp(p.left->sig, spec.name, {});
    for (Term v : vars)
      if (v->str() == spec.name) {
        if (v->sort != exp) throw SortError("structural variable " + spec.name + " must have sort Exp");
        sigma[v] = c;
      }
  }
  for (auto* set : {&p.goals, &p.circularities, &p.base})
    for (auto& f : *set) {
      f.lhs = substitute(sigma, f.lhs);
      f.rhs = substitute(sigma, f.rhs);
      f.constraint = substitute(sigma, f.constraint);
    }
  for (auto& q : p.queries)
    if (q.term) q.term = substitute(sigma, q.term);
}

}  // namespace lcs

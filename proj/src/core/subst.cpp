#include "lcs/subst.hpp"

#include <algorithm>

#include "lcs/eval.hpp"
#include "lcs/syntax.hpp"

namespace lcs {

Term rebuild(Term t, std::vector<Term> args) {
  if (args == t->args) return t;
  if (t->tag == Tag::Quant) {
    Term body = args.back();
    args.pop_back();
    return mkQuant(t->exists, std::move(args), body);
  }
  SortId sort = t->sort;
  if (t->kind != SymKind::Builtin || t->theory == Theory::Uninterpreted) {
    const Signature& g = globalSignature();
    if (const FunctionSymbol* f = g.find(t->name)) {
      std::vector<SortId> argSorts;
      for (Term a : args) argSorts.push_back(a->sort);
      if (auto r = g.resultSort(*f, argSorts)) sort = *r;
    }
  }
  return mkAppRaw(t->name, t->kind, t->theory, sort, std::move(args));
}

namespace {

Term substituteRec(const Subst& s, Term t, std::unordered_map<Term, Term>& memo) {
  if (!(t->flags & kHasVar)) return t;
  if (t->tag == Tag::Var) {
    auto it = s.find(t);
    return it == s.end() ? t : it->second;
  }
  auto m = memo.find(t);
  if (m != memo.end()) return m->second;
  Term out;
  if (t->tag == Tag::Quant) {
    Subst inner = s;
    for (size_t i = 0; i + 1 < t->args.size(); ++i) inner.erase(t->args[i]);
    std::unordered_map<Term, Term> innerMemo;
    std::vector<Term> args(t->args.begin(), t->args.end() - 1);
    args.push_back(substituteRec(inner, t->body(), innerMemo));
    out = rebuild(t, std::move(args));
  } else {
    std::vector<Term> args;
    args.reserve(t->args.size());
    for (Term a : t->args) args.push_back(substituteRec(s, a, memo));
    out = rebuild(t, std::move(args));
  }
  memo.emplace(t, out);
  return out;
}

void freeRec(Term t, VarSet& out, std::vector<Term>& bound) {
  if (!(t->flags & kHasVar)) return;
  if (t->tag == Tag::Var) {
    if (std::find(bound.begin(), bound.end(), t) == bound.end()) out.insert(t);
    return;
  }
  if (t->tag == Tag::Quant) {
    size_t mark = bound.size();
    for (size_t i = 0; i + 1 < t->args.size(); ++i) bound.push_back(t->args[i]);
    freeRec(t->body(), out, bound);
    bound.resize(mark);
    return;
  }
  for (Term a : t->args) freeRec(a, out, bound);
}

}  // namespace

Term substitute(const Subst& s, Term t) {
  if (s.empty()) return t;
  std::unordered_map<Term, Term> memo;
  return substituteRec(s, t, memo);
}

Subst compose(const Subst& outer, const Subst& inner) {
  Subst out;
  for (auto& [x, t] : inner) out[x] = substitute(outer, t);
  for (auto& [x, t] : outer)
    if (!out.count(x)) out[x] = t;
  return out;
}

VarSet freeVariables(Term t) {
  VarSet out;
  freeVariables(t, out);
  return out;
}

void freeVariables(Term t, VarSet& out) {
  std::vector<Term> bound;
  freeRec(t, out, bound);
}

bool occurs(Term var, Term t) {
  if (!(t->flags & kHasVar)) return false;
  if (t == var) return true;
  for (Term a : t->args)
    if (occurs(var, a)) return true;
  return false;
}

Subst freshRenaming(const VarSet& vars) {
  Subst r;
  for (Term v : vars) r[v] = mkVar(freshName(v->name), v->sort);
  return r;
}

Renamed freshRename(Term t, Term phi, const VarSet& avoid) {
  (void)avoid;  // fresh names never collide with any existing variable
  VarSet vars = freeVariables(t);
  if (phi) freeVariables(phi, vars);
  Subst r = freshRenaming(vars);
  return Renamed{substitute(r, t), phi ? substitute(r, phi) : nullptr, r};
}

SortId sortOf(Term t) { return t->sort; }

namespace {

void checkRec(const Signature& sig, Term t, const std::string& path) {
  if (t->tag != Tag::App) {
    if (t->tag == Tag::Quant) checkRec(sig, t->body(), path + ".body");
    return;
  }
  for (size_t i = 0; i < t->args.size(); ++i) checkRec(sig, t->args[i], path + "." + std::to_string(i + 1));
  const FunctionSymbol* f = sig.find(t->name);
  if (!f) throw SortError("unknown symbol " + t->str() + " at position " + path);
  std::vector<SortId> argSorts;
  for (Term a : t->args) argSorts.push_back(a->sort);
  if (!sig.resultSort(*f, argSorts))
    throw SortError("ill-sorted term " + show(t) + " at position " + path);
}

}  // namespace

void checkSorts(const Signature& sig, Term t) { checkRec(sig, t, "root"); }

Term mkExists(const std::vector<Term>& vars, Term body) {
  std::vector<Term> keep;
  VarSet fv = freeVariables(body);
  for (Term v : vars)
    if (fv.count(v) && std::find(keep.begin(), keep.end(), v) == keep.end()) keep.push_back(v);
  bool progress = true;
  while (progress && !keep.empty()) {
    progress = false;
    for (Term c : conjuncts(body)) {
      if (!isTheory(c, Theory::Eq)) continue;
      for (int side = 0; side < 2 && !progress; ++side) {
        Term x = c->args[side], rhs = c->args[1 - side];
        auto it = std::find(keep.begin(), keep.end(), x);
        if (it == keep.end() || occurs(x, rhs) || !isBuiltinSort(x->sort)) continue;
        body = simplify(substitute(Subst{{x, rhs}}, body));
        keep.erase(it);
        progress = true;
      }
      if (progress) break;
    }
  }
  if (body->tag == Tag::Bool || keep.empty()) return body;
  VarSet fv2 = freeVariables(body);
  std::vector<Term> still;
  for (Term v : keep)
    if (fv2.count(v)) still.push_back(v);
  return mkQuant(true, still, body);
}

}  // namespace lcs

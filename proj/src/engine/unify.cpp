#include <algorithm>

#include "lcs/engine.hpp"
#include "lcs/eval.hpp"

namespace lcs {

namespace {

struct State {
  Subst sigma;
  std::vector<std::pair<Term, Term>> todo;
  std::vector<Term> conds;
  std::vector<Term> fresh;
  Bindable extra;
  int unrolls = 0;
};

struct Ctx {
  const Bindable& bindable;
  const UnifyOptions& opt;
  UnifyResult& out;
};

bool leqSort(SortId a, SortId b) { return globalSignature().leq(a, b); }

bool isAxiomatized(Term t) { return t->tag == Tag::App && t->kind == SymKind::Axiomatized; }

class Solver_ {
 public:
  explicit Solver_(Ctx& ctx) : ctx_(ctx) {}

  void solve(State st) {
    while (!st.todo.empty()) {
      auto [a, b] = st.todo.back();
      st.todo.pop_back();
      a = walk(st, a);
      b = walk(st, b);
      if (a == b) continue;
      bool av = isBindableVar(st, a), bv = isBindableVar(st, b);
      if (av && bv) {
        if (st.extra.count(a) && !st.extra.count(b) && leqSort(b->sort, a->sort)) {
          bind(st, a, b);
        } else if (st.extra.count(b) && !st.extra.count(a) && leqSort(a->sort, b->sort)) {
          bind(st, b, a);
        } else if (leqSort(b->sort, a->sort)) {
          bind(st, a, b);
        } else if (leqSort(a->sort, b->sort)) {
          bind(st, b, a);
        } else {
          return;
        }
        continue;
      }
      if (av || bv) {
        Term x = av ? a : b, u = av ? b : a;
        Term full = substitute(st.sigma, u);
        if (full == x) continue;
        if (leqSort(full->sort, x->sort)) {
          if (occurs(x, full)) {
            if (!isBuiltinSort(x->sort)) return;
            if (!addEquation(st, x, full)) return;
            continue;
          }
          bind(st, x, full);
          continue;
        }
        if (isAxiomatized(full)) {
          unroll(std::move(st), full, x);
          return;
        }
        if (full->isVar() && !isBuiltinSort(full->sort)) ctx_.out.incomplete = true;
        return;
      }
      if (isAxiomatized(a) && isAxiomatized(b) && a->name == b->name && a->args.size() == b->args.size()) {
        for (size_t i = a->args.size(); i-- > 0;) st.todo.emplace_back(a->args[i], b->args[i]);
        continue;
      }
      bool ab = isBuiltinSort(a->sort), bb = isBuiltinSort(b->sort);
      if (ab || bb) {
        if (ab && bb) {
          if (a->sort != b->sort) return;
          if (!addEquation(st, a, b)) return;
          continue;
        }
        Term other = ab ? b : a;
        if (isAxiomatized(other)) {
          unroll(std::move(st), other, ab ? a : b);
          return;
        }
        if (other->isVar()) ctx_.out.incomplete = true;
        return;
      }
      if (a->isVar() || b->isVar()) {
        Term other = a->isVar() ? b : a;
        if (isAxiomatized(other)) {
          unroll(std::move(st), other, a->isVar() ? a : b);
          return;
        }
        ctx_.out.incomplete = true;
        return;
      }
      if (a->tag == Tag::App && b->tag == Tag::App && a->name == b->name && a->kind == b->kind &&
          a->args.size() == b->args.size() && a->kind != SymKind::Builtin) {
        for (size_t i = a->args.size(); i-- > 0;) st.todo.emplace_back(a->args[i], b->args[i]);
        continue;
      }
      if (isAxiomatized(a)) {
        unroll(std::move(st), a, b);
        return;
      }
      if (isAxiomatized(b)) {
        unroll(std::move(st), b, a);
        return;
      }
      return;
    }
    finish(st);
  }

 private:
  bool isBindableVar(const State& st, Term t) const {
    return t->isVar() && (ctx_.bindable.count(t) || st.extra.count(t)) && !st.sigma.count(t);
  }

  Term walk(const State& st, Term t) const {
    while (t->isVar()) {
      auto it = st.sigma.find(t);
      if (it == st.sigma.end()) break;
      t = it->second;
    }
    return t;
  }

  void bind(State& st, Term x, Term u) {
    u = substitute(st.sigma, u);
    Subst one{{x, u}};
    for (auto& [k, v] : st.sigma) v = substitute(one, v);
    st.sigma[x] = u;
  }

  bool addEquation(State& st, Term a, Term b) {
    Term eq = simplify(mkEq(substitute(st.sigma, a), substitute(st.sigma, b)));
    if (eq->isFalse()) return false;
    st.conds.push_back(eq);
    return true;
  }

  void unroll(State st, Term u, Term other) {
    const std::vector<RewriteRule>* eqs = ctx_.opt.axioms ? ctx_.opt.axioms->forSymbol(u->name) : nullptr;
    if (!eqs || eqs->empty() || st.unrolls >= ctx_.opt.depth) {
      ctx_.out.incomplete = true;
      return;
    }
    for (const RewriteRule& eq : *eqs) {
      State s2 = st;
      ++s2.unrolls;
      VarSet vars = freeVariables(eq.lhs);
      freeVariables(eq.rhs, vars);
      if (eq.cond) freeVariables(eq.cond, vars);
      Subst ren = freshRenaming(vars);
      for (auto& [from, to] : ren) {
        s2.extra.insert(to);
        s2.fresh.push_back(to);
      }
      s2.todo.emplace_back(substitute(ren, eq.rhs), other);
      s2.todo.emplace_back(u, substitute(ren, eq.lhs));
      if (eq.cond) s2.conds.push_back(substitute(ren, eq.cond));
      solve(std::move(s2));
    }
  }

  void finish(const State& st) {
    Unifier u;
    std::vector<Term> cs;
    for (Term c : st.conds) cs.push_back(substitute(st.sigma, c));
    u.constraint = simplify(mkAnd(cs));
    if (u.constraint->isFalse()) return;
    for (auto& [x, t] : st.sigma)
      if (ctx_.bindable.count(x)) u.subst[x] = t;
    for (Term f : st.fresh)
      if (!st.sigma.count(f)) u.fresh.push_back(f);
    ctx_.out.unifiers.push_back(std::move(u));
  }

  Ctx& ctx_;
};

Bindable allVars(Term a, Term b) {
  VarSet vs = freeVariables(a);
  freeVariables(b, vs);
  return Bindable(vs.begin(), vs.end());
}

}  // namespace

UnifyResult unify(Term a, Term b, const Bindable& bindable, const UnifyOptions& opt) {
  UnifyResult out;
  Ctx ctx{bindable, opt, out};
  State st;
  st.todo.emplace_back(a, b);
  Solver_(ctx).solve(std::move(st));
  return out;
}

UnifyResult umbUnify(Term t1, Term t2) { return unify(t1, t2, allVars(t1, t2), UnifyOptions{}); }

UnifyResult umasUnify(Term t1, Term t2, const AxiomSet& axioms, int depth) {
  return unify(t1, t2, allVars(t1, t2), UnifyOptions{&axioms, depth});
}

Purified purify(Term t) {
  Purified p{t, mkTrue(), {}};
  std::vector<Term> eqs;
  std::unordered_map<Term, Term> seen;
  std::function<Term(Term, bool)> go = [&](Term u, bool underConstructor) -> Term {
    if (u->tag != Tag::App) return u;
    if (underConstructor && isBuiltinSort(u->sort) && u->kind == SymKind::Builtin) {
      auto it = seen.find(u);
      if (it != seen.end()) return it->second;
      Term v = mkVar(freshName(intern("p")), u->sort);
      seen.emplace(u, v);
      eqs.push_back(mkEq(v, u));
      p.fresh.push_back(v);
      return v;
    }
    std::vector<Term> args;
    for (Term a : u->args) args.push_back(go(a, u->kind != SymKind::Builtin));
    return rebuild(u, std::move(args));
  };
  p.term = go(t, false);
  p.constraint = mkAnd(eqs);
  return p;
}

}  // namespace lcs

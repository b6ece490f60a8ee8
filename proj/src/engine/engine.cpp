#include "lcs/engine.hpp"

#include <algorithm>
#include <map>

#include "lcs/eval.hpp"
#include "lcs/syntax.hpp"

namespace lcs {

void AxiomSet::add(RewriteRule eq) {
  if (eq.lhs->tag != Tag::App || eq.lhs->kind != SymKind::Axiomatized)
    throw SortError("axiom equation must be rooted at an axiomatized symbol: " + show(eq.lhs));
  eqs_[eq.lhs->name].push_back(std::move(eq));
}

const std::vector<RewriteRule>* AxiomSet::forSymbol(Name f) const {
  auto it = eqs_.find(f);
  return it == eqs_.end() ? nullptr : &it->second;
}

size_t AxiomSet::size() const {
  size_t n = 0;
  for (auto& [f, v] : eqs_) n += v.size();
  return n;
}

TopMostVerdict checkTopMost(const Lctrs& lctrs, const Signature& sig) {
  TopMostVerdict v;
  for (const FunctionSymbol* f : sig.symbols()) {
    for (auto& r : f->ranks) {
      bool bad = false;
      for (SortId s : r.args) bad = bad || sig.leq(lctrs.configSort, s);
      if (bad) {
        v.ok = false;
        v.offending.push_back(nameOf(f->name));
        break;
      }
    }
  }
  return v;
}

namespace {

// Variables of an equation renamed once into a namespace user input cannot reach.
RewriteRule sealed(const RewriteRule& r) {
  VarSet vars = freeVariables(r.lhs);
  freeVariables(r.rhs, vars);
  if (r.cond) freeVariables(r.cond, vars);
  Subst ren;
  for (Term v : vars) ren[v] = mkVar(v->str() + "@", v->sort);
  return RewriteRule{r.label, substitute(ren, r.lhs), substitute(ren, r.rhs), r.cond ? substitute(ren, r.cond) : nullptr};
}

Bindable varsOf(const RewriteRule& r) {
  VarSet vars = freeVariables(r.lhs);
  freeVariables(r.rhs, vars);
  if (r.cond) freeVariables(r.cond, vars);
  return Bindable(vars.begin(), vars.end());
}

}  // namespace

Engine::Engine(const LanguageDefinition& lang, Solver* solver, EngineOptions opt)
    : lang_(lang), solver_(solver), opt_(opt) {}

const std::vector<std::pair<RewriteRule, Bindable>>& Engine::sealedFor(Name f) {
  auto it = sealed_.find(f);
  if (it != sealed_.end()) return it->second;
  std::vector<std::pair<RewriteRule, Bindable>> out;
  if (auto* eqs = lang_.axioms.forSymbol(f))
    for (auto& eq : *eqs) {
      RewriteRule s = sealed(eq);
      out.emplace_back(s, varsOf(s));
    }
  return sealed_.emplace(f, std::move(out)).first->second;
}

Term Engine::normalize(Term t) {
  int fuel = opt_.fuel;
  return normalizeRec(t, fuel);
}

Term Engine::normalizeRec(Term t, int& fuel) {
  if (!t->hasAxiom()) return simplify(t);
  auto cached = normCache_.find(t);
  if (cached != normCache_.end()) return cached->second;
  Term out;
  if (t->tag == Tag::Quant) {
    std::vector<Term> args(t->args.begin(), t->args.end() - 1);
    args.push_back(normalizeRec(t->body(), fuel));
    out = simplify(rebuild(t, std::move(args)));
  } else {
    std::vector<Term> args;
    args.reserve(t->args.size());
    for (Term a : t->args) args.push_back(normalizeRec(a, fuel));
    Term cur = rebuild(t, std::move(args));
    out = cur->kind == SymKind::Axiomatized ? cur : simplify(cur);
    if (cur->kind == SymKind::Axiomatized) {
      for (auto& [eq, vars] : sealedFor(cur->name)) {
        UnifyResult m = unify(cur, eq.lhs, vars, UnifyOptions{});
        bool fired = false;
        for (auto& u : m.unifiers) {
          Term c = u.constraint;
          if (eq.cond) c = mkAnd(c, substitute(u.subst, eq.cond));
          c = normalizeRec(c, fuel);
          if (!c->isTrue()) continue;
          if (--fuel < 0) throw NormalizationError("normalization fuel exhausted at symbol " + cur->str());
          out = normalizeRec(substitute(u.subst, eq.rhs), fuel);
          fired = true;
          break;
        }
        if (fired) break;
      }
    }
  }
  normCache_.emplace(t, out);
  return out;
}

Term Engine::normalizeGround(Term t) {
  Term n = normalize(t);
  if (n->hasAxiom()) {
    std::function<Term(Term)> find = [&](Term u) -> Term {
      for (Term a : u->args)
        if (a->hasAxiom()) return find(a);
      return u;
    };
    throw NormalizationError("no normal form without axiomatized symbols; residual " + show(find(n)));
  }
  return n;
}

Term Engine::abstractResidual(Term phi, std::vector<Term>& fresh) {
  if (!phi->hasAxiom()) return phi;
  std::unordered_map<Term, Term> seen;
  std::function<Term(Term)> go = [&](Term u) -> Term {
    if (!u->hasAxiom()) return u;
    if (u->tag == Tag::App && u->kind == SymKind::Axiomatized && isBuiltinSort(u->sort)) {
      auto it = seen.find(u);
      if (it != seen.end()) return it->second;
      Term v = mkVar(freshName(intern("abs")), u->sort);
      seen.emplace(u, v);
      fresh.push_back(v);
      return v;
    }
    std::vector<Term> args;
    for (Term a : u->args) args.push_back(go(a));
    return rebuild(u, std::move(args));
  };
  return simplify(go(phi));
}

bool Engine::mayMatch(Term s, Term p) const {
  if (p->isVar() || s->isVar()) return true;
  if (isBuiltinSort(s->sort) || isBuiltinSort(p->sort)) return true;
  if (s->tag != Tag::App || p->tag != Tag::App) return true;
  if (s->kind == SymKind::Axiomatized || p->kind == SymKind::Axiomatized) return true;
  if (s->name != p->name || s->args.size() != p->args.size()) return false;
  for (size_t i = 0; i < s->args.size(); ++i)
    if (!mayMatch(s->args[i], p->args[i])) return false;
  return true;
}

DerivativeSet Engine::derivatives(Term t, Term phi) {
  DerivativeSet out;
  phi = simplify(phi);
  VarSet ctxVars = freeVariables(t);
  freeVariables(phi, ctxVars);
  std::vector<Derivative> raw;
  for (const RewriteRule& rule : lang_.semantics.rules) {
    if (!mayMatch(t, rule.lhs)) continue;
    VarSet vars = freeVariables(rule.lhs);
    freeVariables(rule.rhs, vars);
    if (rule.cond) freeVariables(rule.cond, vars);
    Subst ren = freshRenaming(vars);
    Bindable b;
    for (auto& [from, to] : ren) b.insert(to);
    Term lhs = substitute(ren, rule.lhs), rhs = substitute(ren, rule.rhs);
    Term cond = rule.cond ? substitute(ren, rule.cond) : mkTrue();
    UnifyResult u = unify(t, lhs, b, UnifyOptions{&lang_.axioms, opt_.unrollDepth});
    out.incomplete = out.incomplete || u.incomplete;
    for (auto& un : u.unifiers) {
      Term c = normalize(mkAnd(un.constraint, substitute(un.subst, cond)));
      if (c->isFalse()) continue;
      std::vector<Term> abst;
      Term c2 = abstractResidual(c, abst);
      Term newPhi = simplify(mkAnd(phi, c2));
      if (newPhi->isFalse()) continue;
      Derivative d;
      d.abstracted = !abst.empty();
      d.flagged = d.abstracted;
      if (!c2->isTrue() && solver_) {
        SatResult r = solver_->isSatisfiable(newPhi);
        if (r.unsat()) continue;
        if (r.unknown()) d.flagged = true;
      }
      ++applications_;
      d.term = normalize(substitute(un.subst, rhs));
      d.constraint = newPhi;
      d.step = c2;
      d.rawStep = c;
      VarSet stepVars = freeVariables(c2);
      for (Term v : stepVars)
        if (!ctxVars.count(v)) d.fresh.push_back(v);
      d.rule = rule.label;
      raw.push_back(std::move(d));
    }
  }
  for (auto& d : raw) out.items.push_back(std::move(d));
  return out;
}

std::vector<Chain> Engine::derivativesBounded(Term t, Term phi, int minSteps, int maxSteps) {
  std::vector<Chain> result;
  auto addResult = [&](const Chain& c) {
    for (auto& r : result)
      if (r.term == c.term) {
        r.constraint = simplify(mkOr(r.constraint, c.constraint));
        r.flagged = r.flagged || c.flagged;
        return;
      }
    result.push_back(c);
  };
  std::vector<Chain> frontier{{t, simplify(phi), 0, false}};
  if (minSteps == 0) addResult(frontier[0]);
  for (int d = 1; d <= maxSteps && !frontier.empty(); ++d) {
    std::vector<Chain> next;
    for (auto& c : frontier) {
      DerivativeSet ds = derivatives(c.term, c.constraint);
      for (auto& it : ds.items) {
        Chain n{it.term, it.constraint, d, c.flagged || it.flagged};
        auto same = std::find_if(next.begin(), next.end(), [&](const Chain& e) { return e.term == n.term; });
        if (same == next.end()) {
          next.push_back(n);
        } else {
          same->constraint = simplify(mkOr(same->constraint, n.constraint));
          same->flagged = same->flagged || n.flagged;
        }
      }
    }
    if (d >= minSteps)
      for (auto& n : next) addResult(n);
    frontier = std::move(next);
  }
  return result;
}

std::vector<Term> Engine::successorsConcrete(Term cfg) {
  Solver* saved = solver_;
  solver_ = nullptr;
  DerivativeSet ds;
  try {
    ds = derivatives(cfg, mkTrue());
  } catch (...) {
    solver_ = saved;
    throw;
  }
  solver_ = saved;
  std::vector<Term> out;
  for (auto& d : ds.items) {
    if (d.step->isTrue()) {
      out.push_back(d.term);
      continue;
    }
    throw NormalizationError("rule condition not decided on a ground configuration: " + show(d.step));
  }
  return out;
}

std::optional<Term> Engine::stepConcrete(Term cfg) {
  std::vector<Term> succ = successorsConcrete(cfg);
  if (succ.empty()) return std::nullopt;
  if (opt_.deterministic && succ.size() > 1)
    throw NondeterminismError("several rules apply to " + show(cfg));
  return succ.front();
}

}  // namespace lcs

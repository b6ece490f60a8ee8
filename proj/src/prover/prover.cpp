#include "lcs/prover.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <sstream>

#include "lcs/eval.hpp"

namespace lcs {

std::string toString(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "Proved";
    case Verdict::Failed: return "Failed";
    case Verdict::BoundExceeded: return "BoundExceeded";
  }
  return "?";
}

std::string toString(ProofRule r) {
  switch (r) {
    case ProofRule::Axiom: return "Axiom";
    case ProofRule::Base: return "Base";
    case ProofRule::Circ: return "Circ";
    case ProofRule::Step: return "Step";
    case ProofRule::Stuck: return "Stuck";
    case ProofRule::Bound: return "Bound";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double millisSince(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct RenamedFormula {
  Term lhs, rhs, constraint;
  Bindable vars;
};

RenamedFormula renameFormula(const SimulationFormula& R) {
  VarSet vs = freeVariables(R.lhs);
  freeVariables(R.rhs, vs);
  freeVariables(R.constraint, vs);
  Subst ren = freshRenaming(vs);
  RenamedFormula out{substitute(ren, R.lhs), substitute(ren, R.rhs), substitute(ren, R.constraint), {}};
  for (auto& [from, to] : ren) out.vars.insert(to);
  return out;
}

void collect(const ProofNode& n, std::vector<const ProofNode*>& out) {
  if (n.rule == ProofRule::Stuck || n.rule == ProofRule::Bound) out.push_back(&n);
  for (auto& c : n.children) collect(c, out);
}

}  // namespace

std::vector<const ProofNode*> frontier(const ProofOutcome& o) {
  std::vector<const ProofNode*> out;
  collect(o.root, out);
  return out;
}

struct Prover::Search {
  const std::vector<SimulationFormula>& G;
  const std::vector<SimulationFormula>& B;
  SimKind mode;
  size_t nodes = 0;
  bool failed = false;
  bool bounded = false;
};

Prover::Prover(Sides sides, Solver& solver, ProverConfig cfg)
    : sides_(sides),
      solver_(solver),
      cfg_(cfg),
      left_(*sides.left, &solver, EngineOptions{cfg.unrollDepth, 10000, false}),
      right_(*sides.right, &solver, EngineOptions{cfg.unrollDepth, 10000, false}) {}

bool Prover::lhsMayMatch(Term P, Term phi, const SimulationFormula& R) {
  RenamedFormula r = renameFormula(R);
  UnifyResult u = unify(P, r.lhs, r.vars, UnifyOptions{&sides_.left->axioms, cfg_.unrollDepth});
  std::vector<Term> alts;
  for (auto& un : u.unifiers) {
    Term c = left_.normalize(mkAnd(un.constraint, substitute(un.subst, r.constraint)));
    if (c->isFalse()) continue;
    std::vector<Term> abst;
    c = left_.abstractResidual(c, abst);
    VarSet vs = freeVariables(c);
    std::vector<Term> ex;
    for (Term v : vs)
      if (r.vars.count(v) || std::find(un.fresh.begin(), un.fresh.end(), v) != un.fresh.end() ||
          std::find(abst.begin(), abst.end(), v) != abst.end())
        ex.push_back(v);
    alts.push_back(mkExists(ex, c));
  }
  if (alts.empty()) return false;
  Term q = simplify(mkAnd(phi, mkOr(alts)));
  if (q->isFalse()) return false;
  return !solver_.isSatisfiable(q).unsat();
}

Term Prover::cover(Term P, Term Qchain, Term chainPhi, const SimulationFormula& R, const VarSet& ctx) {
  RenamedFormula r = renameFormula(R);
  std::vector<Term> alts;
  UnifyResult u1 = unify(P, r.lhs, r.vars, UnifyOptions{&sides_.left->axioms, cfg_.unrollDepth});
  for (auto& a : u1.unifiers) {
    Bindable b2 = r.vars;
    for (Term f : a.fresh) b2.insert(f);
    for (auto& [x, t] : a.subst) b2.erase(x);
    Term q2 = substitute(a.subst, r.rhs);
    UnifyResult u2 = unify(Qchain, q2, b2, UnifyOptions{&sides_.right->axioms, cfg_.unrollDepth});
    for (auto& b : u2.unifiers) {
      Subst sigma = compose(b.subst, a.subst);
      Term c = mkAnd({substitute(b.subst, a.constraint), b.constraint, substitute(sigma, r.constraint)});
      c = left_.normalize(c);
      if (c->isFalse()) continue;
      std::vector<Term> abst;
      c = left_.abstractResidual(c, abst);
      // an abstracted side condition cannot witness existence on the right
      if (!abst.empty()) continue;
      std::vector<Term> ex;
      for (Term v : freeVariables(c))
        if (!ctx.count(v)) ex.push_back(v);
      alts.push_back(mkExists(ex, c));
    }
  }
  if (alts.empty()) return mkFalse();
  Term inner = mkAnd(chainPhi, mkOr(alts));
  VarSet chainVars = freeVariables(inner);
  std::vector<Term> ex;
  for (Term v : chainVars)
    if (!ctx.count(v)) ex.push_back(v);
  return simplify(mkExists(ex, inner));
}

constexpr int kBlockedSearchDepth = 30;

Term Prover::subsumption(Term P, Term Q, const std::vector<SimulationFormula>& R) {
  VarSet ctx = freeVariables(P);
  freeVariables(Q, ctx);
  std::vector<Term> alts;
  for (auto& f : R) alts.push_back(cover(P, Q, mkTrue(), f, ctx));
  return simplify(mkOr(alts));
}

ProofNode Prover::sequent(Search& s, Term P, Term Q, Term phi, int g, int depth) {
  ProofNode n;
  n.lhs = P;
  n.rhs = Q;
  n.guard = g;
  n.depth = depth;
  phi = simplify(phi);
  n.constraint = phi;
  if (++s.nodes > cfg_.maxNodes) {
    n.rule = ProofRule::Bound;
    n.note = "proof node budget exhausted";
    s.bounded = true;
    return n;
  }
  if (phi->isFalse()) {
    n.rule = ProofRule::Axiom;
    return n;
  }
  if (solver_.isSatisfiable(phi).unsat()) {
    n.rule = ProofRule::Axiom;
    n.query = solver_.lastQuery();
    return n;
  }

  // Right phase: Base and Circ.
  struct Candidate {
    const SimulationFormula* f;
    bool circ;
    bool blocked;
  };
  std::vector<Candidate> cands;
  for (auto& b : s.B)
    if (lhsMayMatch(P, phi, b)) cands.push_back({&b, false, false});
  bool circAllowed = s.mode == SimKind::Partial || g == 1;
  for (auto& c : s.G)
    if (lhsMayMatch(P, phi, c)) cands.push_back({&c, true, !circAllowed});
  size_t admissible = std::count_if(cands.begin(), cands.end(), [](const Candidate& c) { return !c.blocked; });

  if (!cands.empty()) {
    VarSet ctx = freeVariables(P);
    freeVariables(Q, ctx);
    freeVariables(phi, ctx);
    Term covered = mkFalse();
    std::vector<Citation> cites;
    struct Link {
      Term term, constraint;
      bool flagged;
    };
    std::vector<Link> level{{Q, phi, false}};
    bool closed = false;
    for (int d = 0; d <= cfg_.rhsBound && !level.empty() && !closed; ++d) {
      bool grew = false;
      for (auto& l : level) {
        if (l.flagged) continue;
        for (auto& c : cands) {
          if (c.circ && s.mode == SimKind::Partial && g == 0 && d < 1) continue;
          if (c.blocked && std::any_of(n.blocked.begin(), n.blocked.end(),
                                       [&](const Citation& b) { return b.label == c.f->label; }))
            continue;
          Term cv = cover(P, l.term, l.constraint, *c.f, ctx);
          if (cv->isFalse()) continue;
          if (c.blocked) {
            n.blocked.push_back({c.f->label, true, d});
            continue;
          }
          Term next = simplify(mkOr(covered, cv));
          if (next == covered) continue;
          covered = next;
          grew = true;
          cites.push_back({c.f->label, c.circ, d});
        }
      }
      if (grew) {
        Validity v = solver_.isValid(mkImplies(phi, covered));
        if (v == Validity::Valid) {
          closed = true;
          n.query = solver_.lastQuery();
          break;
        }
      }
      if (d == cfg_.rhsBound) break;
      if (admissible == 0 && (!n.blocked.empty() || d >= kBlockedSearchDepth)) break;
      std::vector<Link> next;
      for (auto& l : level) {
        DerivativeSet ds = right_.derivatives(l.term, l.constraint);
        for (auto& it : ds.items) {
          Link nl{it.term, it.constraint, l.flagged || it.flagged};
          auto same = std::find_if(next.begin(), next.end(), [&](const Link& e) { return e.term == nl.term; });
          if (same == next.end()) {
            next.push_back(nl);
          } else {
            same->constraint = simplify(mkOr(same->constraint, nl.constraint));
            same->flagged = same->flagged || nl.flagged;
          }
        }
      }
      level = std::move(next);
    }
    if (!covered->isFalse()) {
      n.cover = cites;
      n.covered = covered;
    }
    if (closed) {
      bool anyCirc = std::any_of(cites.begin(), cites.end(), [](const Citation& c) { return c.circularity; });
      n.rule = anyCirc ? ProofRule::Circ : ProofRule::Base;
      return n;
    }
    if (!covered->isFalse()) phi = simplify(mkAnd(phi, mkNot(covered)));
  }

  // Left phase: Step.
  n.residual = phi;
  if (depth >= cfg_.lhsStepBound) {
    n.rule = ProofRule::Bound;
    n.note = "left step bound reached";
    s.bounded = true;
    return n;
  }
  DerivativeSet ds = left_.derivatives(P, phi);
  std::vector<Term> succ;
  for (auto& d : ds.items) {
    if (d.flagged) {
      n.flagged.push_back({d.rule, d.rawStep});
      continue;
    }
    succ.push_back(mkExists(d.fresh, d.step));
  }
  n.stepCover = simplify(mkOr(succ));
  n.incompleteUnification = ds.incomplete;
  Term stuck = simplify(mkAnd(phi, mkNot(n.stepCover)));
  bool stuckSat = !stuck->isFalse();
  if (stuckSat) {
    SatResult verdict;
    auto model = solver_.checkSatWithModel(stuck, &verdict);
    stuckSat = !verdict.unsat();
    if (stuckSat) {
      n.rule = ProofRule::Stuck;
      n.residual = stuck;
      n.model = model;
      if (!verdict.sat()) n.note = "satisfiability unknown: " + verdict.reason;
      else if (ds.items.empty()) n.note = "no rule applies";
      else n.note = "successors do not cover the constraint";
      s.failed = true;
      return n;
    }
  }
  n.rule = ProofRule::Step;
  n.query = solver_.lastQuery();
  if (ds.incomplete) {
    // Successors may be missing when unification gave up; that is unsound for Step.
    n.rule = ProofRule::Stuck;
    n.note = "unification incomplete at unroll depth " + std::to_string(cfg_.unrollDepth);
    s.failed = true;
    return n;
  }
  for (auto& d : ds.items) {
    if (s.failed && cfg_.failFast) break;
    n.children.push_back(sequent(s, d.term, Q, d.constraint, 1, depth + 1));
  }
  return n;
}

ProofOutcome Prover::prove(const SimulationFormula& goal, const std::vector<SimulationFormula>& G,
                           const std::vector<SimulationFormula>& B, SimKind mode) {
  auto t0 = Clock::now();
  size_t q0 = solver_.stats().queries;
  Search s{G, B, mode};
  ProofOutcome o;
  o.goal = goal.label;
  o.mode = mode;
  o.root = sequent(s, goal.lhs, goal.rhs, goal.constraint, 0, 0);
  o.nodes = s.nodes;
  o.verdict = s.failed ? Verdict::Failed : s.bounded ? Verdict::BoundExceeded : Verdict::Proved;
  o.smtQueries = solver_.stats().queries - q0;
  o.wallMillis = millisSince(t0);
  return o;
}

std::vector<SimulationFormula> goalSet(const EquivalenceProblem& p, Direction d) {
  std::vector<SimulationFormula> out;
  for (auto& g : p.goals) out.push_back(d == Direction::Bwd ? swapSides(g) : g);
  for (auto& c : p.circularities)
    if (c.direction == Direction::Both || c.direction == d) out.push_back(d == Direction::Bwd ? swapSides(c) : c);
  return out;
}

std::vector<SimulationFormula> baseSet(const EquivalenceProblem& p, Direction d) {
  std::vector<SimulationFormula> out;
  for (auto& b : p.base)
    if (b.direction == Direction::Both || b.direction == d) out.push_back(d == Direction::Bwd ? swapSides(b) : b);
  return out;
}

GoalSetResult proveAll(const EquivalenceProblem& p, Direction d, SimKind mode, const ProverConfig& cfg) {
  auto t0 = Clock::now();
  GoalSetResult res;
  res.direction = d;
  res.mode = mode;
  Sides sides = d == Direction::Bwd ? Sides{p.right.get(), p.left.get()} : Sides{p.left.get(), p.right.get()};
  Solver solver(cfg.smt);
  Prover prover(sides, solver, cfg);
  auto G = goalSet(p, d);
  auto B = baseSet(p, d);
  for (auto& f : G) f.kind = mode;
  for (auto& f : B) f.kind = mode;
  res.verdict = Verdict::Proved;
  for (auto& f : G) {
    ProofOutcome o = prover.prove(f, G, B, mode);
    res.proofNodes += o.nodes;
    if (o.verdict != Verdict::Proved) res.verdict = Verdict::Failed;
    if (o.verdict == Verdict::BoundExceeded) res.boundHit = true;
    res.outcomes.push_back(std::move(o));
    if (res.verdict == Verdict::Failed && cfg.failFast) break;
  }
  res.smtQueries = solver.stats().queries;
  res.wallMillis = millisSince(t0);
  return res;
}

EquivalenceResult proveEquivalence(const EquivalenceProblem& p, SimKind mode, const ProverConfig& cfg) {
  EquivalenceResult r;
  r.fwd = proveAll(p, Direction::Fwd, mode, cfg);
  r.bwd = proveAll(p, Direction::Bwd, mode, cfg);
  r.combined = r.fwd.verdict == Verdict::Proved && r.bwd.verdict == Verdict::Proved ? Verdict::Proved : Verdict::Failed;
  return r;
}

std::string explainFailure(const ProofOutcome& o) {
  std::ostringstream os;
  auto open = frontier(o);
  if (o.verdict == Verdict::Proved || open.empty()) throw std::logic_error("explainFailure needs a failed outcome");
  os << "goal " << o.goal << ": " << toString(o.verdict) << ", " << open.size() << " open sequent(s)\n";
  for (const ProofNode* n : open) {
    os << "  open at depth " << n->depth << " with guard " << n->guard << " (" << n->note << ")\n";
    os << "    lhs: " << show(n->lhs) << "\n";
    os << "    rhs: " << show(n->rhs) << "\n";
    os << "    residual: " << show(n->residual ? n->residual : n->constraint) << "\n";
    if (!n->cover.empty()) {
      os << "    partially covered by:";
      for (auto& c : n->cover)
        os << " " << (c.circularity ? "circularity " : "base ") << c.label << " after " << c.rhsSteps << " rhs step(s);";
      os << "\n    coverage: " << show(n->covered) << "\n";
    } else {
      os << "    no base case or circularity covers this sequent";
      if (n->guard == 0)
        os << (o.mode == SimKind::Full ? " (circularities need guard 1 in full mode)"
                                       : " (at guard 0 a circularity needs at least one rhs step)");
      os << "\n";
    }
    for (auto& f : n->flagged)
      os << "    blocked rule " << f.rule << ": condition " << show(f.condition) << " could not be decided\n";
    if (n->model) {
      os << "    countermodel:";
      for (auto& [v, val] : *n->model) os << " " << v->str() << " = " << show(val) << ";";
      os << "\n";
    }
  }
  std::function<void(const ProofNode&)> rejected = [&](const ProofNode& n) {
    for (auto& c : n.blocked)
      os << "  circularity attempt at depth " << n.depth << " with guard " << n.guard << ": " << c.label
         << " matches after " << c.rhsSteps << " rhs step(s) but full mode admits circularities only at guard 1\n";
    for (auto& ch : n.children) rejected(ch);
  };
  rejected(o.root);
  return os.str();
}

namespace {

void checkRec(const ProofNode& n, bool stepAbove, SimKind mode, Solver& solver, TreeCheck& out) {
  for (auto& c : n.cover) {
    if (!c.circularity) continue;
    if (mode == SimKind::Full && (n.guard != 1 || !stepAbove)) {
      out.guardDiscipline = false;
      out.problems.push_back("circularity " + c.label + " used without a preceding Step");
    }
    if (mode == SimKind::Partial && n.guard == 0 && c.rhsSteps < 1) {
      out.partialProgress = false;
      out.problems.push_back("circularity " + c.label + " used with guard 0 and no rhs step");
    }
  }
  if (n.rule == ProofRule::Step) {
    Term obligation = mkImplies(n.residual, n.stepCover);
    if (solver.isValid(obligation) != Validity::Valid) {
      out.stepExhaustive = false;
      out.problems.push_back("Step successors do not cover " + show(n.residual));
    }
  }
  for (auto& c : n.children) checkRec(c, stepAbove || n.rule == ProofRule::Step, mode, solver, out);
}

}  // namespace

TreeCheck checkProofTree(const ProofOutcome& o, SimKind mode, Solver& solver) {
  TreeCheck out;
  checkRec(o.root, false, mode, solver, out);
  return out;
}

std::string renderTree(const ProofNode& n, int indent) {
  std::ostringstream os;
  std::string pad(indent * 2, ' ');
  os << pad << toString(n.rule) << " g=" << n.guard << " | " << show(n.lhs) << "  ~  " << show(n.rhs) << "  if "
     << show(n.constraint);
  if (!n.cover.empty()) {
    os << "  [";
    for (size_t i = 0; i < n.cover.size(); ++i)
      os << (i ? ", " : "") << n.cover[i].label << "@" << n.cover[i].rhsSteps;
    os << "]";
  }
  if (!n.note.empty()) os << "  (" << n.note << ")";
  os << "\n";
  for (auto& c : n.children) os << renderTree(c, indent + 1);
  return os.str();
}

}  // namespace lcs

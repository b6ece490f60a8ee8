#include "lcs/term.hpp"

#include <atomic>
#include <deque>
#include <mutex>
#include <unordered_set>

namespace lcs {

namespace {

size_t mix(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

struct NodeHash {
  size_t operator()(const Node* n) const { return n->hash; }
};

struct NodeEq {
  bool operator()(const Node* a, const Node* b) const {
    return a->tag == b->tag && a->kind == b->kind && a->exists == b->exists && a->name == b->name &&
           a->sort == b->sort && a->bval == b->bval && a->ival == b->ival && a->args == b->args;
  }
};

struct Store {
  std::mutex mu;
  std::deque<Node> nodes;
  std::unordered_set<const Node*, NodeHash, NodeEq> index;
};

Store& store() {
  static Store s;
  return s;
}

Term internNode(Node&& n) {
  size_t h = mix(static_cast<size_t>(n.tag), n.name);
  h = mix(h, n.sort);
  h = mix(h, n.bval);
  h = mix(h, n.exists);
  h = mix(h, static_cast<size_t>(n.kind));
  if (n.tag == Tag::Int) h = mix(h, std::hash<std::string>()(n.ival.str()));
  for (Term a : n.args) h = mix(h, a->hash);
  n.hash = h;
  auto& s = store();
  std::lock_guard<std::mutex> lock(s.mu);
  auto it = s.index.find(&n);
  if (it != s.index.end()) return *it;
  s.nodes.push_back(std::move(n));
  const Node* p = &s.nodes.back();
  s.index.insert(p);
  return p;
}

Node blank(Tag tag) {
  Node n;
  n.tag = tag;
  n.kind = SymKind::Constructor;
  n.theory = Theory::None;
  n.exists = false;
  n.flags = 0;
  n.name = 0;
  n.sort = 0;
  n.bval = false;
  n.hash = 0;
  return n;
}

uint8_t childFlags(const std::vector<Term>& args) {
  uint8_t f = 0;
  for (Term a : args) f |= a->flags;
  return f;
}

}  // namespace

int compareTerms(Term a, Term b) {
  if (a == b) return 0;
  if (a->tag != b->tag) return a->tag < b->tag ? -1 : 1;
  switch (a->tag) {
    case Tag::Int:
      return a->ival < b->ival ? -1 : 1;
    case Tag::Bool:
      return a->bval < b->bval ? -1 : 1;
    case Tag::Id:
    case Tag::Var: {
      int c = nameOf(a->name).compare(nameOf(b->name));
      if (c) return c < 0 ? -1 : 1;
      if (a->sort != b->sort) return nameOf(a->sort) < nameOf(b->sort) ? -1 : 1;
      return 0;
    }
    case Tag::App:
    case Tag::Quant: {
      if (a->name != b->name) return nameOf(a->name) < nameOf(b->name) ? -1 : 1;
      if (a->exists != b->exists) return a->exists < b->exists ? -1 : 1;
      if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
      for (size_t i = 0; i < a->args.size(); ++i) {
        int c = compareTerms(a->args[i], b->args[i]);
        if (c) return c;
      }
      if (a->sort != b->sort) return nameOf(a->sort) < nameOf(b->sort) ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

bool TermLess::operator()(Term a, Term b) const { return compareTerms(a, b) < 0; }

Term mkVar(Name name, SortId sort) {
  Node n = blank(Tag::Var);
  n.name = name;
  n.sort = sort;
  n.flags = kHasVar;
  return internNode(std::move(n));
}

Term mkVar(const std::string& name, SortId sort) { return mkVar(lcs::intern(name), sort); }

Term mkInt(const BigInt& v) {
  Node n = blank(Tag::Int);
  n.ival = v;
  n.sort = sorts::Int();
  return internNode(std::move(n));
}

Term mkInt(long v) { return mkInt(BigInt(v)); }

Term mkBool(bool b) {
  Node n = blank(Tag::Bool);
  n.bval = b;
  n.sort = sorts::Bool();
  return internNode(std::move(n));
}

Term mkId(Name name) {
  Node n = blank(Tag::Id);
  n.name = name;
  n.sort = sorts::Id();
  return internNode(std::move(n));
}

Term mkId(const std::string& name) { return mkId(lcs::intern(name)); }

Term mkAppRaw(Name name, SymKind kind, Theory th, SortId sort, std::vector<Term> args) {
  Node n = blank(Tag::App);
  n.name = name;
  n.kind = kind;
  n.theory = kind == SymKind::Builtin ? th : Theory::None;
  n.sort = sort;
  n.flags = childFlags(args);
  if (kind == SymKind::Axiomatized) n.flags |= kHasAxiom;
  if (kind == SymKind::Constructor) n.flags |= kHasConstructor;
  n.args = std::move(args);
  return internNode(std::move(n));
}

Term mkApp(const Signature& sig, Name name, std::vector<Term> args) {
  const FunctionSymbol* f = sig.find(name);
  if (!f) throw SortError("unknown symbol " + nameOf(name));
  std::vector<SortId> argSorts;
  for (Term a : args) argSorts.push_back(a->sort);
  auto res = sig.resultSort(*f, argSorts);
  if (!res) {
    std::string msg = "ill-sorted application " + nameOf(name) + "(";
    for (size_t i = 0; i < argSorts.size(); ++i) msg += (i ? ", " : "") + nameOf(argSorts[i]);
    throw SortError(msg + ")");
  }
  return mkAppRaw(name, f->kind, f->theory, *res, std::move(args));
}

Term mkApp(const Signature& sig, const std::string& name, std::vector<Term> args) {
  return mkApp(sig, lcs::intern(name), std::move(args));
}

Term mkTheory(Theory th, std::vector<Term> args) {
  const FunctionSymbol* f = theorySymbol(th);
  SortId res = f->ranks.front().result;
  return mkAppRaw(f->name, SymKind::Builtin, th, res, std::move(args));
}

Term mkQuant(bool exists, std::vector<Term> vars, Term body) {
  if (vars.empty()) return body;
  Node n = blank(Tag::Quant);
  n.exists = exists;
  n.name = lcs::intern(exists ? "exists" : "forall");
  n.sort = sorts::Bool();
  vars.push_back(body);
  n.flags = childFlags(vars) | kHasQuant;
  n.args = std::move(vars);
  return internNode(std::move(n));
}

bool isTheory(Term t, Theory th) { return t->tag == Tag::App && t->kind == SymKind::Builtin && t->theory == th; }

Term mkTrue() { return mkBool(true); }
Term mkFalse() { return mkBool(false); }

Term mkNot(Term a) {
  if (a->tag == Tag::Bool) return mkBool(!a->bval);
  if (isTheory(a, Theory::Not)) return a->args[0];
  return mkTheory(Theory::Not, {a});
}

std::vector<Term> conjuncts(Term t) {
  std::vector<Term> out;
  std::vector<Term> work{t};
  while (!work.empty()) {
    Term x = work.back();
    work.pop_back();
    if (isTheory(x, Theory::And)) {
      work.push_back(x->args[1]);
      work.push_back(x->args[0]);
    } else if (!x->isTrue()) {
      out.push_back(x);
    }
  }
  return out;
}

std::vector<Term> disjuncts(Term t) {
  std::vector<Term> out;
  std::vector<Term> work{t};
  while (!work.empty()) {
    Term x = work.back();
    work.pop_back();
    if (isTheory(x, Theory::Or)) {
      work.push_back(x->args[1]);
      work.push_back(x->args[0]);
    } else if (!x->isFalse()) {
      out.push_back(x);
    }
  }
  return out;
}

namespace {

Term fold(Theory th, const std::vector<Term>& xs) {
  Term acc = xs.back();
  for (size_t i = xs.size() - 1; i-- > 0;) acc = mkTheory(th, {xs[i], acc});
  return acc;
}

Term junction(const std::vector<Term>& in, bool isAnd) {
  std::vector<Term> flat;
  std::unordered_set<Term> seen;
  for (Term x : in) {
    for (Term y : isAnd ? conjuncts(x) : disjuncts(x)) {
      if (y->tag == Tag::Bool) {
        if (y->bval != isAnd) return mkBool(!isAnd);
        continue;
      }
      if (seen.insert(y).second) flat.push_back(y);
    }
  }
  for (Term y : flat)
    if (isTheory(y, Theory::Not) && seen.count(y->args[0])) return mkBool(!isAnd);
  if (flat.empty()) return mkBool(isAnd);
  if (flat.size() == 1) return flat[0];
  return fold(isAnd ? Theory::And : Theory::Or, flat);
}

}  // namespace

Term mkAnd(Term a, Term b) { return junction({a, b}, true); }
Term mkAnd(const std::vector<Term>& xs) { return junction(xs, true); }
Term mkOr(Term a, Term b) { return junction({a, b}, false); }
Term mkOr(const std::vector<Term>& xs) { return junction(xs, false); }

Term mkImplies(Term a, Term b) {
  if (a->isTrue()) return b;
  if (a->isFalse() || b->isTrue() || a == b) return mkTrue();
  if (b->isFalse()) return mkNot(a);
  return mkTheory(Theory::Implies, {a, b});
}

Term mkEq(Term a, Term b) {
  if (a == b) return mkTrue();
  if (a->isLiteral() && b->isLiteral() && a->tag == b->tag) return mkFalse();
  if (compareTerms(b, a) < 0) std::swap(a, b);
  return mkTheory(Theory::Eq, {a, b});
}

size_t termSize(Term t) {
  size_t n = 1;
  for (Term a : t->args) n += termSize(a);
  return n;
}

size_t liveNodeCount() {
  auto& s = store();
  std::lock_guard<std::mutex> lock(s.mu);
  return s.nodes.size();
}

Name freshName(Name base) {
  static std::atomic<uint64_t> counter{0};
  std::string b = nameOf(base);
  auto hashPos = b.find('#');
  if (hashPos != std::string::npos) b = b.substr(0, hashPos);
  return lcs::intern(b + "#" + std::to_string(++counter));
}

}  // namespace lcs

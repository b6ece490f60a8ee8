#include "lcs/eval.hpp"

#include <map>
#include <unordered_map>

#include "lcs/subst.hpp"

namespace lcs {

BigInt euclidMod(const BigInt& a, const BigInt& b) {
  BigInt r = a % b;
  if (r < 0) r += b < 0 ? BigInt(-b) : b;
  return r;
}

BigInt euclidDiv(const BigInt& a, const BigInt& b) { return (a - euclidMod(a, b)) / b; }

namespace {

struct Linear {
  std::map<Term, BigInt, TermLess> coef;
  BigInt k = 0;

  bool constant() const { return coef.empty(); }
  void add(const Linear& o, const BigInt& scale) {
    for (auto& [a, c] : o.coef) {
      BigInt& slot = coef[a];
      slot += c * scale;
      if (slot == 0) coef.erase(a);
    }
    k += o.k * scale;
  }
};

Linear linearize(Term t);

Term buildLinear(const Linear& l) {
  Term acc = nullptr;
  for (auto& [a, c] : l.coef) {
    if (!acc) {
      acc = c == 1 ? a : mkTheory(Theory::Mul, {mkInt(c), a});
      continue;
    }
    BigInt mag = c < 0 ? BigInt(-c) : c;
    Term part = mag == 1 ? a : mkTheory(Theory::Mul, {mkInt(mag), a});
    acc = mkTheory(c < 0 ? Theory::Sub : Theory::Add, {acc, part});
  }
  if (!acc) return mkInt(l.k);
  if (l.k > 0) acc = mkTheory(Theory::Add, {acc, mkInt(l.k)});
  if (l.k < 0) acc = mkTheory(Theory::Sub, {acc, mkInt(BigInt(-l.k))});
  return acc;
}

Linear atom(Term t) {
  Linear l;
  l.coef[t] = 1;
  return l;
}

Linear linearize(Term t) {
  Linear l;
  if (t->tag == Tag::Int) {
    l.k = t->ival;
    return l;
  }
  if (t->tag == Tag::App && t->kind == SymKind::Builtin) {
    switch (t->theory) {
      case Theory::Add:
        l = linearize(t->args[0]);
        l.add(linearize(t->args[1]), 1);
        return l;
      case Theory::Sub:
        l = linearize(t->args[0]);
        l.add(linearize(t->args[1]), -1);
        return l;
      case Theory::Neg:
        l.add(linearize(t->args[0]), -1);
        return l;
      case Theory::Mul: {
        Linear a = linearize(t->args[0]), b = linearize(t->args[1]);
        if (a.constant()) {
          l.add(b, a.k);
          return l;
        }
        if (b.constant()) {
          l.add(a, b.k);
          return l;
        }
        Term x = buildLinear(a), y = buildLinear(b);
        if (compareTerms(y, x) < 0) std::swap(x, y);
        return atom(mkTheory(Theory::Mul, {x, y}));
      }
      default:
        break;
    }
  }
  return atom(t);
}

Term simplifyRec(Term t);

Term cmp(Theory th, Term a, Term b) {
  if (th == Theory::Gt) return cmp(Theory::Lt, b, a);
  if (th == Theory::Ge) return cmp(Theory::Le, b, a);
  Linear d = linearize(a);
  d.add(linearize(b), -1);
  if (d.constant()) return mkBool(th == Theory::Lt ? d.k < 0 : d.k <= 0);
  return mkTheory(th, {a, b});
}

Term equality(Term a, Term b) {
  if (a == b) return mkTrue();
  if (a->sort == sorts::Int() && b->sort == sorts::Int()) {
    Linear d = linearize(a);
    d.add(linearize(b), -1);
    if (d.constant()) return mkBool(d.k == 0);
  }
  if (a->sort == sorts::Bool() && b->sort == sorts::Bool()) {
    if (a->tag == Tag::Bool) return a->bval ? b : simplifyRec(mkNot(b));
    if (b->tag == Tag::Bool) return b->bval ? a : simplifyRec(mkNot(a));
  }
  return mkEq(a, b);
}

Term negation(Term a) {
  if (a->tag == Tag::Bool) return mkBool(!a->bval);
  if (isTheory(a, Theory::Not)) return a->args[0];
  if (isTheory(a, Theory::Lt)) return mkTheory(Theory::Le, {a->args[1], a->args[0]});
  if (isTheory(a, Theory::Le)) return mkTheory(Theory::Lt, {a->args[1], a->args[0]});
  return mkTheory(Theory::Not, {a});
}

Term lookup(Term env, Term key) {
  Term e = env;
  while (true) {
    if (isTheory(e, Theory::Update)) {
      Term k = e->args[1];
      if (k == key) return e->args[2];
      if (k->tag == Tag::Id && key->tag == Tag::Id) {
        e = e->args[0];
        continue;
      }
      break;
    }
    if (isTheory(e, Theory::EmptyEnv)) return mkInt(0);
    break;
  }
  return mkTheory(Theory::Lookup, {e, key});
}

Term update(Term env, Term key, Term val) {
  if (isTheory(val, Theory::Lookup) && val->args[0] == env && val->args[1] == key) return env;
  if (isTheory(env, Theory::Update)) {
    Term inner = env->args[0], k = env->args[1], v = env->args[2];
    if (k == key) return update(inner, key, val);
    if (k->tag == Tag::Id && key->tag == Tag::Id && nameOf(k->name) > nameOf(key->name))
      return update(update(inner, key, val), k, v);
  }
  return mkTheory(Theory::Update, {env, key, val});
}

Term builtin(Term t, std::vector<Term> a) {
  auto lit = [&](size_t i) { return a[i]->tag == Tag::Int; };
  switch (t->theory) {
    case Theory::Add:
    case Theory::Sub:
    case Theory::Neg:
    case Theory::Mul:
      return buildLinear(linearize(mkAppRaw(t->name, t->kind, t->theory, t->sort, a)));
    case Theory::Div:
    case Theory::Mod:
      if (lit(0) && lit(1) && a[1]->ival != 0)
        return mkInt(t->theory == Theory::Div ? euclidDiv(a[0]->ival, a[1]->ival) : euclidMod(a[0]->ival, a[1]->ival));
      break;
    case Theory::Lt:
    case Theory::Le:
    case Theory::Gt:
    case Theory::Ge:
      return cmp(t->theory, a[0], a[1]);
    case Theory::Eq:
      return equality(a[0], a[1]);
    case Theory::Ne:
      return negation(equality(a[0], a[1]));
    case Theory::Not:
      return negation(a[0]);
    case Theory::And:
      return mkAnd(a[0], a[1]);
    case Theory::Or:
      return mkOr(a[0], a[1]);
    case Theory::Implies:
      return mkImplies(a[0], a[1]);
    case Theory::Ite:
      if (a[0]->tag == Tag::Bool) return a[0]->bval ? a[1] : a[2];
      if (a[1] == a[2]) return a[1];
      break;
    case Theory::Min:
    case Theory::Max: {
      if (a[0] == a[1]) return a[0];
      Linear d = linearize(a[0]);
      d.add(linearize(a[1]), -1);
      if (d.constant()) {
        bool firstSmaller = d.k <= 0;
        return (t->theory == Theory::Min) == firstSmaller ? a[0] : a[1];
      }
      break;
    }
    case Theory::Lookup:
      return lookup(a[0], a[1]);
    case Theory::Update:
      return update(a[0], a[1], a[2]);
    default:
      break;
  }
  return mkAppRaw(t->name, t->kind, t->theory, t->sort, std::move(a));
}

thread_local std::unordered_map<Term, Term> cache;

Term simplifyRec(Term t) {
  if (t->tag != Tag::App && t->tag != Tag::Quant) return t;
  auto it = cache.find(t);
  if (it != cache.end()) return it->second;
  Term out;
  if (t->tag == Tag::Quant) {
    Term body = simplifyRec(t->body());
    std::vector<Term> vars(t->args.begin(), t->args.end() - 1);
    out = t->exists ? mkExists(vars, body) : mkQuant(false, vars, body);
    if (out->tag == Tag::Quant && out->exists && out != t) out = simplifyRec(out);
  } else {
    std::vector<Term> args;
    args.reserve(t->args.size());
    for (Term a : t->args) args.push_back(simplifyRec(a));
    if (t->kind == SymKind::Builtin && t->theory != Theory::Uninterpreted)
      out = builtin(t, std::move(args));
    else if (args == t->args)
      out = t;
    else
      out = mkAppRaw(t->name, t->kind, t->theory, t->sort, std::move(args));
  }
  if (out != t && (out->tag == Tag::App) && out->kind == SymKind::Builtin) {
    auto again = cache.find(out);
    if (again == cache.end()) {
      cache.emplace(t, out);
      Term fix = simplifyRec(out);
      cache[t] = fix;
      return fix;
    }
    out = again->second;
  }
  cache.emplace(t, out);
  if (cache.size() > 2000000) cache.clear();
  return out;
}

}  // namespace

Term simplify(Term t) { return simplifyRec(t); }

Term evaluateGround(Term t) { return simplifyRec(t); }

}  // namespace lcs

#include "lcs/signature.hpp"

#include <deque>
#include <mutex>
#include <unordered_map>

namespace lcs {

namespace {

struct NameTable {
  std::mutex mu;
  std::deque<std::string> names;
  std::unordered_map<std::string, Name> index;
};

NameTable& table() {
  static NameTable t;
  return t;
}

}  // namespace

Name intern(const std::string& s) {
  auto& t = table();
  std::lock_guard<std::mutex> lock(t.mu);
  auto it = t.index.find(s);
  if (it != t.index.end()) return it->second;
  Name n = static_cast<Name>(t.names.size());
  t.names.push_back(s);
  t.index.emplace(s, n);
  return n;
}

const std::string& nameOf(Name n) {
  auto& t = table();
  std::lock_guard<std::mutex> lock(t.mu);
  return t.names.at(n);
}

namespace sorts {
SortId Int() { static SortId s = intern("Int"); return s; }
SortId Bool() { static SortId s = intern("Bool"); return s; }
SortId Id() { static SortId s = intern("Id"); return s; }
SortId Env() { static SortId s = intern("Env"); return s; }
SortId Any() { static SortId s = intern("?"); return s; }
}  // namespace sorts

bool isBuiltinSort(SortId s) {
  return s == sorts::Int() || s == sorts::Bool() || s == sorts::Id() || s == sorts::Env();
}

namespace {

struct TheoryTable {
  std::unordered_map<Name, FunctionSymbol> byName;
  std::unordered_map<int, Name> byTheory;

  void add(const char* name, Theory th, std::vector<SortId> args, SortId result) {
    FunctionSymbol f;
    f.name = intern(name);
    f.kind = SymKind::Builtin;
    f.theory = th;
    f.ranks.push_back(Rank{std::move(args), result});
    byName[f.name] = f;
    byTheory[static_cast<int>(th)] = f.name;
  }

  TheoryTable() {
    SortId I = sorts::Int(), B = sorts::Bool(), D = sorts::Id(), E = sorts::Env(), A = sorts::Any();
    add("+", Theory::Add, {I, I}, I);
    add("-", Theory::Sub, {I, I}, I);
    add("*", Theory::Mul, {I, I}, I);
    add("/", Theory::Div, {I, I}, I);
    add("%", Theory::Mod, {I, I}, I);
    add("neg", Theory::Neg, {I}, I);
    add("<", Theory::Lt, {I, I}, B);
    add("<=", Theory::Le, {I, I}, B);
    add(">", Theory::Gt, {I, I}, B);
    add(">=", Theory::Ge, {I, I}, B);
    add("=", Theory::Eq, {A, A}, B);
    add("!=", Theory::Ne, {A, A}, B);
    add("&&", Theory::And, {B, B}, B);
    add("||", Theory::Or, {B, B}, B);
    add("!", Theory::Not, {B}, B);
    add("->", Theory::Implies, {B, B}, B);
    add("cond", Theory::Ite, {B, I, I}, I);
    add("min", Theory::Min, {I, I}, I);
    add("max", Theory::Max, {I, I}, I);
    add("lookup", Theory::Lookup, {E, D}, I);
    add("update", Theory::Update, {E, D, I}, E);
    add("emptyEnv", Theory::EmptyEnv, {}, E);
  }
};

const TheoryTable& theories() {
  static TheoryTable t;
  return t;
}

}  // namespace

const FunctionSymbol* theorySymbol(Name name) {
  auto& t = theories();
  auto it = t.byName.find(name);
  return it == t.byName.end() ? nullptr : &it->second;
}

const FunctionSymbol* theorySymbol(Theory th) {
  auto& t = theories();
  auto it = t.byTheory.find(static_cast<int>(th));
  if (it == t.byTheory.end()) return nullptr;
  return theorySymbol(it->second);
}

Name theoryName(Theory th) {
  const FunctionSymbol* f = theorySymbol(th);
  if (!f) throw SortError("no theory symbol");
  return f->name;
}

namespace {
std::recursive_mutex& globalMutex() {
  static std::recursive_mutex m;
  return m;
}
}  // namespace

Signature& globalSignatureMutable() {
  static Signature* g = [] {
    auto* s = new Signature();
    s->global_ = true;
    return s;
  }();
  return *g;
}

const Signature& globalSignature() { return globalSignatureMutable(); }

Signature::Signature() {
  for (SortId s : {sorts::Int(), sorts::Bool(), sorts::Id(), sorts::Env()}) {
    sorts_.insert(s);
    kinds_[s] = SortKind::Builtin;
  }
  closeSubsorts();
}

void Signature::addSort(const std::string& name, SortKind kind) {
  SortId s = intern(name);
  if (sorts_.count(s)) {
    if (kinds_[s] != kind) throw SortError("sort " + name + " redeclared with another kind");
    return;
  }
  if (kind == SortKind::Builtin && !isBuiltinSort(s))
    throw SortError("builtin sort " + name + " has no theory support (only Int, Bool, Id, Env)");
  sorts_.insert(s);
  kinds_[s] = kind;
  closeSubsorts();
  if (!global_) {
    std::lock_guard<std::recursive_mutex> lock(globalMutex());
    try { globalSignatureMutable().addSort(name, kind); } catch (const SortError&) {}
  }
}

bool Signature::hasSort(SortId s) const { return sorts_.count(s) > 0; }

SortKind Signature::sortKind(SortId s) const {
  auto it = kinds_.find(s);
  if (it == kinds_.end()) throw SortError("unknown sort " + nameOf(s));
  return it->second;
}

void Signature::addSubsort(SortId lower, SortId upper) {
  if (!hasSort(lower)) throw SortError("unknown sort " + nameOf(lower));
  if (!hasSort(upper)) throw SortError("unknown sort " + nameOf(upper));
  if (sortKind(upper) != SortKind::Constructor)
    throw SortError("builtin sort " + nameOf(upper) + " cannot have subsorts");
  if (leq_.count({lower, upper})) return;
  declaredSubsorts_.emplace_back(lower, upper);
  closeSubsorts();
  if (!global_) {
    std::lock_guard<std::recursive_mutex> lock(globalMutex());
    try { globalSignatureMutable().addSubsort(lower, upper); } catch (const SortError&) {}
  }
}

void Signature::closeSubsorts() {
  leq_.clear();
  for (SortId s : sorts_) leq_.insert({s, s});
  for (auto& p : declaredSubsorts_) leq_.insert(p);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::pair<SortId, SortId>> add;
    for (auto& a : leq_)
      for (auto& b : leq_)
        if (a.second == b.first && !leq_.count({a.first, b.second})) add.push_back({a.first, b.second});
    for (auto& p : add) changed |= leq_.insert(p).second;
  }
}

bool Signature::leq(SortId a, SortId b) const {
  if (a == b || b == sorts::Any()) return true;
  return leq_.count({a, b}) > 0;
}

void Signature::addSymbol(const std::string& name, SymKind kind, Rank rank, Theory th) {
  if (!global_) {
    std::lock_guard<std::recursive_mutex> lock(globalMutex());
    try { globalSignatureMutable().addSymbol(name, kind, rank, th); } catch (const SortError&) {}
  }
  Name n = intern(name);
  if (theorySymbol(n)) throw SortError("symbol " + name + " is reserved for the builtin theories");
  for (SortId s : rank.args)
    if (!hasSort(s)) throw SortError("unknown sort " + nameOf(s) + " in declaration of " + name);
  if (!hasSort(rank.result)) throw SortError("unknown sort " + nameOf(rank.result) + " in declaration of " + name);
  auto it = symbols_.find(n);
  if (it == symbols_.end()) {
    FunctionSymbol f;
    f.name = n;
    f.kind = kind;
    f.theory = kind == SymKind::Builtin ? (th == Theory::None ? Theory::Uninterpreted : th) : Theory::None;
    f.ranks.push_back(std::move(rank));
    symbols_.emplace(n, std::move(f));
    return;
  }
  if (it->second.kind != kind) throw SortError("symbol " + name + " redeclared with another kind");
  for (auto& r : it->second.ranks)
    if (r.args == rank.args) {
      if (r.result != rank.result) throw SortError("conflicting ranks for " + name);
      return;
    }
  it->second.ranks.push_back(std::move(rank));
}

const FunctionSymbol* Signature::find(Name name) const {
  auto it = symbols_.find(name);
  if (it != symbols_.end()) return &it->second;
  return theorySymbol(name);
}

std::vector<const FunctionSymbol*> Signature::symbols() const {
  std::vector<const FunctionSymbol*> out;
  for (auto& [n, f] : symbols_) out.push_back(&f);
  return out;
}

std::optional<SortId> Signature::resultSort(const FunctionSymbol& f, const std::vector<SortId>& argSorts) const {
  std::vector<SortId> fits;
  for (auto& r : f.ranks) {
    if (r.args.size() != argSorts.size()) continue;
    bool ok = true;
    for (size_t i = 0; i < argSorts.size() && ok; ++i) ok = leq(argSorts[i], r.args[i]);
    if (ok) fits.push_back(r.result);
  }
  if (fits.empty()) return std::nullopt;
  for (SortId cand : fits) {
    bool least = true;
    for (SortId other : fits) least = least && leq(cand, other);
    if (least) return cand;
  }
  return fits.front();
}

void Signature::validate() const {
  for (auto& [lo, hi] : declaredSubsorts_)
    if (sortKind(hi) != SortKind::Constructor)
      throw SortError("subsort " + nameOf(lo) + " < " + nameOf(hi) + ": upper sort must be a constructor sort");
  for (auto& [n, f] : symbols_) {
    for (auto& r : f.ranks) {
      if (f.kind == SymKind::Constructor && sortKind(r.result) == SortKind::Builtin)
        throw SortError("constructor " + nameOf(n) + " has builtin result sort");
      if (f.kind == SymKind::Builtin) {
        if (sortKind(r.result) != SortKind::Builtin)
          throw SortError("builtin " + nameOf(n) + " has non-builtin result sort");
        for (SortId s : r.args)
          if (sortKind(s) != SortKind::Builtin)
            throw SortError("builtin " + nameOf(n) + " has non-builtin argument sort");
      }
    }
  }
}

}  // namespace lcs

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lcs/langdef.hpp"

namespace lcs {

const std::vector<std::pair<std::string, std::string>>& bundledFiles();

std::string toString(SimKind k) { return k == SimKind::Full ? "full" : "partial"; }

std::string toString(Direction d) {
  switch (d) {
    case Direction::Fwd: return "fwd";
    case Direction::Bwd: return "bwd";
    case Direction::Both: return "both";
  }
  return "?";
}

SimulationFormula swapSides(const SimulationFormula& f) {
  SimulationFormula g = f;
  std::swap(g.lhs, g.rhs);
  if (f.direction == Direction::Fwd) g.direction = Direction::Bwd;
  if (f.direction == Direction::Bwd) g.direction = Direction::Fwd;
  return g;
}

DefinitionError::DefinitionError(const std::string& f, Location loc, const std::string& msg)
    : std::runtime_error(f + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + msg),
      file(f),
      where(loc) {}

namespace {

struct LangRef {
  std::string name;
  std::map<std::string, BigInt> params;
  bool operator==(const LangRef& o) const { return name == o.name && params == o.params; }
};

std::string cacheKey(const std::string& name, const std::map<std::string, BigInt>& params) {
  std::string k = name;
  for (auto& [p, v] : params) k += ";" + p + "=" + v.str();
  return k;
}

// Cheap header scan: the first statement names the definition.
std::pair<std::string, bool> headerOf(const std::string& text) {
  auto toks = tokenize(text);
  if (toks.size() >= 2 && toks[0].kind == Tok::Ident && toks[1].kind == Tok::Ident) {
    if (toks[0].text == "language") return {toks[1].text, true};
    if (toks[0].text == "problem") return {toks[1].text, false};
  }
  return {"", false};
}

class Loader {
 public:
  Loader(DefinitionLibrary& lib, std::string path, const std::string& text, std::map<std::string, BigInt> overrides)
      : lib_(lib), path_(std::move(path)), overrides_(std::move(overrides)) {
    try {
      toks_ = tokenize(text);
    } catch (const ParseError& e) {
      throw DefinitionError(path_, e.where, strip(e.what()));
    }
  }

  void run() {
    Token head = ident();
    if (head.text == "language") {
      languageHeader();
    } else if (head.text == "problem") {
      problemHeader();
    } else {
      fail("a definition starts with 'language' or 'problem'", head.loc);
    }
    while (peek().kind != Tok::End) statement();
    finish();
  }

  std::shared_ptr<LanguageDefinition> lang;
  std::shared_ptr<EquivalenceProblem> problem;

 private:
  static std::string strip(const std::string& what) {
    // ParseError messages carry "line:col: " already; keep only the text.
    size_t a = what.find(": ");
    return a == std::string::npos ? what : what.substr(a + 2);
  }

  [[noreturn]] void fail(const std::string& msg, Location loc) const { throw DefinitionError(path_, loc, msg); }

  const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool isPunct(const char* p, size_t k = 0) const { return peek(k).kind == Tok::Punct && peek(k).text == p; }
  bool isWord(const char* w, size_t k = 0) const { return peek(k).kind == Tok::Ident && peek(k).text == w; }
  bool acceptPunct(const char* p) {
    if (!isPunct(p)) return false;
    next();
    return true;
  }
  bool acceptWord(const char* w) {
    if (!isWord(w)) return false;
    next();
    return true;
  }
  void expect(const char* p) {
    if (!acceptPunct(p)) fail(std::string("expected '") + p + "' but found '" + peek().text + "'", peek().loc);
  }
  Token ident() {
    if (peek().kind != Tok::Ident) fail("expected a name but found '" + peek().text + "'", peek().loc);
    return next();
  }
  BigInt number() {
    bool neg = acceptPunct("-");
    if (peek().kind != Tok::Number) fail("expected a number", peek().loc);
    BigInt v(next().text);
    return neg ? BigInt(-v) : v;
  }

  std::vector<Signature*> targets() {
    std::vector<Signature*> out;
    if (lang) out.push_back(&lang->sig);
    if (problem) {
      out.push_back(&problem->left->sig);
      if (problem->right != problem->left) out.push_back(&problem->right->sig);
    }
    return out;
  }

  std::vector<LanguageDefinition*> targetLangs() {
    std::vector<LanguageDefinition*> out;
    if (lang) out.push_back(lang.get());
    if (problem) {
      out.push_back(problem->left.get());
      if (problem->right != problem->left) out.push_back(problem->right.get());
    }
    return out;
  }

  Signature& primarySig() { return lang ? lang->sig : problem->left->sig; }

  Term term(Signature& sig) {
    scope_.sig = &sig;
    Location loc = peek().loc;
    try {
      TermParser p(toks_, pos_, scope_);
      Term t = p.parseExpr();
      pos_ = p.position();
      return t;
    } catch (const ParseError& e) {
      fail(strip(e.what()), e.where);
    } catch (const SortError& e) {
      fail(e.what(), loc);
    }
  }

  Term formula(Signature& sig) {
    Location loc = peek().loc;
    Term t = term(sig);
    if (t->sort != sorts::Bool()) fail("constraint must have sort Bool", loc);
    return t;
  }

  void languageHeader() {
    Token name = ident();
    lang = std::make_shared<LanguageDefinition>();
    if (acceptWord("extends")) {
      Token base = ident();
      if (!lib_.hasLanguage(base.text)) fail("unknown language '" + base.text + "'", base.loc);
      auto b = lib_.language(base.text, overrides_);
      *lang = *b;
      for (auto& [p, v] : lang->params) scope_.macros[p] = mkInt(v);
    }
    lang->name = name.text;
    expect(";");
  }

  LangRef langRef() {
    Token n = ident();
    LangRef r{n.text, {}};
    if (!lib_.hasLanguage(n.text)) fail("unknown language '" + n.text + "'", n.loc);
    if (acceptPunct("(")) {
      do {
        Token p = ident();
        expect("=");
        r.params[p.text] = number();
      } while (acceptPunct(","));
      expect(")");
    }
    return r;
  }

  void problemHeader() {
    Token name = ident();
    problem = std::make_shared<EquivalenceProblem>();
    problem->name = name.text;
    problem->row = name.text;
    expect(";");
    LangRef l, r;
    if (acceptWord("uses")) {
      l = r = langRef();
      expect(";");
    } else {
      if (!acceptWord("left")) fail("a problem names its languages with 'uses' or 'left'/'right'", peek().loc);
      l = langRef();
      expect(";");
      if (!acceptWord("right")) fail("expected 'right'", peek().loc);
      r = langRef();
      expect(";");
    }
    try {
      problem->left = std::make_shared<LanguageDefinition>(*lib_.language(l.name, l.params));
      problem->right = l == r ? problem->left : std::make_shared<LanguageDefinition>(*lib_.language(r.name, r.params));
    } catch (const DefinitionError&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what(), name.loc);
    }
    for (auto* ld : targetLangs())
      for (auto& [p, v] : ld->params) scope_.macros[p] = mkInt(v);
  }

  void statement() {
    Token kw = ident();
    const std::string& k = kw.text;
    if (k == "param") return param(kw);
    if (k == "sort") return sortDecl(kw);
    if (k == "subsort") return subsortDecl(kw);
    if (k == "config") return configDecl(kw);
    if (k == "constructor") return symbolDecl(kw, SymKind::Constructor);
    if (k == "axiomatized") return symbolDecl(kw, SymKind::Axiomatized);
    if (k == "builtin") return symbolDecl(kw, SymKind::Builtin);
    if (k == "var") return varDecl();
    if (k == "id") return idDecl();
    if (k == "define") return defineDecl();
    if (k == "rule") return ruleDecl(false);
    if (k == "replace") return ruleDecl(true);
    if (problem) {
      if (k == "goal" || k == "circularity" || k == "base") return formulaDecl(k);
      if (k == "const") return constDecl(kw);
      if (k == "query") return queryDecl(kw);
      if (k == "row") return rowDecl();
      if (k == "tag") return tagDecl();
    }
    fail("unexpected statement '" + k + "'", kw.loc);
  }

  void param(const Token& kw) {
    if (!lang) fail("parameters belong to language definitions", kw.loc);
    Token n = ident();
    expect("=");
    BigInt v = number();
    expect(";");
    auto it = overrides_.find(n.text);
    if (it != overrides_.end()) v = it->second;
    lang->params[n.text] = v;
    scope_.macros[n.text] = mkInt(v);
  }

  void sortDecl(const Token& kw) {
    std::vector<Token> names;
    while (!isPunct(";")) names.push_back(ident());
    expect(";");
    try {
      for (auto* s : targets())
        for (auto& n : names) s->addSort(n.text, SortKind::Constructor);
    } catch (const SortError& e) {
      fail(e.what(), kw.loc);
    }
  }

  SortId sortName(Signature& sig) {
    Token t = ident();
    SortId s = intern(t.text);
    if (!sig.hasSort(s)) fail("unknown sort '" + t.text + "'", t.loc);
    return s;
  }

  void subsortDecl(const Token& kw) {
    SortId lo = sortName(primarySig());
    expect("<");
    SortId hi = sortName(primarySig());
    expect(";");
    try {
      for (auto* s : targets()) s->addSubsort(lo, hi);
    } catch (const SortError& e) {
      fail(e.what(), kw.loc);
    }
  }

  void configDecl(const Token& kw) {
    if (!lang) fail("the configuration sort belongs to language definitions", kw.loc);
    lang->semantics.configSort = sortName(lang->sig);
    expect(";");
  }

  void symbolDecl(const Token& kw, SymKind kind) {
    std::vector<Token> names;
    while (!isPunct(":")) names.push_back(ident());
    if (names.empty()) fail("expected symbol names", kw.loc);
    expect(":");
    std::vector<SortId> sorts;
    bool arrow = false;
    while (!isPunct(";")) {
      if (acceptPunct("->")) {
        arrow = true;
        continue;
      }
      sorts.push_back(sortName(primarySig()));
    }
    expect(";");
    if (sorts.empty()) fail("missing result sort", kw.loc);
    if (arrow && sorts.size() < 1) fail("missing result sort", kw.loc);
    Rank r;
    r.result = sorts.back();
    sorts.pop_back();
    r.args = std::move(sorts);
    try {
      for (auto* s : targets())
        for (auto& n : names) s->addSymbol(n.text, kind, r);
    } catch (const SortError& e) {
      fail(e.what(), kw.loc);
    }
  }

  void varDecl() {
    std::vector<Token> names;
    while (!isPunct(":")) names.push_back(ident());
    expect(":");
    SortId s = sortName(primarySig());
    expect(";");
    for (auto& n : names) scope_.vars[n.text] = mkVar(n.text, s);
  }

  void idDecl() {
    while (!isPunct(";")) scope_.ids.insert(ident().text);
    expect(";");
  }

  void defineDecl() {
    Token n = ident();
    expect("=");
    Term t = term(primarySig());
    expect(";");
    scope_.macros[n.text] = t;
  }

  std::string label() {
    if (!isPunct("[") || peek(1).kind != Tok::Ident) return "";
    size_t k = 2;
    while (peek(k).kind == Tok::Ident || isPunct("-", k)) ++k;
    if (!isPunct("]", k)) return "";
    next();
    std::string l;
    while (!isPunct("]")) l += next().text;
    next();
    return l;
  }

  void ruleDecl(bool replace) {
    Location loc = peek().loc;
    std::string lbl = label();
    Term lhs = term(primarySig());
    expect("=>");
    Term rhs = term(primarySig());
    Term cond = nullptr;
    if (acceptWord("if")) cond = formula(primarySig());
    expect(";");
    const Signature& g = globalSignature();
    if (!g.leq(rhs->sort, lhs->sort) && !g.leq(lhs->sort, rhs->sort))
      fail("rule sides have unrelated sorts " + nameOf(lhs->sort) + " and " + nameOf(rhs->sort), loc);
    VarSet lv = freeVariables(lhs);
    if (cond) freeVariables(cond, lv);
    for (Term v : freeVariables(rhs))
      if (!lv.count(v)) fail("variable " + v->str() + " of the right-hand side is not bound by the rule", loc);
    RewriteRule rule{lbl, lhs, rhs, cond};
    bool axiom = lhs->tag == Tag::App && lhs->kind == SymKind::Axiomatized;
    for (auto* ld : targetLangs()) {
      if (axiom) {
        if (replace) fail("'replace' applies to semantic rules", loc);
        ld->axioms.add(rule);
        continue;
      }
      if (lhs->tag != Tag::App || lhs->kind != SymKind::Constructor)
        fail("a semantic rule is rooted at a constructor", loc);
      auto& rules = ld->semantics.rules;
      if (replace) {
        auto it = std::find_if(rules.begin(), rules.end(), [&](const RewriteRule& r) { return r.label == lbl; });
        if (lbl.empty() || it == rules.end()) fail("no rule labelled '" + lbl + "' to replace", loc);
        *it = rule;
      } else {
        rules.push_back(rule);
      }
    }
  }

  Direction direction(Direction dflt) {
    if (acceptWord("fwd")) return Direction::Fwd;
    if (acceptWord("bwd")) return Direction::Bwd;
    if (acceptWord("both")) return Direction::Both;
    return dflt;
  }

  void formulaDecl(const std::string& kind) {
    Location loc = peek().loc;
    SimulationFormula f;
    f.label = label();
    if (kind != "goal") f.direction = direction(Direction::Both);
    f.lhs = term(problem->left->sig);
    expect("~");
    f.rhs = term(problem->right->sig);
    f.constraint = mkTrue();
    if (acceptWord("if")) f.constraint = formula(problem->left->sig);
    expect(";");
    if (f.lhs->sort != problem->left->semantics.configSort && !problem->left->sig.leq(f.lhs->sort, problem->left->semantics.configSort))
      fail("left side is not a configuration of " + problem->left->name, loc);
    if (f.rhs->sort != problem->right->semantics.configSort && !problem->right->sig.leq(f.rhs->sort, problem->right->semantics.configSort))
      fail("right side is not a configuration of " + problem->right->name, loc);
    auto& dst = kind == "goal" ? problem->goals : kind == "base" ? problem->base : problem->circularities;
    if (f.label.empty()) f.label = kind + std::to_string(dst.size() + 1);
    dst.push_back(f);
  }

  std::vector<std::string> idList() {
    std::vector<std::string> out;
    expect("(");
    if (!isPunct(")")) {
      do {
        acceptPunct("'");
        out.push_back(ident().text);
      } while (acceptPunct(","));
    }
    expect(")");
    return out;
  }

  void constDecl(const Token& kw) {
    ReadWriteSpec s;
    s.name = ident().text;
    Token role = ident();
    if (role.text == "exp") s.role = SchemaRole::Expression;
    else if (role.text == "bool") s.role = SchemaRole::Condition;
    else if (role.text == "stmt") s.role = SchemaRole::Statement;
    else fail("schema role is exp, bool or stmt", role.loc);
    while (!isPunct(";")) {
      Token w = ident();
      if (w.text == "reads") s.reads = idList();
      else if (w.text == "writes") s.writes = idList();
      else fail("expected reads(...) or writes(...)", w.loc);
    }
    expect(";");
    if (s.role != SchemaRole::Statement && !s.writes.empty()) fail("only statements have a write-set", kw.loc);
    try {
      for (auto* ld : targetLangs()) declareSchemaFunctions(ld->sig, s);
    } catch (const std::exception& e) {
      fail(e.what(), kw.loc);
    }
    problem->schema.push_back(std::move(s));
  }

  void queryDecl(const Token& kw) {
    Query q;
    Token what = ident();
    if (what.text == "prove" || what.text == "equiv") {
      q.kind = what.text == "prove" ? Query::Kind::Prove : Query::Kind::Equiv;
      q.direction = direction(what.text == "prove" ? Direction::Fwd : Direction::Both);
      if (acceptWord("partial")) q.mode = SimKind::Partial;
      else if (acceptWord("full")) q.mode = SimKind::Full;
    } else if (what.text == "run") {
      q.kind = Query::Kind::Run;
      q.term = term(problem->left->sig);
      if (acceptWord("steps")) q.steps = static_cast<int>(number());
    } else {
      fail("query is prove, equiv or run", kw.loc);
    }
    expect(";");
    problem->queries.push_back(q);
  }

  void rowDecl() {
    std::string r = ident().text;
    std::replace(r.begin(), r.end(), '_', ' ');
    problem->row = r;
    expect(";");
  }

  void tagDecl() {
    Token t = ident();
    std::string v = "1";
    if (acceptPunct("=")) v = ident().text;
    problem->attributes[t.text] = v;
    expect(";");
  }

  void finish() {
    if (lang) {
      if (!lang->semantics.configSort) fail("language declares no configuration sort", peek().loc);
      auto errs = validateLanguage(*lang);
      if (!errs.empty()) fail(errs.front(), peek().loc);
      return;
    }
    if (problem->goals.empty() && std::none_of(problem->queries.begin(), problem->queries.end(),
                                               [](const Query& q) { return q.kind == Query::Kind::Run; }))
      fail("problem declares neither goals nor run queries", peek().loc);
    try {
      abstractSchema(*problem);
    } catch (const std::exception& e) {
      fail(e.what(), peek().loc);
    }
    auto errs = validateProblem(*problem);
    if (!errs.empty()) fail(errs.front(), peek().loc);
  }

  DefinitionLibrary& lib_;
  std::string path_;
  std::map<std::string, BigInt> overrides_;
  std::vector<Token> toks_;
  size_t pos_ = 0;
  ParseScope scope_;
};

}  // namespace

DefinitionLibrary::DefinitionLibrary() {
  for (auto& [path, text] : bundledFiles())
    if (path.size() > 4 && path.substr(path.size() - 4) == ".def") addSource(path, text);
}

DefinitionLibrary& DefinitionLibrary::bundled() {
  static DefinitionLibrary lib;
  return lib;
}

void DefinitionLibrary::addSource(const std::string& path, std::string text) {
  auto [name, isLang] = headerOf(text);
  if (name.empty()) throw DefinitionError(path, Location{}, "a definition starts with 'language' or 'problem'");
  sources_[name] = Source{path, std::move(text), isLang};
  if (isLang)
    for (auto it = cache_.begin(); it != cache_.end();)
      it = it->first.rfind(name + ";", 0) == 0 || it->first == name ? cache_.erase(it) : std::next(it);
}

std::vector<std::string> DefinitionLibrary::languageNames() const {
  std::vector<std::string> out;
  for (auto& [n, s] : sources_)
    if (s.isLanguage) out.push_back(n);
  return out;
}

std::vector<std::string> DefinitionLibrary::problemNames() const {
  std::vector<std::string> out;
  for (auto& [n, s] : sources_)
    if (!s.isLanguage) out.push_back(n);
  return out;
}

bool DefinitionLibrary::hasLanguage(const std::string& name) const {
  auto it = sources_.find(name);
  return it != sources_.end() && it->second.isLanguage;
}

bool DefinitionLibrary::hasProblem(const std::string& name) const {
  auto it = sources_.find(name);
  return it != sources_.end() && !it->second.isLanguage;
}

std::shared_ptr<const LanguageDefinition> DefinitionLibrary::language(const std::string& name,
                                                                      const std::map<std::string, BigInt>& params) {
  std::string key = cacheKey(name, params);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  auto src = sources_.find(name);
  if (src == sources_.end() || !src->second.isLanguage)
    throw DefinitionError(name, Location{}, "unknown language '" + name + "'");
  Loader l(*this, src->second.path, src->second.text, params);
  l.run();
  std::shared_ptr<const LanguageDefinition> out = l.lang;
  cache_[key] = out;
  return out;
}

std::shared_ptr<EquivalenceProblem> DefinitionLibrary::problem(const std::string& name) {
  auto src = sources_.find(name);
  if (src == sources_.end() || src->second.isLanguage)
    throw DefinitionError(name, Location{}, "unknown problem '" + name + "'");
  Loader l(*this, src->second.path, src->second.text, {});
  l.run();
  return l.problem;
}

DefinitionLibrary::Loaded DefinitionLibrary::load(const std::string& path, const std::string& text) {
  Loader l(*this, path, text, {});
  l.run();
  return Loaded{l.lang, l.problem};
}

DefinitionLibrary::Loaded DefinitionLibrary::loadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DefinitionError(path, Location{}, "cannot read file");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  auto [name, isLang] = headerOf(text);
  // A language file becomes resolvable by name for later problems.
  if (isLang) addSource(path, text);
  return load(path, text);
}

const std::string& DefinitionLibrary::sourceOf(const std::string& name) const {
  auto it = sources_.find(name);
  if (it == sources_.end()) throw DefinitionError(name, Location{}, "unknown definition '" + name + "'");
  return it->second.text;
}

const std::string& DefinitionLibrary::pathOf(const std::string& name) const {
  auto it = sources_.find(name);
  if (it == sources_.end()) throw DefinitionError(name, Location{}, "unknown definition '" + name + "'");
  return it->second.path;
}

std::shared_ptr<const LanguageDefinition> buildImp1() { return DefinitionLibrary::bundled().language("imp1"); }

std::shared_ptr<const LanguageDefinition> buildImp2(int k) {
  return DefinitionLibrary::bundled().language("imp2", {{"k", BigInt(k)}});
}

std::vector<std::string> validateLanguage(const LanguageDefinition& lang) {
  std::vector<std::string> errs;
  try {
    lang.sig.validate();
  } catch (const SortError& e) {
    errs.push_back(e.what());
  }
  TopMostVerdict tm = checkTopMost(lang.semantics, lang.sig);
  if (!tm.ok) {
    std::string names;
    for (auto& n : tm.offending) names += (names.empty() ? "" : ", ") + n;
    errs.push_back("not top-most: configuration sort " + nameOf(lang.semantics.configSort) +
                   " is an argument of " + names);
  }
  auto check = [&](const RewriteRule& r, const char* what) {
    for (Term t : {r.lhs, r.rhs, r.cond}) {
      if (!t) continue;
      try {
        checkSorts(lang.sig, t);
      } catch (const SortError& e) {
        errs.push_back(std::string(what) + " " + (r.label.empty() ? show(r.lhs) : r.label) + ": " + e.what());
      }
    }
  };
  for (auto& r : lang.semantics.rules) {
    check(r, "rule");
    if (!lang.sig.leq(r.lhs->sort, lang.semantics.configSort))
      errs.push_back("rule " + r.label + " does not rewrite configurations");
  }
  for (auto& [f, eqs] : lang.axioms.all())
    for (auto& r : eqs) check(r, "equation");
  return errs;
}

std::vector<std::string> validateProblem(const EquivalenceProblem& p) {
  std::vector<std::string> errs;
  for (auto* l : {p.left.get(), p.right.get()})
    for (auto& e : validateLanguage(*l)) errs.push_back(l->name + ": " + e);
  auto check = [&](const SimulationFormula& f) {
    try {
      checkSorts(p.left->sig, f.lhs);
      checkSorts(p.right->sig, f.rhs);
      checkSorts(p.left->sig, f.constraint);
    } catch (const SortError& e) {
      errs.push_back(f.label + ": " + e.what());
    }
    if (f.constraint->hasConstructor())
      errs.push_back(f.label + ": constraint mentions a constructor term");
  };
  for (auto& f : p.goals) check(f);
  for (auto& f : p.circularities) check(f);
  for (auto& f : p.base) check(f);
  return errs;
}

std::vector<ExpectedVerdict> expectedVerdicts() {
  std::vector<ExpectedVerdict> out;
  for (auto& [path, text] : bundledFiles()) {
    if (path != "expected.tsv") continue;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      ExpectedVerdict v;
      std::string dir, mode;
      if (!(ls >> v.problem >> dir >> mode >> v.verdict)) continue;
      v.direction = dir == "fwd" ? Direction::Fwd : Direction::Bwd;
      v.mode = mode == "full" ? SimKind::Full : SimKind::Partial;
      out.push_back(v);
    }
  }
  return out;
}

std::vector<std::string> corpusProblems() {
  std::vector<std::string> out;
  for (auto& [path, text] : bundledFiles())
    if (path.rfind("problems/", 0) == 0) {
      auto [name, isLang] = headerOf(text);
      if (!isLang && !name.empty()) out.push_back(name);
    }
  return out;
}

}  // namespace lcs

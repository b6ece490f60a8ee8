#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "lcs/prover.hpp"
#include "properties.hpp"

namespace lcs::test {

inline Solver& solver() {
  static Solver s;
  return s;
}

struct Scope {
  ParseScope ps;
  explicit Scope(const LanguageDefinition& lang, std::initializer_list<const char*> ids = {}) {
    ps.sig = &lang.sig;
    for (const char* i : ids) ps.ids.insert(i);
  }
  Scope& var(const char* name, SortId sort) {
    ps.vars[name] = mkVar(name, sort);
    return *this;
  }
  Term operator()(const std::string& text) { return parseTerm(text, ps); }
};

inline std::string describe(const props::Report& r) {
  std::string out = std::to_string(r.checks) + " checks";
  for (auto& v : r.violations) out += "\n" + v;
  return out;
}

inline std::shared_ptr<EquivalenceProblem> problem(const std::string& name) {
  return DefinitionLibrary::bundled().problem(name);
}

inline std::vector<Term> trace(const LanguageDefinition& lang, Term start, size_t budget = 100000) {
  Engine eng(lang, nullptr, EngineOptions{4, 10000, true});
  std::vector<Term> out{eng.normalize(start)};
  while (out.size() <= budget) {
    auto next = eng.stepConcrete(out.back());
    if (!next) break;
    out.push_back(*next);
  }
  return out;
}

inline Term runToEnd(const LanguageDefinition& lang, Term start, size_t* steps = nullptr, size_t budget = 100000) {
  std::vector<Term> tr = trace(lang, start, budget);
  Term t = tr.back();
  size_t n = tr.size() - 1;
  if (steps) *steps = n;
  return t;
}

inline Term runQuery(const EquivalenceProblem& p, size_t index, size_t* steps = nullptr) {
  size_t seen = 0;
  for (auto& q : p.queries) {
    if (q.kind != Query::Kind::Run) continue;
    if (seen++ == index) return runToEnd(*p.left, q.term, steps);
  }
  throw std::out_of_range("no such run query");
}

}  // namespace lcs::test

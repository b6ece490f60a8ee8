#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "lcs/subst.hpp"
#include "lcs/term.hpp"

namespace lcs {

struct SolverConfig {
  std::string command;  // empty: $LCS_SOLVER, else "z3 -in"
  int timeoutMillis = 5000;
  std::string logic;    // empty: solver default (all theories)
  std::string logFile;
};

enum class SatKind : uint8_t { Sat, Unsat, Unknown };

struct SatResult {
  SatKind kind = SatKind::Unknown;
  std::string reason;
  bool sat() const { return kind == SatKind::Sat; }
  bool unsat() const { return kind == SatKind::Unsat; }
  bool unknown() const { return kind == SatKind::Unknown; }
};

enum class Validity : uint8_t { Valid, Invalid, Unknown };

class SolverTransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QueryPurityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SolverStats {
  size_t queries = 0;
  size_t cacheHits = 0;
  size_t restarts = 0;
};

using Valuation = std::map<Term, Term, TermLess>;

// SMT-LIB text of a satisfiability query for phi; throws QueryPurityError
// if phi mentions a constructor or axiomatized symbol.
std::string encodeQuery(Term phi, bool withModel = false);

class Solver {
 public:
  explicit Solver(SolverConfig cfg = {});
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  SatResult isSatisfiable(Term phi);
  Validity isValid(Term phi);
  // Sat with a valuation of the free Int/Bool variables, Unsat -> nullopt.
  std::optional<Valuation> checkSatWithModel(Term phi, SatResult* verdict = nullptr);

  const SolverStats& stats() const { return stats_; }
  const SolverConfig& config() const { return cfg_; }
  std::string lastQuery() const { return lastQuery_; }
  // Cached unsat query texts, for re-checking.
  std::vector<std::string> unsatQueries() const;
  SatResult runRaw(const std::string& query);

 private:
  struct Process;
  SatResult send(const std::string& query, std::string* modelText);
  void restart();

  SolverConfig cfg_;
  std::unique_ptr<Process> proc_;
  std::unordered_map<std::string, SatResult> cache_;
  std::unordered_map<Term, SatResult> termCache_;
  SolverStats stats_;
  std::string lastQuery_;
  FILE* log_ = nullptr;
};

}  // namespace lcs

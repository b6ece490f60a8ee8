#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcs {

using Name = uint32_t;

Name intern(const std::string& s);
const std::string& nameOf(Name n);

using SortId = Name;

enum class SortKind : uint8_t { Builtin, Constructor };
enum class SymKind : uint8_t { Builtin, Constructor, Axiomatized };

namespace sorts {
SortId Int();
SortId Bool();
SortId Id();
SortId Env();
SortId Any();
}  // namespace sorts

bool isBuiltinSort(SortId s);

struct Rank {
  std::vector<SortId> args;
  SortId result = 0;
};

enum class Theory : uint8_t {
  None,
  Add, Sub, Mul, Div, Mod, Neg,
  Lt, Le, Gt, Ge, Eq, Ne,
  And, Or, Not, Implies, Ite,
  Min, Max,
  Lookup, Update, EmptyEnv,
  Uninterpreted
};

struct FunctionSymbol {
  Name name = 0;
  SymKind kind = SymKind::Constructor;
  std::vector<Rank> ranks;
  Theory theory = Theory::None;
};

class SortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Theory symbols for the fixed builtin sorts; shared by every signature.
const FunctionSymbol* theorySymbol(Name name);
const FunctionSymbol* theorySymbol(Theory th);
Name theoryName(Theory th);

class Signature {
 public:
  Signature();

  void addSort(const std::string& name, SortKind kind);
  bool hasSort(SortId s) const;
  SortKind sortKind(SortId s) const;
  const std::set<SortId>& allSorts() const { return sorts_; }

  void addSubsort(SortId lower, SortId upper);
  bool leq(SortId a, SortId b) const;
  const std::vector<std::pair<SortId, SortId>>& subsortPairs() const { return declaredSubsorts_; }

  void addSymbol(const std::string& name, SymKind kind, Rank rank, Theory th = Theory::None);
  const FunctionSymbol* find(Name name) const;
  const FunctionSymbol* find(const std::string& name) const { return find(intern(name)); }
  std::vector<const FunctionSymbol*> symbols() const;

  // Least result sort among the ranks whose argument sorts accept argSorts.
  std::optional<SortId> resultSort(const FunctionSymbol& f, const std::vector<SortId>& argSorts) const;

  void validate() const;

 private:
  friend Signature& globalSignatureMutable();
  bool global_ = false;
  void closeSubsorts();
  std::set<SortId> sorts_;
  std::map<SortId, SortKind> kinds_;
  std::vector<std::pair<SortId, SortId>> declaredSubsorts_;
  std::set<std::pair<SortId, SortId>> leq_;
  std::map<Name, FunctionSymbol> symbols_;
};

// Union of every signature built in this process; used to recompute least
// sorts after substitution, when no particular signature is at hand.
const Signature& globalSignature();

}  // namespace lcs

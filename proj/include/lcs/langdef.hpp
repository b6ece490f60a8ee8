#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lcs/engine.hpp"
#include "lcs/syntax.hpp"

namespace lcs {

enum class SimKind : uint8_t { Full, Partial };
enum class Direction : uint8_t { Fwd, Bwd, Both };

std::string toString(SimKind k);
std::string toString(Direction d);

struct SimulationFormula {
  std::string label;
  Term lhs = nullptr;
  Term rhs = nullptr;
  Term constraint = nullptr;
  SimKind kind = SimKind::Full;
  Direction direction = Direction::Both;  // circularities and base cases only
};

SimulationFormula swapSides(const SimulationFormula& f);

enum class SchemaRole : uint8_t { Expression, Condition, Statement };

struct ReadWriteSpec {
  std::string name;
  SchemaRole role = SchemaRole::Expression;
  std::vector<std::string> reads;
  std::vector<std::string> writes;
};

struct Query {
  enum class Kind : uint8_t { Prove, Equiv, Run } kind = Kind::Prove;
  Direction direction = Direction::Fwd;
  SimKind mode = SimKind::Full;
  Term term = nullptr;
  int steps = 1000;
};

struct EquivalenceProblem {
  std::string name;
  std::string row;       // benchmark row this problem belongs to
  std::string note;
  std::shared_ptr<LanguageDefinition> left;
  std::shared_ptr<LanguageDefinition> right;
  std::vector<SimulationFormula> goals;
  std::vector<SimulationFormula> circularities;
  std::vector<SimulationFormula> base;
  std::vector<ReadWriteSpec> schema;
  std::vector<Query> queries;
  std::map<std::string, std::string> attributes;
};

class DefinitionError : public std::runtime_error {
 public:
  DefinitionError(const std::string& file, Location loc, const std::string& msg);
  std::string file;
  Location where;
};

// Resolves `extends`, `uses`, `left` and `right` references to other definitions.
class DefinitionLibrary {
 public:
  DefinitionLibrary();  // seeded with the bundled data files
  static DefinitionLibrary& bundled();

  void addSource(const std::string& path, std::string text);
  std::vector<std::string> languageNames() const;
  std::vector<std::string> problemNames() const;
  bool hasLanguage(const std::string& name) const;
  bool hasProblem(const std::string& name) const;

  std::shared_ptr<const LanguageDefinition> language(const std::string& name,
                                                     const std::map<std::string, BigInt>& params = {});
  std::shared_ptr<EquivalenceProblem> problem(const std::string& name);

  // Loads a language or a problem from text; `path` is used in diagnostics.
  struct Loaded {
    std::shared_ptr<const LanguageDefinition> language;
    std::shared_ptr<EquivalenceProblem> problem;
  };
  Loaded load(const std::string& path, const std::string& text);
  Loaded loadFile(const std::string& path);

  const std::string& sourceOf(const std::string& name) const;
  const std::string& pathOf(const std::string& name) const;

 private:
  struct Source {
    std::string path;
    std::string text;
    bool isLanguage = false;
  };
  std::map<std::string, Source> sources_;
  std::map<std::string, std::shared_ptr<const LanguageDefinition>> cache_;
};

std::shared_ptr<const LanguageDefinition> buildImp1();
std::shared_ptr<const LanguageDefinition> buildImp2(int k = 10);

// Replaces each structural variable named by a spec with a fresh constant whose
// behaviour is given by uninterpreted functions over its read-set.
void abstractSchema(EquivalenceProblem& problem);

// Declares the uninterpreted functions of a schema constant (iota_NAME, iota_NAME_y) so constraints can mention them.
void declareSchemaFunctions(Signature& sig, const ReadWriteSpec& spec);

// Validity checks shared by `check`: top-most, sorts, declared variables.
std::vector<std::string> validateLanguage(const LanguageDefinition& lang);
std::vector<std::string> validateProblem(const EquivalenceProblem& p);

struct ExpectedVerdict {
  std::string problem;
  Direction direction;
  SimKind mode;
  std::string verdict;  // Proved | Failed
};

std::vector<ExpectedVerdict> expectedVerdicts();

// Names of the bundled problem files, in corpus order.
std::vector<std::string> corpusProblems();

}  // namespace lcs

#pragma once

#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lcs/term.hpp"

namespace lcs {

using Subst = std::unordered_map<Term, Term>;
using VarSet = std::set<Term, TermLess>;

Term substitute(const Subst& s, Term t);
// Same node with new children; the least sort is recomputed.
Term rebuild(Term t, std::vector<Term> args);
Subst compose(const Subst& outer, const Subst& inner);

VarSet freeVariables(Term t);
void freeVariables(Term t, VarSet& out);
bool occurs(Term var, Term t);

struct Renamed {
  Term term;
  Term constraint;
  Subst renaming;
};

// Renames every free variable of (t, phi) to a process-fresh name.
Renamed freshRename(Term t, Term phi, const VarSet& avoid = {});
Subst freshRenaming(const VarSet& vars);

SortId sortOf(Term t);
// Throws SortError naming the offending position when t is ill-sorted.
void checkSorts(const Signature& sig, Term t);

}  // namespace lcs

#pragma once

#include "lcs/term.hpp"

namespace lcs {

// Bottom-up builtin simplification: constant folding, linear normal form
// for Int arithmetic, boolean absorption, canonical env update chains.
// Constructor and axiomatized spines are kept; their children are simplified.
Term simplify(Term t);

// simplify() restricted to the contract of ground evaluation.
Term evaluateGround(Term t);

BigInt euclidDiv(const BigInt& a, const BigInt& b);
BigInt euclidMod(const BigInt& a, const BigInt& b);

}  // namespace lcs

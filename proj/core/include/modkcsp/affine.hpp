#pragma once

#include "modkcsp/counting.hpp"
#include "modkcsp/linear_gf2.hpp"

namespace modkcsp {

/// Express an affine relation as a linear system over its coordinates whose
/// solution set is exactly the satisfying set. Built from a basis of the
/// affine span by completing to the orthogonal complement. The empty relation
/// yields the canonical inconsistent system; a non-affine relation is a
/// contract violation.
LinearSystemGF2 relation_to_system(const Relation& r);

/// Concatenate the per-constraint systems, embedding columns through each
/// application's argument tuple. Repeated variables sum their coefficients
/// mod 2. Every relation used must be affine.
LinearSystemGF2 formula_to_system(const Formula& f);

/// 0 if inconsistent, else 2^(num_vars - rank). Declared-but-unconstrained
/// variables enter the exponent. Polynomial in the formula size; no
/// enumeration cap applies.
BigInt count_affine(const Formula& f);
std::uint64_t count_affine_mod(const Formula& f, Modulus m);

}  // namespace modkcsp

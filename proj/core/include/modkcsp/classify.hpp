#pragma once

#include <optional>
#include <set>
#include <string>

#include "modkcsp/implement.hpp"
#include "modkcsp/relation.hpp"

namespace modkcsp {

// Structural relation properties. Empty relations are 0-valid/1-valid false,
// C-closed vacuously, affine by convention (the inconsistent system).
bool is_0_valid(const Relation& r);
bool is_1_valid(const Relation& r);
bool is_c_closed(const Relation& r);
bool is_affine(const Relation& r);

/// Smallest superset of `tuples` closed under coordinatewise a^b^c; equals the
/// affine span (offset + GF(2) span of differences). Input must be nonempty.
std::set<Bits> affine_closure(const std::set<Bits>& tuples, int arity);

struct RelationProperties {
    bool zero_valid = false;
    bool one_valid = false;
    bool c_closed = false;
    bool affine = false;
    bool empty = false;
};

struct PropertyReport {
    std::map<std::string, RelationProperties> per_relation;
    RelationProperties set_level;  // conjunction over member relations
    struct AffineViolation {
        std::string relation;
        Bits a, b, c;  // a^b^c is not in the satisfying set
    };
    std::optional<AffineViolation> affine_violation;  // set when !set_level.affine
};

PropertyReport property_report(const RelationSet& S);

enum class Outcome { kFpAffine, kFpParityCClosed, kHard };

std::string to_string(Outcome o);

struct DichotomyVerdict {
    Outcome outcome;
    Modulus k;
    PropertyReport properties;
    std::optional<ReductionCertificate> certificate;  // present iff Hard
};

/// The dichotomy: FP if S is affine, FP if k=2 and S is C-closed (the count
/// is always even), otherwise Hard with a best-effort reduction certificate.
DichotomyVerdict classify(const RelationSet& S, Modulus m, const SearchBounds& bounds = {});

/// The k=2 C-closed fast path: 0 for every formula with at least one
/// variable (solutions pair up under complement), 1 for the degenerate
/// variable-free formula. nullopt when the fast path does not apply.
std::optional<std::uint64_t> parity_fast_count(const Formula& f);

}  // namespace modkcsp

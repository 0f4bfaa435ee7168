#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modkcsp/counting.hpp"
#include "modkcsp/formula.hpp"

namespace modkcsp {

/// The Boolean function a witness implements, given by its truth table.
using TargetFunction = Relation;

/// A constraint collection over function variables x and auxiliary variables
/// y. Faithful means: every x-assignment with f(x)=1 has exactly one
/// extension to y satisfying all constraints, and every x-assignment with
/// f(x)=0 has none.
struct ImplementationWitness {
    std::vector<std::string> function_vars;
    std::vector<std::string> aux_vars;
    RelationSet relations;  // relations the constraints draw from
    struct Constraint {
        std::string relation;
        std::vector<std::string> args;
        friend bool operator==(const Constraint&, const Constraint&) = default;
    };
    std::vector<Constraint> constraints;

    /// The witness constraints as a Formula over function_vars + aux_vars.
    Formula to_formula() const;

    friend bool operator==(const ImplementationWitness&, const ImplementationWitness&) = default;
};

struct SearchBounds {
    int max_aux = 3;
    int max_constraints = 5;
};

struct FaithfulnessCheck {
    bool ok = false;
    // Set when !ok: the offending x-assignment and how many y-extensions it had.
    std::uint64_t bad_assignment = 0;
    std::uint64_t extension_count = 0;
    std::string message;
};

FaithfulnessCheck verify_faithful(const ImplementationWitness& w, const TargetFunction& f,
                                  int enum_cap = kDefaultEnumCap);

/// Weaker check: "exactly one" relaxed to "exactly one mod k" (0 mod k for
/// false points). Every strictly faithful witness passes for every k.
FaithfulnessCheck verify_faithful_mod(const ImplementationWitness& w, const TargetFunction& f,
                                      Modulus k, int enum_cap = kDefaultEnumCap);

/// Bounded first-hit search for a faithful implementation of f over S.
/// Candidates are ordered by aux count, then constraint count, then
/// lexicographically by (relation name, argument tuple); the first verified
/// witness is returned. Not-found only means nothing exists within bounds.
std::optional<ImplementationWitness> search_implementation(const RelationSet& S,
                                                           const TargetFunction& f,
                                                           const SearchBounds& bounds = {});

/// Joint variant: test each candidate collection against several targets and
/// return the first hit together with the index of the target it implements.
/// Equivalent to running the single-target searches in lockstep.
std::optional<std::pair<int, ImplementationWitness>> search_implementation_any(
    const RelationSet& S, const std::vector<TargetFunction>& targets,
    const SearchBounds& bounds = {});

/// Rewrite every constraint of f through the witness for its relation,
/// introducing fresh auxiliary variables per constraint occurrence
/// (aux_<constraintIndex>_<witnessVarIndex>). Preserves the exact count.
Formula apply_implementations(const Formula& f,
                              const std::map<std::string, ImplementationWitness>& witness_map);

/// Replace T-constrained variables by y1 and F-constrained ones by y0, drop
/// the T/F constraints and add XOR(y0,y1). Requires every other relation in f
/// to be C-closed; the output has exactly twice as many satisfying
/// assignments.
Formula xor_doubling_transform(const Formula& f);

/// Merge all F-constrained variables into one fresh variable x0 and drop the
/// F constraints. Requires every other relation in f to be C-closed; doubles
/// the exact count.
Formula false_var_merge_transform(const Formula& f);

/// Evidence chain for a Hard verdict: which proof case applied, the witnesses
/// found by bounded search, and the doubling transforms (annotated with the
/// factor of k they serve). complete=false records that some bounded search
/// came up empty; the verdict itself never depends on it.
struct ReductionCertificate {
    std::string case_tag;
    struct Entry {
        std::string target;  // name of the implemented function
        std::optional<ImplementationWitness> witness;
    };
    std::vector<Entry> witnesses;
    struct Transform {
        std::string name;
        std::uint64_t factor;  // odd prime or power of two >= 4 dividing k
    };
    std::vector<Transform> transforms;
    std::string target;  // OR0 / OR1 / OR2, empty if none found
    bool complete = false;
};

ReductionCertificate build_reduction_certificate(const RelationSet& S, Modulus m,
                                                 const SearchBounds& bounds = {});

}  // namespace modkcsp

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "modkcsp/formula.hpp"
#include "modkcsp/modmath.hpp"

namespace modkcsp {

using BigInt = boost::multiprecision::cpp_int;

/// Default ceiling on |variables| for assignment enumeration. The CLI can
/// override it via MODKCSP_ENUM_CAP.
constexpr int kDefaultEnumCap = 26;

/// True iff every constraint of f holds under a. a must bind every formula
/// variable (extra bindings are ignored).
bool eval_formula(const Formula& f, const Assignment& a);

/// Constraint tables precomputed for tight enumeration loops. Values are a
/// pure function of the formula.
class CompiledFormula {
  public:
    explicit CompiledFormula(const Formula& f);

    int num_variables() const { return num_variables_; }
    bool eval(std::uint64_t assignment_mask) const;

  private:
    struct Entry {
        std::vector<int> args;
        // arity <= 6 relations use a word-sized truth table; clause relations
        // of any width test against the single falsifying tuple; the rest
        // binary-search the sorted tuple list.
        enum class Kind { kSmallTable, kClauseMiss, kLookup } kind;
        Bits table_or_miss = 0;
        const std::vector<Bits>* tuples = nullptr;
    };
    int num_variables_ = 0;
    std::vector<Entry> entries_;
};

/// Exact satisfying-assignment count by full enumeration. Free variables each
/// double the count. Throws ResourceError above the cap.
BigInt brute_force_count(const Formula& f, int enum_cap = kDefaultEnumCap);

/// brute_force_count reduced mod m. This is the oracle path; the polynomial
/// path for affine formulas lives in affine.hpp.
std::uint64_t count_mod(const Formula& f, Modulus m, int enum_cap = kDefaultEnumCap);

}  // namespace modkcsp

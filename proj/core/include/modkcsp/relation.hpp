#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "modkcsp/error.hpp"

namespace modkcsp {

/// One r-ary tuple over {0,1}, packed into a word. Coordinate 0 is the most
/// significant of the low r bits, so numeric order on Bits equals
/// lexicographic order on the bitstring rendering.
using Bits = std::uint64_t;

constexpr int kMaxArity = 26;

inline int tuple_bit(Bits t, int arity, int coord) {
    return static_cast<int>((t >> (arity - 1 - coord)) & 1);
}

std::string tuple_to_string(Bits t, int arity);
Bits tuple_from_string(const std::string& s);

/// An r-ary Boolean relation stored extensionally as its set of satisfying
/// tuples. Tuples are kept sorted and deduplicated; the empty set is legal
/// (the always-false relation).
class Relation {
  public:
    Relation(std::string name, int arity, std::vector<Bits> satisfying);

    const std::string& name() const { return name_; }
    int arity() const { return arity_; }
    const std::vector<Bits>& satisfying() const { return satisfying_; }

    bool contains(Bits t) const;
    bool empty() const { return satisfying_.empty(); }
    Bits full_mask() const { return (Bits{1} << arity_) - 1; }

    /// Exactly one tuple is missing, i.e. the relation is a disjunction of
    /// literals. T, F and the ORj relations all qualify.
    bool is_clause() const;
    /// For a clause relation, the unique falsifying tuple. A coordinate set
    /// to 0 there means the corresponding literal is positive.
    Bits falsifying_tuple() const;

    friend bool operator==(const Relation&, const Relation&) = default;

  private:
    std::string name_;
    int arity_;
    std::vector<Bits> satisfying_;  // sorted, unique
};

/// Relation sets are keyed by name; map order gives deterministic iteration.
using RelationSet = std::map<std::string, Relation>;

/// The preloaded relations: OR0, OR1, OR2, T, F, XOR, NAE3.
const RelationSet& builtin_relations();

/// Canonical clause relation of the given width. neg_mask marks negated
/// positions (coordinate 0 = most significant bit, as in Bits). Width-2
/// instances with 0/1/2 leading-position negations coincide with OR0/OR1/OR2
/// up to naming.
Relation clause_relation(int width, Bits neg_mask);

inline void insert_relation(RelationSet& set, Relation r) {
    auto [it, inserted] = set.emplace(r.name(), r);
    if (!inserted && !(it->second == r))
        throw InputError("relation '" + r.name() + "' redefined with different content");
}

}  // namespace modkcsp

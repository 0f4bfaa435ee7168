#include "modkcsp/relation.hpp"

#include <algorithm>

namespace modkcsp {

std::string tuple_to_string(Bits t, int arity) {
    std::string s(static_cast<size_t>(arity), '0');
    for (int i = 0; i < arity; ++i)
        if (tuple_bit(t, arity, i)) s[static_cast<size_t>(i)] = '1';
    return s;
}

Bits tuple_from_string(const std::string& s) {
    Bits t = 0;
    for (char c : s) {
        if (c != '0' && c != '1') throw InputError("tuple must be a bitstring, got '" + s + "'");
        t = (t << 1) | static_cast<Bits>(c == '1');
    }
    return t;
}

Relation::Relation(std::string name, int arity, std::vector<Bits> satisfying)
    : name_(std::move(name)), arity_(arity), satisfying_(std::move(satisfying)) {
    if (arity_ < 1 || arity_ > kMaxArity)
        throw InputError("relation '" + name_ + "': arity must be in [1, " +
                         std::to_string(kMaxArity) + "], got " + std::to_string(arity_));
    std::sort(satisfying_.begin(), satisfying_.end());
    auto dup = std::adjacent_find(satisfying_.begin(), satisfying_.end());
    if (dup != satisfying_.end())
        throw InputError("relation '" + name_ + "': duplicate tuple " +
                         tuple_to_string(*dup, arity_));
    for (Bits t : satisfying_)
        if (t > full_mask())
            throw InputError("relation '" + name_ + "': tuple exceeds arity " +
                             std::to_string(arity_));
}

bool Relation::contains(Bits t) const {
    return std::binary_search(satisfying_.begin(), satisfying_.end(), t);
}

bool Relation::is_clause() const {
    return satisfying_.size() + 1 == (Bits{1} << arity_);
}

Bits Relation::falsifying_tuple() const {
    if (!is_clause()) throw ContractError("relation '" + name_ + "' is not a clause relation");
    // The one gap in the sorted tuple list.
    Bits expect = 0;
    for (Bits t : satisfying_) {
        if (t != expect) return expect;
        ++expect;
    }
    return expect;
}

const RelationSet& builtin_relations() {
    static const RelationSet set = [] {
        RelationSet s;
        insert_relation(s, Relation("OR0", 2, {0b01, 0b10, 0b11}));
        insert_relation(s, Relation("OR1", 2, {0b00, 0b01, 0b11}));
        insert_relation(s, Relation("OR2", 2, {0b00, 0b01, 0b10}));
        insert_relation(s, Relation("T", 1, {0b1}));
        insert_relation(s, Relation("F", 1, {0b0}));
        insert_relation(s, Relation("XOR", 2, {0b01, 0b10}));
        insert_relation(s, Relation("NAE3", 3, {0b001, 0b010, 0b011, 0b100, 0b101, 0b110}));
        return s;
    }();
    return set;
}

Relation clause_relation(int width, Bits neg_mask) {
    if (width < 1 || width > kMaxArity)
        throw InputError("clause width must be in [1, " + std::to_string(kMaxArity) + "]");
    Bits full = (Bits{1} << width) - 1;
    if (neg_mask > full) throw ContractError("negation mask exceeds clause width");
    // A clause fails only when every literal is false: positive positions 0,
    // negated positions 1. That is exactly neg_mask.
    std::vector<Bits> sat;
    sat.reserve(full);
    for (Bits t = 0; t <= full; ++t)
        if (t != neg_mask) sat.push_back(t);
    return Relation("C" + std::to_string(width) + "_" + tuple_to_string(neg_mask, width), width,
                    std::move(sat));
}

}  // namespace modkcsp

#include "modkcsp/counting.hpp"

#include <algorithm>

namespace modkcsp {

bool eval_formula(const Formula& f, const Assignment& a) {
    for (int i = 0; i < f.num_variables(); ++i)
        a.get(f.variables()[static_cast<size_t>(i)]);  // totality check
    CompiledFormula compiled(f);
    return compiled.eval(a.to_mask(f));
}

CompiledFormula::CompiledFormula(const Formula& f) : num_variables_(f.num_variables()) {
    entries_.reserve(f.constraints().size());
    for (const auto& c : f.constraints()) {
        const Relation& r = f.relations()[static_cast<size_t>(c.relation)];
        Entry e;
        e.args = c.args;
        if (r.arity() <= 6) {
            e.kind = Entry::Kind::kSmallTable;
            for (Bits t : r.satisfying()) e.table_or_miss |= Bits{1} << t;
        } else if (r.is_clause()) {
            e.kind = Entry::Kind::kClauseMiss;
            e.table_or_miss = r.falsifying_tuple();
        } else {
            e.kind = Entry::Kind::kLookup;
            e.tuples = &r.satisfying();
        }
        entries_.push_back(std::move(e));
    }
}

bool CompiledFormula::eval(std::uint64_t mask) const {
    for (const auto& e : entries_) {
        Bits t = 0;
        for (int arg : e.args) t = (t << 1) | ((mask >> arg) & 1);
        switch (e.kind) {
            case Entry::Kind::kSmallTable:
                if (!((e.table_or_miss >> t) & 1)) return false;
                break;
            case Entry::Kind::kClauseMiss:
                if (t == e.table_or_miss) return false;
                break;
            case Entry::Kind::kLookup:
                if (!std::binary_search(e.tuples->begin(), e.tuples->end(), t)) return false;
                break;
        }
    }
    return true;
}

BigInt brute_force_count(const Formula& f, int enum_cap) {
    int n = f.num_variables();
    if (n > enum_cap)
        throw ResourceError("formula has " + std::to_string(n) +
                            " variables, enumeration cap is " + std::to_string(enum_cap));
    CompiledFormula compiled(f);
    std::uint64_t count = 0;
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < limit; ++mask)
        if (compiled.eval(mask)) ++count;
    return BigInt(count);
}

std::uint64_t count_mod(const Formula& f, Modulus m, int enum_cap) {
    return static_cast<std::uint64_t>(brute_force_count(f, enum_cap) % m.value());
}

}  // namespace modkcsp

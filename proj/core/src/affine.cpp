#include "modkcsp/affine.hpp"

#include <algorithm>

#include "modkcsp/classify.hpp"

namespace modkcsp {

namespace {

// Local dense vectors over coordinates: bit i (from the LSB) is the
// coefficient of coordinate i.
Bits tuple_to_vec(Bits t, int arity) {
    Bits v = 0;
    for (int i = 0; i < arity; ++i)
        if (tuple_bit(t, arity, i)) v |= Bits{1} << i;
    return v;
}

// Basis of {c : c . b = 0 for all rows b}, from the reduced row echelon form.
std::vector<Bits> kernel_basis(std::vector<Bits> rows, int width) {
    std::vector<Bits> pivots_rows;
    std::vector<int> pivot_cols;
    for (Bits row : rows) {
        for (size_t p = 0; p < pivots_rows.size(); ++p)
            if ((row >> pivot_cols[p]) & 1) row ^= pivots_rows[p];
        if (row == 0) continue;
        int col = std::countr_zero(row);
        // Keep RREF: clear this column from every earlier pivot row.
        for (size_t p = 0; p < pivots_rows.size(); ++p)
            if ((pivots_rows[p] >> col) & 1) pivots_rows[p] ^= row;
        pivots_rows.push_back(row);
        pivot_cols.push_back(col);
    }
    std::vector<bool> is_pivot(static_cast<size_t>(width), false);
    for (int c : pivot_cols) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<Bits> kernel;
    for (int j = 0; j < width; ++j) {
        if (is_pivot[static_cast<size_t>(j)]) continue;
        Bits k = Bits{1} << j;
        for (size_t p = 0; p < pivots_rows.size(); ++p)
            if ((pivots_rows[p] >> j) & 1) k |= Bits{1} << pivot_cols[p];
        kernel.push_back(k);
    }
    std::sort(kernel.begin(), kernel.end());
    return kernel;
}

}  // namespace

LinearSystemGF2 relation_to_system(const Relation& r) {
    if (r.empty()) return LinearSystemGF2::inconsistent(r.arity());
    if (!is_affine(r))
        throw ContractError("relation '" + r.name() + "' is not affine");
    const int arity = r.arity();
    Bits t0 = tuple_to_vec(r.satisfying().front(), arity);
    std::vector<Bits> diffs;
    diffs.reserve(r.satisfying().size());
    for (Bits t : r.satisfying()) diffs.push_back(tuple_to_vec(t, arity) ^ t0);
    // Equations c.x = c.t0 for a basis c of the orthogonal complement of the
    // difference span; their solution set is t0 + span(diffs).
    LinearSystemGF2 system;
    system.num_vars = arity;
    for (Bits c : kernel_basis(diffs, arity)) {
        BitRow coeffs(arity);
        for (int i = 0; i < arity; ++i)
            if ((c >> i) & 1) coeffs.set(i, true);
        system.add_row(std::move(coeffs), std::popcount(c & t0) & 1);
    }
    return system;
}

LinearSystemGF2 formula_to_system(const Formula& f) {
    LinearSystemGF2 system;
    system.num_vars = f.num_variables();
    std::vector<std::optional<LinearSystemGF2>> cache(f.relations().size());
    for (const auto& c : f.constraints()) {
        auto& rel_system = cache[static_cast<size_t>(c.relation)];
        if (!rel_system)
            rel_system = relation_to_system(f.relations()[static_cast<size_t>(c.relation)]);
        for (const auto& row : rel_system->rows) {
            BitRow coeffs(system.num_vars);
            for (int j = 0; j < rel_system->num_vars; ++j)
                if (row.coeffs.get(j)) coeffs.flip(c.args[static_cast<size_t>(j)]);
            system.add_row(std::move(coeffs), row.rhs);
        }
    }
    return system;
}

BigInt count_affine(const Formula& f) {
    EliminationResult result = eliminate(formula_to_system(f));
    if (!result.consistent) return 0;
    return BigInt(1) << result.free_vars;
}

std::uint64_t count_affine_mod(const Formula& f, Modulus m) {
    EliminationResult result = eliminate(formula_to_system(f));
    if (!result.consistent) return 0;
    return pow_mod(2, static_cast<std::uint64_t>(result.free_vars), m.value());
}

}  // namespace modkcsp

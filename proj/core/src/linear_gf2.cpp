#include "modkcsp/linear_gf2.hpp"

#include <bit>

namespace modkcsp {

BitRow& BitRow::operator^=(const BitRow& other) {
    if (n_ != other.n_) throw ContractError("BitRow width mismatch");
    for (size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

bool BitRow::any() const {
    for (auto w : words_)
        if (w) return true;
    return false;
}

int BitRow::first_set() const {
    for (size_t i = 0; i < words_.size(); ++i)
        if (words_[i]) return static_cast<int>(i * 64 + std::countr_zero(words_[i]));
    return -1;
}

void LinearSystemGF2::add_row(BitRow coeffs, bool rhs) {
    if (coeffs.size() != num_vars) throw ContractError("row width does not match num_vars");
    rows.push_back({std::move(coeffs), rhs});
}

LinearSystemGF2 LinearSystemGF2::inconsistent(int num_vars) {
    LinearSystemGF2 s;
    s.num_vars = num_vars;
    s.add_row(BitRow(num_vars), true);
    return s;
}

EliminationResult eliminate(LinearSystemGF2 system) {
    int rank = 0;
    bool consistent = true;
    size_t next = 0;
    for (size_t r = 0; r < system.rows.size(); ++r) {
        auto& row = system.rows[r];
        // Reduce against the pivots established so far.
        for (size_t p = 0; p < next; ++p) {
            int col = system.rows[p].coeffs.first_set();
            if (row.coeffs.get(col)) {
                row.coeffs ^= system.rows[p].coeffs;
                row.rhs ^= system.rows[p].rhs;
            }
        }
        if (row.coeffs.any()) {
            std::swap(system.rows[next], row);
            ++next;
            ++rank;
        } else if (row.rhs) {
            consistent = false;
        }
    }
    EliminationResult result;
    result.consistent = consistent;
    result.rank = rank;
    result.free_vars = consistent ? system.num_vars - rank : 0;
    return result;
}

std::vector<std::uint64_t> enumerate_solutions(const LinearSystemGF2& system, int cap) {
    if (system.num_vars > cap)
        throw ResourceError("solution enumeration over " + std::to_string(system.num_vars) +
                            " variables exceeds cap " + std::to_string(cap));
    std::vector<std::uint64_t> solutions;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << system.num_vars); ++mask) {
        bool ok = true;
        for (const auto& row : system.rows) {
            bool lhs = false;
            for (int i = 0; i < system.num_vars; ++i)
                if (row.coeffs.get(i) && ((mask >> i) & 1)) lhs = !lhs;
            if (lhs != row.rhs) {
                ok = false;
                break;
            }
        }
        if (ok) solutions.push_back(mask);
    }
    return solutions;
}

}  // namespace modkcsp

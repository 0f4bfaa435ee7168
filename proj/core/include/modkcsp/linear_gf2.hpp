#pragma once

#include <cstdint>
#include <vector>

#include "modkcsp/error.hpp"

namespace modkcsp {

/// A length-n vector over GF(2), packed 64 bits per word.
class BitRow {
  public:
    BitRow() = default;
    explicit BitRow(int n) : n_(n), words_((static_cast<size_t>(n) + 63) / 64, 0) {}

    int size() const { return n_; }
    bool get(int i) const { return (words_[static_cast<size_t>(i) / 64] >> (i % 64)) & 1; }
    void set(int i, bool v) {
        std::uint64_t bit = std::uint64_t{1} << (i % 64);
        if (v)
            words_[static_cast<size_t>(i) / 64] |= bit;
        else
            words_[static_cast<size_t>(i) / 64] &= ~bit;
    }
    void flip(int i) { words_[static_cast<size_t>(i) / 64] ^= std::uint64_t{1} << (i % 64); }

    BitRow& operator^=(const BitRow& other);
    bool any() const;
    /// Index of the lowest set bit, or -1 if none.
    int first_set() const;

    friend bool operator==(const BitRow&, const BitRow&) = default;

  private:
    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// rows of (coefficients, rhs) representing a linear system over GF(2).
/// Rows may be dependent or inconsistent; eliminate() sorts that out.
struct LinearSystemGF2 {
    int num_vars = 0;
    struct Row {
        BitRow coeffs;
        bool rhs = false;
    };
    std::vector<Row> rows;

    void add_row(BitRow coeffs, bool rhs);
    /// The canonical inconsistent system over n variables: one row 0...0 = 1.
    static LinearSystemGF2 inconsistent(int num_vars);
};

struct EliminationResult {
    bool consistent = false;
    int rank = 0;
    int free_vars = 0;  // num_vars - rank, meaningful only when consistent
};

/// Plain row reduction; pivots are chosen at the lowest-index nonzero column.
EliminationResult eliminate(LinearSystemGF2 system);

/// All solutions of the system, as variable-index bitmasks (bit i = value of
/// variable i). Requires num_vars small enough to enumerate; used as an
/// oracle and for relation reconstruction.
std::vector<std::uint64_t> enumerate_solutions(const LinearSystemGF2& system, int cap = 22);

}  // namespace modkcsp

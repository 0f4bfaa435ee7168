#pragma once

#include <cstdint>

#include "modkcsp/error.hpp"

namespace modkcsp {

/// Counting modulus. k >= 2 is enforced at construction; counting mod 1 is
/// degenerate (every residue is 0) and rejected at the boundary.
class Modulus {
  public:
    explicit Modulus(std::int64_t k) : k_(k) {
        if (k < 2) throw InputError("modulus must be >= 2, got " + std::to_string(k));
    }
    std::uint64_t value() const { return static_cast<std::uint64_t>(k_); }

    friend bool operator==(const Modulus&, const Modulus&) = default;

  private:
    std::int64_t k_;
};

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    if (m == 1) return 0;
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Multiplicative inverse mod prime p, via Fermat's little theorem.
/// a must be nonzero mod p.
inline std::uint64_t inv_mod_prime(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) throw ContractError("inverse of 0 requested mod " + std::to_string(p));
    return pow_mod(a, p - 2, p);
}

}  // namespace modkcsp

#include "modkcsp/classify.hpp"

#include <algorithm>
#include <vector>

namespace modkcsp {

bool is_0_valid(const Relation& r) { return r.contains(0); }

bool is_1_valid(const Relation& r) { return r.contains(r.full_mask()); }

bool is_c_closed(const Relation& r) {
    for (Bits t : r.satisfying())
        if (!r.contains(t ^ r.full_mask())) return false;
    return true;
}

namespace {

// Insert v into a GF(2) basis kept in decreasing-leading-bit form. Returns
// true if v was independent.
bool basis_insert(std::vector<Bits>& basis, Bits v) {
    for (Bits b : basis) v = std::min(v, v ^ b);
    if (v == 0) return false;
    basis.push_back(v);
    std::sort(basis.begin(), basis.end(), std::greater<>());
    return true;
}

std::vector<Bits> difference_basis(const std::vector<Bits>& tuples) {
    std::vector<Bits> basis;
    for (Bits t : tuples) basis_insert(basis, t ^ tuples.front());
    return basis;
}

}  // namespace

bool is_affine(const Relation& r) {
    if (r.empty()) return true;  // the inconsistent system 0 = 1
    auto basis = difference_basis(r.satisfying());
    // satisfying is always a subset of its affine span, which has 2^dim
    // elements; equality is exactly a size match.
    return r.satisfying().size() == (std::size_t{1} << basis.size());
}

std::set<Bits> affine_closure(const std::set<Bits>& tuples, int arity) {
    if (tuples.empty()) throw InputError("affine_closure: empty tuple set");
    if (arity < 1 || arity > kMaxArity) throw InputError("affine_closure: bad arity");
    std::vector<Bits> vec(tuples.begin(), tuples.end());
    Bits t0 = vec.front();
    auto basis = difference_basis(vec);
    if (basis.size() > 22)
        throw ResourceError("affine closure spans 2^" + std::to_string(basis.size()) +
                            " tuples, cap is 2^22");
    std::set<Bits> closure;
    for (std::uint64_t combo = 0; combo < (std::uint64_t{1} << basis.size()); ++combo) {
        Bits t = t0;
        for (std::size_t i = 0; i < basis.size(); ++i)
            if ((combo >> i) & 1) t ^= basis[i];
        closure.insert(t);
    }
    return closure;
}

namespace {

std::optional<std::array<Bits, 3>> find_affine_violation(const Relation& r) {
    const auto& sat = r.satisfying();
    for (Bits a : sat)
        for (Bits b : sat)
            for (Bits c : sat)
                if (!r.contains(a ^ b ^ c)) return std::array<Bits, 3>{a, b, c};
    return std::nullopt;
}

}  // namespace

PropertyReport property_report(const RelationSet& S) {
    PropertyReport report;
    report.set_level = {true, true, true, true, false};
    for (const auto& [name, r] : S) {
        RelationProperties p;
        p.zero_valid = is_0_valid(r);
        p.one_valid = is_1_valid(r);
        p.c_closed = is_c_closed(r);
        p.affine = is_affine(r);
        p.empty = r.empty();
        report.per_relation.emplace(name, p);
        report.set_level.zero_valid &= p.zero_valid;
        report.set_level.one_valid &= p.one_valid;
        report.set_level.c_closed &= p.c_closed;
        report.set_level.affine &= p.affine;
        report.set_level.empty |= p.empty;
        if (!p.affine && !report.affine_violation) {
            auto triple = find_affine_violation(r);
            if (triple)
                report.affine_violation =
                    PropertyReport::AffineViolation{name, (*triple)[0], (*triple)[1], (*triple)[2]};
        }
    }
    return report;
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::kFpAffine: return "FP_affine";
        case Outcome::kFpParityCClosed: return "FP_parity_cclosed";
        case Outcome::kHard: return "Hard";
    }
    return "?";
}

DichotomyVerdict classify(const RelationSet& S, Modulus m, const SearchBounds& bounds) {
    if (S.empty()) throw InputError("classify: empty relation set");
    PropertyReport report = property_report(S);
    if (report.set_level.affine)
        return {Outcome::kFpAffine, m, std::move(report), std::nullopt};
    if (m.value() == 2 && report.set_level.c_closed)
        return {Outcome::kFpParityCClosed, m, std::move(report), std::nullopt};
    DichotomyVerdict verdict{Outcome::kHard, m, std::move(report), std::nullopt};
    verdict.certificate = build_reduction_certificate(S, m, bounds);
    return verdict;
}

std::optional<std::uint64_t> parity_fast_count(const Formula& f) {
    for (const auto& [name, r] : f.used_relations())
        if (!is_c_closed(r)) return std::nullopt;
    // With no variables the only assignment is the empty one and it
    // satisfies the (necessarily empty) constraint list. Otherwise
    // complementation pairs up solutions without fixed points.
    return f.num_variables() == 0 ? 1 : 0;
}

}  // namespace modkcsp

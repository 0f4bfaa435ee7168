#pragma once

#include "modkcsp/formula.hpp"
#include "modkcsp/graph.hpp"

namespace modkcsp {

/// A decomposition of a graph into a core vertex set X and copy subgraphs,
/// each with one distinguished vertex. Valid for modulus k when
///   - x_set and the copies partition the vertex set,
///   - every edge lies inside one copy, inside x_set, or joins a copy's
///     distinguished vertex to x_set,
///   - every copy's induced independent-set count is 0 mod k.
struct GadgetCopy {
    std::vector<int> vertices;
    int distinguished;  // must be a member of vertices
};

struct GadgetDecomposition {
    std::vector<int> x_set;
    std::vector<GadgetCopy> copies;
};

/// Throws ContractError naming the failing edge or copy.
void validate_decomposition(const Graph& g, const GadgetDecomposition& dec, Modulus m);

/// Independent-set count of g mod k computed from the decomposition alone:
/// sum over independent I0 within x_set of the product, over copies, of
/// [I0 hits the copy's neighborhood] * |IS(copy minus distinguished)|.
/// Always equals count_is_mod(g, m) for a valid decomposition.
std::uint64_t decomposition_count_mod(const Graph& g, const GadgetDecomposition& dec, Modulus m,
                                      int x_cap = kDefaultEnumCap);

/// The vanishing gadget for a prime p: a bipartite graph H and distinguished
/// vertex h with |IS(H)| = 0 mod p and |IS(H - h)| != 0 mod p. K1 for p = 2,
/// K_{p-2,p-2} otherwise.
struct FermatGadget {
    Graph graph;
    int distinguished;
    BigInt count_with;     // 2^(p-1) - 1 for p > 2, 2 for p = 2
    BigInt count_without;  // 2^(p-2) + 2^(p-3) - 1 for p > 2, 1 for p = 2
};

FermatGadget make_fermat_gadget(std::uint64_t p);

/// CNF to graph for parity counting: vertices v_i, nv_i, p_i per variable and
/// c_j per clause; |IS(G)| mod 2 equals the satisfying-assignment count of
/// the CNF mod 2. The returned decomposition (X = all v_i/nv_i, each p_i and
/// c_j a one-vertex copy) is valid for k = 2.
std::pair<Graph, GadgetDecomposition> parity_gadget(const Formula& cnf);

struct PrimeGadgetOutput {
    Graph graph;
    GadgetDecomposition decomposition;
    std::uint64_t p;
    std::uint64_t d;           // |IS(H - h)| mod p, nonzero
    std::uint64_t copy_count;  // 2n + m
    // variable name -> (positive-literal vertex, negative-literal vertex)
    std::vector<std::pair<std::string, std::pair<std::string, std::string>>> variable_map;
};

/// CNF to bipartite graph for counting mod a prime p:
/// |IS(G)| = #SAT(cnf) * d^(2n+m) (mod p).
PrimeGadgetOutput prime_gadget(const Formula& cnf, std::uint64_t p);

/// #SAT(cnf) mod p from the gadget's independent-set residue, dividing out
/// d^copy_count.
std::uint64_t recover_sat_count_mod_p(const PrimeGadgetOutput& out, std::uint64_t is_count_mod_p);

/// One variable per vertex, one OR2 clause per edge; satisfying assignments
/// correspond one-to-one with independent sets.
Formula graph_to_or2_formula(const Graph& g);

/// One variable per vertex, clause not(x_u) or x_v per edge (u left, v
/// right); the correspondence I = {u in L : x_u=1} + {v in R : x_v=0} is a
/// bijection, so the exact count is preserved. The bipartition is verified.
Formula bipartite_to_or1_formula(const Graph& g, const std::vector<int>& left,
                                 const std::vector<int>& right);
Formula bipartite_to_or1_formula(const Graph& g);  // derives a bipartition

}  // namespace modkcsp

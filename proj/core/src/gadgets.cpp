#include "modkcsp/gadgets.hpp"

#include <algorithm>

#include "modkcsp/modmath.hpp"

namespace modkcsp {

namespace {

struct Literal {
    int var;
    bool negated;
    friend bool operator==(const Literal&, const Literal&) = default;
};

// Reads a CNF-shaped formula: every relation must be a clause relation (all
// tuples satisfying except one). Duplicate literals inside a clause collapse.
std::vector<std::vector<Literal>> extract_clauses(const Formula& cnf) {
    std::vector<std::vector<Literal>> clauses;
    clauses.reserve(cnf.constraints().size());
    for (const auto& c : cnf.constraints()) {
        const Relation& r = cnf.relations()[static_cast<size_t>(c.relation)];
        if (!r.is_clause())
            throw InputError("relation '" + r.name() +
                             "' is not a clause relation (exactly one falsifying tuple required)");
        Bits miss = r.falsifying_tuple();
        std::vector<Literal> clause;
        for (int j = 0; j < r.arity(); ++j) {
            Literal lit{c.args[static_cast<size_t>(j)], tuple_bit(miss, r.arity(), j) == 1};
            if (std::find(clause.begin(), clause.end(), lit) == clause.end())
                clause.push_back(lit);
        }
        clauses.push_back(std::move(clause));
    }
    return clauses;
}

std::string edge_name(const Graph& g, int u, int v) {
    return g.label(u) + " -- " + g.label(v);
}

}  // namespace

void validate_decomposition(const Graph& g, const GadgetDecomposition& dec, Modulus m) {
    const int n = g.num_vertices();
    constexpr int kUnassigned = -3, kInX = -2;
    std::vector<int> owner(static_cast<size_t>(n), kUnassigned);
    auto assign = [&](int v, int who, const std::string& what) {
        if (v < 0 || v >= n) throw ContractError("decomposition references vertex out of range");
        if (owner[static_cast<size_t>(v)] != kUnassigned)
            throw ContractError("vertex '" + g.label(v) + "' appears in " + what +
                                " but is already assigned");
        owner[static_cast<size_t>(v)] = who;
    };
    for (int v : dec.x_set) assign(v, kInX, "x_set");
    for (size_t i = 0; i < dec.copies.size(); ++i) {
        const auto& copy = dec.copies[i];
        for (int v : copy.vertices) assign(v, static_cast<int>(i), "copy " + std::to_string(i));
        if (std::find(copy.vertices.begin(), copy.vertices.end(), copy.distinguished) ==
            copy.vertices.end())
            throw ContractError("copy " + std::to_string(i) +
                                ": distinguished vertex is not a member");
    }
    for (int v = 0; v < n; ++v)
        if (owner[static_cast<size_t>(v)] == kUnassigned)
            throw ContractError("vertex '" + g.label(v) + "' is not covered by the decomposition");

    for (auto [u, v] : g.edges()) {
        int ou = owner[static_cast<size_t>(u)], ov = owner[static_cast<size_t>(v)];
        if (ou == ov) continue;  // within x_set or within one copy
        // Mixed edge: must join a copy's distinguished vertex to x_set.
        int copy_idx = -1, copy_vertex = -1;
        if (ou == kInX && ov >= 0) {
            copy_idx = ov;
            copy_vertex = v;
        } else if (ov == kInX && ou >= 0) {
            copy_idx = ou;
            copy_vertex = u;
        } else {
            throw ContractError("edge " + edge_name(g, u, v) + " joins two different copies");
        }
        if (copy_vertex != dec.copies[static_cast<size_t>(copy_idx)].distinguished)
            throw ContractError("edge " + edge_name(g, u, v) +
                                " enters a copy away from its distinguished vertex");
    }

    for (size_t i = 0; i < dec.copies.size(); ++i) {
        BigInt count = count_is(g.induced(dec.copies[i].vertices));
        if (count % m.value() != 0)
            throw ContractError("copy " + std::to_string(i) + " has " + count.str() +
                                " independent sets, not 0 mod " + std::to_string(m.value()));
    }
}

std::uint64_t decomposition_count_mod(const Graph& g, const GadgetDecomposition& dec, Modulus m,
                                      int x_cap) {
    validate_decomposition(g, dec, m);
    const int nx = static_cast<int>(dec.x_set.size());
    if (nx > x_cap)
        throw ResourceError("x_set has " + std::to_string(nx) + " vertices, cap is " +
                            std::to_string(x_cap));
    const std::uint64_t k = m.value();

    std::vector<int> x_pos(static_cast<size_t>(g.num_vertices()), -1);
    for (int i = 0; i < nx; ++i) x_pos[static_cast<size_t>(dec.x_set[static_cast<size_t>(i)])] = i;

    // Adjacency among x_set positions.
    std::vector<std::uint64_t> adj(static_cast<size_t>(nx), 0);
    for (auto [u, v] : g.edges()) {
        int pu = x_pos[static_cast<size_t>(u)], pv = x_pos[static_cast<size_t>(v)];
        if (pu >= 0 && pv >= 0) {
            adj[static_cast<size_t>(pu)] |= std::uint64_t{1} << pv;
            adj[static_cast<size_t>(pv)] |= std::uint64_t{1} << pu;
        }
    }

    // Per copy: the factor |IS(copy - distinguished)| mod k and the copy's
    // neighborhood within x_set (only the distinguished vertex can reach X).
    struct CopyData {
        std::uint64_t factor;
        std::uint64_t x_neighborhood;
    };
    std::vector<CopyData> copies;
    copies.reserve(dec.copies.size());
    for (const auto& copy : dec.copies) {
        std::vector<int> rest;
        for (int v : copy.vertices)
            if (v != copy.distinguished) rest.push_back(v);
        std::uint64_t factor = static_cast<std::uint64_t>(count_is(g.induced(rest)) % k);
        std::uint64_t hood = 0;
        for (int v : copy.vertices)
            for (int w : g.neighbors(v)) {
                int pw = x_pos[static_cast<size_t>(w)];
                if (pw >= 0) hood |= std::uint64_t{1} << pw;
            }
        copies.push_back({factor, hood});
    }

    std::uint64_t sum = 0;
    // Enumerate independent subsets of x_set.
    auto recurse = [&](auto&& self, int i, std::uint64_t chosen) -> void {
        if (i == nx) {
            std::uint64_t term = 1 % k;
            for (const auto& c : copies) {
                if (!(c.x_neighborhood & chosen)) {
                    term = 0;
                    break;
                }
                term = mul_mod(term, c.factor, k);
            }
            sum = (sum + term) % k;
            return;
        }
        self(self, i + 1, chosen);
        if (!(adj[static_cast<size_t>(i)] & chosen))
            self(self, i + 1, chosen | (std::uint64_t{1} << i));
    };
    recurse(recurse, 0, 0);
    return sum;
}

FermatGadget make_fermat_gadget(std::uint64_t p) {
    if (!is_prime(p)) throw InputError("p must be a prime >= 2, got " + std::to_string(p));
    FermatGadget gadget;
    if (p == 2) {
        gadget.distinguished = gadget.graph.add_vertex("h");
        gadget.count_with = 2;
        gadget.count_without = 1;
    } else {
        const std::uint64_t side = p - 2;
        std::vector<int> left, right;
        left.push_back(gadget.graph.add_vertex("h"));
        for (std::uint64_t i = 1; i < side; ++i)
            left.push_back(gadget.graph.add_vertex("a" + std::to_string(i)));
        for (std::uint64_t i = 0; i < side; ++i)
            right.push_back(gadget.graph.add_vertex("b" + std::to_string(i)));
        for (int u : left)
            for (int v : right) gadget.graph.add_edge(u, v);
        gadget.distinguished = left.front();
        // Independent sets of K_{n,n} live inside one side: 2^(n+1) - 1 of
        // them; removing one vertex leaves K_{n,n-1} with 2^(p-2)+2^(p-3)-1.
        gadget.count_with = (BigInt(1) << (p - 1)) - 1;
        gadget.count_without = (BigInt(1) << (p - 2)) + (BigInt(1) << (p - 3)) - 1;
    }
    if (gadget.count_with % p != 0 || gadget.count_without % p == 0)
        throw ContractError("fermat gadget congruences failed for p = " + std::to_string(p));
    return gadget;
}

std::pair<Graph, GadgetDecomposition> parity_gadget(const Formula& cnf) {
    auto clauses = extract_clauses(cnf);
    Graph g;
    GadgetDecomposition dec;
    const int n = cnf.num_variables();
    std::vector<int> pos_vertex(static_cast<size_t>(n)), neg_vertex(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::string suffix = std::to_string(i + 1);
        int v = g.add_vertex("v" + suffix);
        int nv = g.add_vertex("nv" + suffix);
        int pi = g.add_vertex("p" + suffix);
        g.add_edge(v, nv);
        g.add_edge(pi, v);
        g.add_edge(pi, nv);
        pos_vertex[static_cast<size_t>(i)] = v;
        neg_vertex[static_cast<size_t>(i)] = nv;
        dec.x_set.push_back(v);
        dec.x_set.push_back(nv);
        dec.copies.push_back({{pi}, pi});
    }
    for (size_t j = 0; j < clauses.size(); ++j) {
        int cj = g.add_vertex("c" + std::to_string(j + 1));
        for (const auto& lit : clauses[j])
            g.add_edge(cj, (lit.negated ? neg_vertex : pos_vertex)[static_cast<size_t>(lit.var)]);
        dec.copies.push_back({{cj}, cj});
    }
    return {std::move(g), std::move(dec)};
}

PrimeGadgetOutput prime_gadget(const Formula& cnf, std::uint64_t p) {
    if (!is_prime(p)) throw InputError("p must be a prime >= 2, got " + std::to_string(p));
    auto clauses = extract_clauses(cnf);
    FermatGadget h = make_fermat_gadget(p);

    PrimeGadgetOutput out;
    out.p = p;
    Graph& g = out.graph;
    GadgetDecomposition& dec = out.decomposition;

    auto instantiate_copy = [&](const std::string& prefix) {
        GadgetCopy copy;
        copy.vertices.reserve(static_cast<size_t>(h.graph.num_vertices()));
        for (int j = 0; j < h.graph.num_vertices(); ++j) {
            std::string label = j == h.distinguished ? prefix : prefix + "_" + std::to_string(j);
            copy.vertices.push_back(g.add_vertex(label));
        }
        for (auto [a, b] : h.graph.edges())
            g.add_edge(copy.vertices[static_cast<size_t>(a)], copy.vertices[static_cast<size_t>(b)]);
        copy.distinguished = copy.vertices[static_cast<size_t>(h.distinguished)];
        return copy;
    };

    const int n = cnf.num_variables();
    std::vector<int> pos_vertex(static_cast<size_t>(n)), neg_vertex(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::string suffix = std::to_string(i + 1);
        int v = g.add_vertex("v" + suffix);
        int nv = g.add_vertex("nv" + suffix);
        int pi = g.add_vertex("p" + suffix);
        int npi = g.add_vertex("np" + suffix);
        g.add_edge(v, pi);
        g.add_edge(nv, npi);
        GadgetCopy hi = instantiate_copy("h" + suffix);
        g.add_edge(pi, hi.distinguished);
        g.add_edge(npi, hi.distinguished);
        GadgetCopy his = instantiate_copy("h" + suffix + "s");
        g.add_edge(v, his.distinguished);
        g.add_edge(nv, his.distinguished);
        pos_vertex[static_cast<size_t>(i)] = v;
        neg_vertex[static_cast<size_t>(i)] = nv;
        dec.x_set.insert(dec.x_set.end(), {v, nv, pi, npi});
        dec.copies.push_back(std::move(hi));
        dec.copies.push_back(std::move(his));
        out.variable_map.push_back({cnf.variables()[static_cast<size_t>(i)],
                                    {g.label(v), g.label(nv)}});
    }
    for (size_t j = 0; j < clauses.size(); ++j) {
        GadgetCopy cj = instantiate_copy("c" + std::to_string(j + 1));
        for (const auto& lit : clauses[j])
            g.add_edge(cj.distinguished,
                       (lit.negated ? neg_vertex : pos_vertex)[static_cast<size_t>(lit.var)]);
        dec.copies.push_back(std::move(cj));
    }

    out.d = static_cast<std::uint64_t>(h.count_without % p);
    out.copy_count = 2 * static_cast<std::uint64_t>(n) + clauses.size();
    if (out.d % p == 0) throw ContractError("fermat gadget factor is 0 mod p");
    if (!is_bipartite(g)) throw ContractError("prime gadget graph is not bipartite");
    return out;
}

std::uint64_t recover_sat_count_mod_p(const PrimeGadgetOutput& out,
                                      std::uint64_t is_count_mod_p) {
    if (out.d % out.p == 0) throw ContractError("cannot divide: gadget factor is 0 mod p");
    std::uint64_t scale = pow_mod(out.d, out.copy_count, out.p);
    return mul_mod(is_count_mod_p % out.p, inv_mod_prime(scale, out.p), out.p);
}

Formula graph_to_or2_formula(const Graph& g) {
    std::vector<std::string> vars;
    vars.reserve(static_cast<size_t>(g.num_vertices()));
    for (int i = 0; i < g.num_vertices(); ++i) vars.push_back("x" + std::to_string(i + 1));
    Formula f(vars);
    const Relation& or2 = builtin_relations().at("OR2");
    for (auto [u, v] : g.edges())
        f.add_constraint(or2, {vars[static_cast<size_t>(u)], vars[static_cast<size_t>(v)]});
    return f;
}

Formula bipartite_to_or1_formula(const Graph& g, const std::vector<int>& left,
                                 const std::vector<int>& right) {
    std::vector<int> side(static_cast<size_t>(g.num_vertices()), -1);
    auto mark = [&](const std::vector<int>& part, int tag) {
        for (int v : part) {
            if (v < 0 || v >= g.num_vertices())
                throw InputError("bipartition references vertex out of range");
            if (side[static_cast<size_t>(v)] != -1)
                throw InputError("vertex '" + g.label(v) + "' listed twice in the bipartition");
            side[static_cast<size_t>(v)] = tag;
        }
    };
    mark(left, 0);
    mark(right, 1);
    for (int v = 0; v < g.num_vertices(); ++v)
        if (side[static_cast<size_t>(v)] == -1)
            throw InputError("vertex '" + g.label(v) + "' missing from the bipartition");
    std::vector<std::string> vars;
    vars.reserve(static_cast<size_t>(g.num_vertices()));
    for (int i = 0; i < g.num_vertices(); ++i) vars.push_back("x" + std::to_string(i + 1));
    Formula f(vars);
    const Relation& or1 = builtin_relations().at("OR1");
    for (auto [u, v] : g.edges()) {
        if (side[static_cast<size_t>(u)] == side[static_cast<size_t>(v)])
            throw InputError("edge " + edge_name(g, u, v) + " does not cross the bipartition");
        int l = side[static_cast<size_t>(u)] == 0 ? u : v;
        int r = l == u ? v : u;
        f.add_constraint(or1, {vars[static_cast<size_t>(l)], vars[static_cast<size_t>(r)]});
    }
    return f;
}

Formula bipartite_to_or1_formula(const Graph& g) {
    auto parts = bipartition(g);
    if (!parts) throw InputError("graph is not bipartite");
    return bipartite_to_or1_formula(g, parts->first, parts->second);
}

}  // namespace modkcsp

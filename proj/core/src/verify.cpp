#include "modkcsp/verify.hpp"

#include "modkcsp/affine.hpp"
#include "modkcsp/classify.hpp"
#include "modkcsp/gadgets.hpp"

namespace modkcsp {

namespace {

bool all_clause_relations(const Formula& f) {
    for (const auto& [name, r] : f.used_relations())
        if (!r.is_clause()) return false;
    return true;
}

bool all_affine(const Formula& f) {
    for (const auto& [name, r] : f.used_relations())
        if (!is_affine(r)) return false;
    return true;
}

// Independent-set residue of a gadget graph: direct counting when it fits,
// the decomposition evaluation otherwise.
std::optional<std::uint64_t> gadget_residue(const Graph& g, const GadgetDecomposition& dec,
                                            Modulus m, int enum_cap, int graph_cap) {
    if (g.num_vertices() <= graph_cap) return count_is_mod(g, m, graph_cap);
    if (static_cast<int>(dec.x_set.size()) <= enum_cap)
        return decomposition_count_mod(g, dec, m, enum_cap);
    return std::nullopt;
}

}  // namespace

std::vector<InstanceCheck<Formula>> formula_checks(const std::vector<std::uint64_t>& primes,
                                                   int enum_cap, int graph_cap) {
    std::vector<InstanceCheck<Formula>> checks;
    checks.push_back(
        {"affine_count_matches_brute_force", [enum_cap](const Formula& f) -> std::optional<bool> {
             if (!all_affine(f) || f.num_variables() > enum_cap) return std::nullopt;
             return count_affine(f) == brute_force_count(f, enum_cap);
         }});
    checks.push_back(
        {"parity_gadget_round_trip", [enum_cap, graph_cap](const Formula& f) -> std::optional<bool> {
             if (!all_clause_relations(f) || f.num_variables() > enum_cap) return std::nullopt;
             auto [g, dec] = parity_gadget(f);
             auto residue = gadget_residue(g, dec, Modulus(2), enum_cap, graph_cap);
             if (!residue) return std::nullopt;
             return *residue == count_mod(f, Modulus(2), enum_cap);
         }});
    checks.push_back({"parity_gadget_decomposition_consistent",
                      [enum_cap, graph_cap](const Formula& f) -> std::optional<bool> {
                          if (!all_clause_relations(f)) return std::nullopt;
                          auto [g, dec] = parity_gadget(f);
                          if (g.num_vertices() > graph_cap ||
                              static_cast<int>(dec.x_set.size()) > enum_cap)
                              return std::nullopt;
                          return decomposition_count_mod(g, dec, Modulus(2), enum_cap) ==
                                 count_is_mod(g, Modulus(2), graph_cap);
                      }});
    for (std::uint64_t p : primes) {
        Modulus m(static_cast<std::int64_t>(p));
        checks.push_back({"prime_gadget_round_trip_p" + std::to_string(p),
                          [p, m, enum_cap, graph_cap](const Formula& f) -> std::optional<bool> {
                              if (!all_clause_relations(f) || f.num_variables() > enum_cap)
                                  return std::nullopt;
                              PrimeGadgetOutput out = prime_gadget(f, p);
                              auto residue = gadget_residue(out.graph, out.decomposition, m,
                                                            enum_cap, graph_cap);
                              if (!residue) return std::nullopt;
                              return recover_sat_count_mod_p(out, *residue) ==
                                     count_mod(f, m, enum_cap);
                          }});
    }
    return checks;
}

std::vector<InstanceCheck<Graph>> graph_checks(int enum_cap, int graph_cap) {
    std::vector<InstanceCheck<Graph>> checks;
    checks.push_back(
        {"or2_formula_parsimonious", [enum_cap, graph_cap](const Graph& g) -> std::optional<bool> {
             if (g.num_vertices() > std::min(enum_cap, graph_cap)) return std::nullopt;
             return brute_force_count(graph_to_or2_formula(g), enum_cap) == count_is(g, graph_cap);
         }});
    checks.push_back(
        {"or1_formula_parsimonious", [enum_cap, graph_cap](const Graph& g) -> std::optional<bool> {
             if (g.num_vertices() > std::min(enum_cap, graph_cap) || !is_bipartite(g))
                 return std::nullopt;
             return brute_force_count(bipartite_to_or1_formula(g), enum_cap) ==
                    count_is(g, graph_cap);
         }});
    return checks;
}

namespace {

Formula without_constraint(const Formula& f, size_t drop) {
    Formula out(f.variables());
    for (size_t i = 0; i < f.constraints().size(); ++i) {
        if (i == drop) continue;
        const auto& c = f.constraints()[i];
        out.add_constraint(out.intern_relation(f.relations()[static_cast<size_t>(c.relation)]),
                           c.args);
    }
    return out;
}

Formula without_variable(const Formula& f, int drop) {
    Formula out;
    std::vector<int> remap(static_cast<size_t>(f.num_variables()), -1);
    for (int v = 0; v < f.num_variables(); ++v)
        if (v != drop) remap[static_cast<size_t>(v)] = out.add_variable(f.variables()[static_cast<size_t>(v)]);
    for (const auto& c : f.constraints()) {
        std::vector<int> args;
        for (int a : c.args) args.push_back(remap[static_cast<size_t>(a)]);
        out.add_constraint(out.intern_relation(f.relations()[static_cast<size_t>(c.relation)]),
                           std::move(args));
    }
    return out;
}

}  // namespace

Formula minimize_failing_formula(const Formula& f,
                                 const std::function<bool(const Formula&)>& still_fails) {
    Formula current = f;
    bool improved = true;
    while (improved) {
        improved = false;
        for (size_t i = 0; i < current.constraints().size(); ++i) {
            Formula candidate = without_constraint(current, i);
            if (still_fails(candidate)) {
                current = std::move(candidate);
                improved = true;
                break;
            }
        }
    }
    improved = true;
    while (improved) {
        improved = false;
        std::vector<bool> used(static_cast<size_t>(current.num_variables()), false);
        for (const auto& c : current.constraints())
            for (int a : c.args) used[static_cast<size_t>(a)] = true;
        for (int v = 0; v < current.num_variables(); ++v) {
            if (used[static_cast<size_t>(v)]) continue;
            Formula candidate = without_variable(current, v);
            if (still_fails(candidate)) {
                current = std::move(candidate);
                improved = true;
                break;
            }
        }
    }
    return current;
}

Graph minimize_failing_graph(const Graph& g,
                             const std::function<bool(const Graph&)>& still_fails) {
    Graph current = g;
    bool improved = true;
    while (improved) {
        improved = false;
        for (auto edge : current.edges()) {
            Graph candidate;
            for (const auto& l : current.labels()) candidate.add_vertex(l);
            for (auto e : current.edges())
                if (e != edge) candidate.add_edge(e.first, e.second);
            if (still_fails(candidate)) {
                current = std::move(candidate);
                improved = true;
                break;
            }
        }
    }
    improved = true;
    while (improved) {
        improved = false;
        std::vector<bool> touched(static_cast<size_t>(current.num_vertices()), false);
        for (auto [u, v] : current.edges())
            touched[static_cast<size_t>(u)] = touched[static_cast<size_t>(v)] = true;
        for (int v = 0; v < current.num_vertices(); ++v) {
            if (touched[static_cast<size_t>(v)]) continue;
            std::vector<int> keep;
            for (int u = 0; u < current.num_vertices(); ++u)
                if (u != v) keep.push_back(u);
            Graph candidate = current.induced(keep);
            if (still_fails(candidate)) {
                current = std::move(candidate);
                improved = true;
                break;
            }
        }
    }
    return current;
}

}  // namespace modkcsp

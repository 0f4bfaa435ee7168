#pragma once

#include <functional>

#include "modkcsp/formula.hpp"
#include "modkcsp/graph.hpp"

namespace modkcsp {

/// One cross-oracle congruence check over an instance. run() returns nullopt
/// when the check does not apply (wrong shape, over a cap), otherwise
/// pass/fail.
template <typename Instance>
struct InstanceCheck {
    std::string name;
    std::function<std::optional<bool>(const Instance&)> run;
};

/// Checks for formula instances: affine-vs-brute agreement, the parity
/// gadget round trip, and the prime gadget round trip for each given prime.
std::vector<InstanceCheck<Formula>> formula_checks(const std::vector<std::uint64_t>& primes,
                                                   int enum_cap = kDefaultEnumCap,
                                                   int graph_cap = kDefaultGraphCap);

/// Checks for graph instances: OR2-formula parsimony and, for bipartite
/// graphs, OR1-formula parsimony.
std::vector<InstanceCheck<Graph>> graph_checks(int enum_cap = kDefaultEnumCap,
                                               int graph_cap = kDefaultGraphCap);

/// Greedy shrink: drop constraints, then unused variables, as long as
/// still_fails holds. Used to produce counterexample files from failing
/// verify runs.
Formula minimize_failing_formula(const Formula& f,
                                 const std::function<bool(const Formula&)>& still_fails);

/// Greedy shrink for graphs: drop edges, then isolated vertices.
Graph minimize_failing_graph(const Graph& g, const std::function<bool(const Graph&)>& still_fails);

}  // namespace modkcsp

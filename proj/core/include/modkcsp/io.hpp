#pragma once

#include <string>

#include "modkcsp/formula.hpp"
#include "modkcsp/graph.hpp"
#include "modkcsp/implement.hpp"

namespace modkcsp {

// Line-oriented instance formats. '#' starts a comment; blank lines are
// skipped. Errors carry 1-based line numbers.
//
//   relation file:  relation NAME ARITY / one bitstring tuple per line / end
//   formula file:   vars x1 x2 ...     / NAME(v,...) one per line
//   graph file:     vertices a b c     / edge a b  one per line

RelationSet parse_relation_file(const std::string& text);
std::string serialize_relations(const RelationSet& set);

/// Relation names are resolved against env (typically builtins plus a parsed
/// relation file).
Formula parse_formula_file(const std::string& text, const RelationSet& env);
std::string serialize_formula(const Formula& f);

Graph parse_graph_file(const std::string& text);
std::string serialize_graph(const Graph& g);

/// DIMACS CNF. Clauses become applications of canonical per-width clause
/// relations (C<w>_<negation bits>); the satisfying-assignment count over the
/// declared n variables is preserved. Empty clauses are rejected.
Formula parse_dimacs(const std::string& text);
std::string serialize_dimacs(const Formula& cnf);

/// Graphviz text, bit-exact for a fixed vertex order: one node line per
/// vertex in index order, one "u -- v" line per edge in sorted index order.
std::string emit_dot(const Graph& g);

/// Witness file: 'function_vars ...' and 'aux_vars ...' headers, then one
/// constraint per line in formula syntax.
std::string serialize_witness(const ImplementationWitness& w);
ImplementationWitness parse_witness_file(const std::string& text, const RelationSet& env);

enum class InstanceFormat { kRelationSet, kFormula, kGraph, kDimacs };

/// Sniffs the leading keyword ("relation", "vars", "vertices", "p"/"c").
InstanceFormat detect_format(const std::string& text);

/// FNV-1a over the raw bytes, as 16 hex digits. Used to tie reports to their
/// inputs; not cryptographic.
std::string content_digest(const std::string& bytes);

}  // namespace modkcsp

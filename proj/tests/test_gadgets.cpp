#include <doctest.h>

#include "modkcsp/gadgets.hpp"
#include "testutil.hpp"

using namespace modkcsp;

namespace {

// DIMACS-style clause lists over variables x1..xn.
Formula cnf_formula(int num_vars, const std::vector<std::vector<int>>& clauses) {
    std::vector<std::string> vars;
    for (int i = 0; i < num_vars; ++i) vars.push_back("x" + std::to_string(i + 1));
    Formula f(vars);
    for (const auto& clause : clauses) {
        Bits neg_mask = 0;
        std::vector<std::string> args;
        for (int lit : clause) {
            neg_mask = (neg_mask << 1) | static_cast<Bits>(lit < 0);
            args.push_back(vars[static_cast<size_t>(std::abs(lit) - 1)]);
        }
        f.add_constraint(clause_relation(static_cast<int>(clause.size()), neg_mask), args);
    }
    return f;
}

}  // namespace

TEST_CASE("fermat gadget closed forms") {
    auto h2 = make_fermat_gadget(2);
    CHECK(h2.graph.num_vertices() == 1);
    CHECK(h2.count_with == 2);
    CHECK(h2.count_without == 1);

    auto h3 = make_fermat_gadget(3);
    CHECK(h3.graph.num_vertices() == 2);
    CHECK(h3.count_with == 3);
    CHECK(h3.count_without == 2);

    auto h5 = make_fermat_gadget(5);
    CHECK(h5.graph.num_vertices() == 6);
    CHECK(h5.count_with == 15);
    CHECK(h5.count_without == 11);
    CHECK(h5.count_with % 5 == 0);
    CHECK(h5.count_without % 5 == 1);

    CHECK_THROWS_AS(make_fermat_gadget(4), InputError);
    CHECK_THROWS_AS(make_fermat_gadget(1), InputError);
    CHECK_THROWS_AS(make_fermat_gadget(0), InputError);
}

TEST_CASE("fermat gadget counts match count_is up to p = 11") {
    for (std::uint64_t p : {2, 3, 5, 7, 11}) {
        auto h = make_fermat_gadget(p);
        CHECK(count_is(h.graph) == h.count_with);
        std::vector<int> rest;
        for (int v = 0; v < h.graph.num_vertices(); ++v)
            if (v != h.distinguished) rest.push_back(v);
        CHECK(count_is(h.graph.induced(rest)) == h.count_without);
        CHECK(is_bipartite(h.graph));
    }
}

TEST_CASE("decomposition evaluation on the one-copy examples") {
    // Edge between x and a single-vertex copy: 3 independent sets, residue 1.
    Graph g;
    int x = g.add_vertex("x");
    int h = g.add_vertex("h");
    g.add_edge(x, h);
    GadgetDecomposition dec{{x}, {{{h}, h}}};
    CHECK(decomposition_count_mod(g, dec, Modulus(2)) == 1);
    CHECK(count_is(g) == 3);

    // A lone copy with empty X: the only term has an empty neighborhood.
    Graph g2;
    int h2 = g2.add_vertex("h");
    GadgetDecomposition dec2{{}, {{{h2}, h2}}};
    CHECK(decomposition_count_mod(g2, dec2, Modulus(2)) == 0);
    CHECK(count_is(g2) == 2);
}

TEST_CASE("decomposition validation names the violation") {
    Graph g;
    int x = g.add_vertex("x");
    int h1 = g.add_vertex("h1");
    int h2 = g.add_vertex("h2");
    g.add_edge(h1, h2);

    GadgetDecomposition two_copies{{x}, {{{h1}, h1}, {{h2}, h2}}};
    CHECK_THROWS_WITH_AS(validate_decomposition(g, two_copies, Modulus(2)),
                         "edge h1 -- h2 joins two different copies", ContractError);

    GadgetDecomposition bad_count{{x}, {{{h1, h2}, h1}}};
    // The K2 copy has 3 independent sets, nonzero mod 2.
    CHECK_THROWS_AS(validate_decomposition(g, bad_count, Modulus(2)), ContractError);

    GadgetDecomposition overlapping{{x, h1}, {{{h1, h2}, h1}}};
    CHECK_THROWS_AS(validate_decomposition(g, overlapping, Modulus(2)), ContractError);
}

TEST_CASE("decomposition evaluation rejects non-distinguished attachments") {
    Graph g;
    int x = g.add_vertex("x");
    int a = g.add_vertex("a");
    int b = g.add_vertex("b");
    g.add_edge(a, b);
    g.add_edge(x, b);  // copy entered away from its distinguished vertex
    GadgetDecomposition dec{{x}, {{{a, b}, a}}};
    CHECK_THROWS_WITH_AS(validate_decomposition(g, dec, Modulus(3)),
                         "edge x -- b enters a copy away from its distinguished vertex",
                         ContractError);
}

TEST_CASE("decomposition evaluation equals direct counting on random instances") {
    testutil::Rng rng(17);
    int built = 0;
    for (int trial = 0; trial < 80; ++trial) {
        std::int64_t k = testutil::rand_int(rng, 2, 6);
        auto fixture = testutil::random_decomposition(rng, Modulus(k), 20);
        if (fixture.decomposition.copies.empty()) continue;
        ++built;
        CHECK(decomposition_count_mod(fixture.graph, fixture.decomposition, Modulus(k)) ==
              count_is_mod(fixture.graph, Modulus(k)));
    }
    CHECK(built >= 40);
}

TEST_CASE("decomposition evaluation enforces the x_set cap") {
    Graph g;
    std::vector<int> xs;
    for (int i = 0; i < 5; ++i) xs.push_back(g.add_vertex("x" + std::to_string(i)));
    int h = g.add_vertex("h");
    g.add_edge(h, xs[0]);
    GadgetDecomposition dec{xs, {{{h}, h}}};
    CHECK_THROWS_AS(decomposition_count_mod(g, dec, Modulus(2), 4), ResourceError);
    CHECK_NOTHROW(decomposition_count_mod(g, dec, Modulus(2), 5));
}

TEST_CASE("parity gadget reproduces the drawn single-clause shape") {
    Formula cnf = cnf_formula(2, {{1, -2}});
    auto [g, dec] = parity_gadget(cnf);
    CHECK(g.num_vertices() == 7);
    CHECK(g.num_edges() == 8);
    CHECK(g.vertex_index("v1") == 0);
    CHECK(g.vertex_index("nv1") == 1);
    CHECK(g.vertex_index("p1") == 2);
    CHECK(g.vertex_index("c1") == 6);
    CHECK(g.has_edge(g.vertex_index("c1"), g.vertex_index("v1")));
    CHECK(g.has_edge(g.vertex_index("c1"), g.vertex_index("nv2")));
    CHECK(count_is_mod(g, Modulus(2)) == 1);
    CHECK(brute_force_count(cnf) == 3);
    CHECK(decomposition_count_mod(g, dec, Modulus(2)) == 1);
}

TEST_CASE("parity gadget on a contradiction") {
    Formula cnf = cnf_formula(1, {{1}, {-1}});
    auto [g, dec] = parity_gadget(cnf);
    CHECK(count_is_mod(g, Modulus(2)) == 0);
    CHECK(brute_force_count(cnf) == 0);
}

TEST_CASE("parity gadget size arithmetic") {
    testutil::Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        int n = testutil::rand_int(rng, 1, 6);
        int m = testutil::rand_int(rng, 0, 4);
        Formula cnf = testutil::random_cnf(rng, n, m, 3);
        auto [g, dec] = parity_gadget(cnf);
        CHECK(g.num_vertices() == 3 * n + m);
        int literal_count = 0;
        for (const auto& c : cnf.constraints()) {
            std::set<int> distinct(c.args.begin(), c.args.end());
            // Duplicate literals collapse; count edges, not occurrences.
            const Relation& r = cnf.relations()[static_cast<size_t>(c.relation)];
            std::set<std::pair<int, bool>> lits;
            Bits miss = r.falsifying_tuple();
            for (int j = 0; j < r.arity(); ++j)
                lits.insert({c.args[static_cast<size_t>(j)], tuple_bit(miss, r.arity(), j) == 1});
            literal_count += static_cast<int>(lits.size());
        }
        CHECK(g.num_edges() == 3 * n + literal_count);
    }
}

TEST_CASE("parity gadget matches SAT parity on random CNFs") {
    testutil::Rng rng(2718);
    for (int trial = 0; trial < 60; ++trial) {
        Formula cnf = testutil::random_cnf(rng, testutil::rand_int(rng, 1, 6),
                                           testutil::rand_int(rng, 0, 4), 3);
        auto [g, dec] = parity_gadget(cnf);
        CHECK(count_is_mod(g, Modulus(2)) == count_mod(cnf, Modulus(2)));
    }
}

TEST_CASE("gadgets handle tautological clauses") {
    // x1 or not(x1): always satisfied, so the clause copy is always dominated.
    Formula cnf = cnf_formula(1, {{1, -1}});
    REQUIRE(brute_force_count(cnf) == 2);
    auto [g, dec] = parity_gadget(cnf);
    CHECK(count_is_mod(g, Modulus(2)) == 0);

    PrimeGadgetOutput out = prime_gadget(cnf, 3);
    std::uint64_t residue = count_is_mod(out.graph, Modulus(3));
    CHECK(recover_sat_count_mod_p(out, residue) == 2);
}

TEST_CASE("parity gadget rejects non-clause relations") {
    Formula f({"x", "y"});
    f.add_constraint(builtin_relations().at("XOR"), {"x", "y"});
    CHECK_THROWS_AS(parity_gadget(f), InputError);
}

TEST_CASE("prime gadget on a unit clause at p = 3") {
    Formula cnf = cnf_formula(1, {{1}});
    PrimeGadgetOutput out = prime_gadget(cnf, 3);
    CHECK(out.graph.num_vertices() == 10);  // 4 + 3 copies of K_{1,1}
    CHECK(out.d == 2);
    CHECK(out.copy_count == 3);
    std::uint64_t residue = count_is_mod(out.graph, Modulus(3));
    CHECK(residue == 2);  // 1 * 2^3 mod 3
    CHECK(recover_sat_count_mod_p(out, residue) == 1);
    CHECK(decomposition_count_mod(out.graph, out.decomposition, Modulus(3)) == residue);
    REQUIRE(out.variable_map.size() == 1);
    CHECK(out.variable_map[0].first == "x1");
    CHECK(out.variable_map[0].second == std::pair<std::string, std::string>{"v1", "nv1"});
}

TEST_CASE("prime gadget at p = 2 uses single-vertex copies") {
    Formula cnf = cnf_formula(2, {{1, -2}});
    PrimeGadgetOutput out = prime_gadget(cnf, 2);
    CHECK(out.d == 1);
    std::uint64_t residue = count_is_mod(out.graph, Modulus(2));
    CHECK(residue == 1);  // 3 * 1 mod 2
    CHECK(recover_sat_count_mod_p(out, residue) == 1);
}

TEST_CASE("prime gadget size arithmetic and bipartiteness") {
    testutil::Rng rng(5);
    for (std::uint64_t p : {3, 5}) {
        for (int trial = 0; trial < 6; ++trial) {
            int n = testutil::rand_int(rng, 1, 3);
            int m = testutil::rand_int(rng, 0, 2);
            Formula cnf = testutil::random_cnf(rng, n, m, 2);
            PrimeGadgetOutput out = prime_gadget(cnf, p);
            CHECK(out.graph.num_vertices() ==
                  4 * n + (2 * n + m) * static_cast<int>(2 * p - 4));
            CHECK(is_bipartite(out.graph));
            CHECK(out.variable_map.size() == static_cast<size_t>(n));
        }
    }
    CHECK_THROWS_AS(prime_gadget(cnf_formula(1, {{1}}), 6), InputError);
}

TEST_CASE("prime gadget round trip for p in {2,3,5,7}") {
    testutil::Rng rng(31415);
    for (std::uint64_t p : {2, 3, 5, 7}) {
        for (int trial = 0; trial < 10; ++trial) {
            int n = testutil::rand_int(rng, 1, 4);
            int m = testutil::rand_int(rng, 0, 3);
            Formula cnf = testutil::random_cnf(rng, n, m, 3);
            PrimeGadgetOutput out = prime_gadget(cnf, p);
            // Direct counting fits for small p; the decomposition evaluation
            // covers the larger gadgets and is oracle-checked above.
            std::uint64_t residue =
                out.graph.num_vertices() <= kDefaultGraphCap
                    ? count_is_mod(out.graph, Modulus(p))
                    : decomposition_count_mod(out.graph, out.decomposition, Modulus(p));
            CHECK(recover_sat_count_mod_p(out, residue) == count_mod(cnf, Modulus(p)));
        }
    }
}

TEST_CASE("recovery divides out the copy factor") {
    PrimeGadgetOutput out;
    out.p = 3;
    out.d = 2;
    out.copy_count = 3;
    CHECK(recover_sat_count_mod_p(out, 2) == 1);

    out.p = 2;
    out.d = 1;
    out.copy_count = 7;
    CHECK(recover_sat_count_mod_p(out, 1) == 1);
    CHECK(recover_sat_count_mod_p(out, 0) == 0);

    out.p = 5;
    out.d = 11;  // = 1 mod 5, so residues pass through unchanged
    out.copy_count = 4;
    CHECK(recover_sat_count_mod_p(out, 3) == 3);

    out.d = 5;
    CHECK_THROWS_AS(recover_sat_count_mod_p(out, 1), ContractError);
}

TEST_CASE("or2 formula from graph") {
    Graph single;
    single.add_vertex("a");
    single.add_vertex("b");
    single.add_edge(0, 1);
    Formula f = graph_to_or2_formula(single);
    CHECK(f.constraints().size() == 1);
    CHECK(brute_force_count(f) == 3);

    Graph triangle;
    for (int i = 0; i < 3; ++i) triangle.add_vertex("t" + std::to_string(i));
    triangle.add_edge(0, 1);
    triangle.add_edge(1, 2);
    triangle.add_edge(0, 2);
    Formula tf = graph_to_or2_formula(triangle);
    CHECK(tf.constraints().size() == 3);
    CHECK(brute_force_count(tf) == 4);

    Graph edgeless;
    for (int i = 0; i < 3; ++i) edgeless.add_vertex("e" + std::to_string(i));
    Formula ef = graph_to_or2_formula(edgeless);
    CHECK(ef.constraints().empty());
    CHECK(brute_force_count(ef) == 8);
}

TEST_CASE("or1 formula from bipartite graph") {
    Graph single;
    single.add_vertex("u");
    single.add_vertex("v");
    single.add_edge(0, 1);
    CHECK(brute_force_count(bipartite_to_or1_formula(single, {0}, {1})) == 3);

    // Path u - v - w with u, w on the left: 5 independent sets.
    Graph path;
    path.add_vertex("u");
    path.add_vertex("v");
    path.add_vertex("w");
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    Formula pf = bipartite_to_or1_formula(path, {0, 2}, {1});
    CHECK(pf.constraints().size() == 2);
    CHECK(brute_force_count(pf) == 5);
    CHECK(count_is(path) == 5);

    Graph edgeless;
    for (int i = 0; i < 4; ++i) edgeless.add_vertex("e" + std::to_string(i));
    CHECK(brute_force_count(bipartite_to_or1_formula(edgeless, {0, 1}, {2, 3})) == 16);
}

TEST_CASE("or1 formula rejects bad bipartitions") {
    Graph g;
    g.add_vertex("a");
    g.add_vertex("b");
    g.add_edge(0, 1);
    CHECK_THROWS_AS(bipartite_to_or1_formula(g, {0, 1}, {}), InputError);
    CHECK_THROWS_AS(bipartite_to_or1_formula(g, {0}, {}), InputError);
    CHECK_THROWS_AS(bipartite_to_or1_formula(g, {0, 1}, {1}), InputError);

    Graph triangle;
    for (int i = 0; i < 3; ++i) triangle.add_vertex("t" + std::to_string(i));
    triangle.add_edge(0, 1);
    triangle.add_edge(1, 2);
    triangle.add_edge(0, 2);
    CHECK_THROWS_AS(bipartite_to_or1_formula(triangle), InputError);
}

TEST_CASE("graph-to-formula reductions are parsimonious on random graphs") {
    testutil::Rng rng(161803);
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = testutil::random_graph(rng, testutil::rand_int(rng, 0, 15), 0.3);
        CHECK(brute_force_count(graph_to_or2_formula(g)) == count_is(g));
    }
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = testutil::random_bipartite_graph(rng, testutil::rand_int(rng, 1, 7),
                                                   testutil::rand_int(rng, 1, 7), 0.4);
        CHECK(brute_force_count(bipartite_to_or1_formula(g)) == count_is(g));
    }
}

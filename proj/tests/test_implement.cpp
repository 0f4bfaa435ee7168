#include <doctest.h>

#include "modkcsp/implement.hpp"
#include "testutil.hpp"

using namespace modkcsp;

namespace {

const Relation& builtin(const std::string& name) { return builtin_relations().at(name); }

RelationSet set_of(std::initializer_list<Relation> relations) {
    RelationSet s;
    for (const auto& r : relations) insert_relation(s, r);
    return s;
}

Relation one_in_3() { return Relation("ONEIN3", 3, {0b100, 0b010, 0b001}); }

// The worked one-auxiliary witness: {OR0(x,y), F(y)} implements T(x).
ImplementationWitness or0_f_implements_t() {
    ImplementationWitness w;
    w.function_vars = {"x"};
    w.aux_vars = {"y"};
    insert_relation(w.relations, builtin("OR0"));
    insert_relation(w.relations, builtin("F"));
    w.constraints = {{"OR0", {"x", "y"}}, {"F", {"y"}}};
    return w;
}

ImplementationWitness identity_witness(const Relation& r) {
    ImplementationWitness w;
    for (int j = 0; j < r.arity(); ++j) w.function_vars.push_back("x" + std::to_string(j + 1));
    insert_relation(w.relations, r);
    w.constraints.push_back({r.name(), w.function_vars});
    return w;
}

}  // namespace

TEST_CASE("verify_faithful on the worked examples") {
    CHECK(verify_faithful(or0_f_implements_t(), builtin("T")).ok);

    ImplementationWitness incomplete = or0_f_implements_t();
    incomplete.constraints.pop_back();  // drop F(y): no longer faithful for T
    auto check = verify_faithful(incomplete, builtin("T"));
    CHECK_FALSE(check.ok);
    // First violation in enumeration order: x=0 keeps one extension (y=1)
    // where T(0)=0 demands none. x=1 would show two extensions.
    CHECK(check.bad_assignment == 0);
    CHECK(check.extension_count == 1);
    CHECK(check.message.find("expected 0") != std::string::npos);

    CHECK(verify_faithful(identity_witness(builtin("XOR")), builtin("XOR")).ok);
}

TEST_CASE("verify_faithful enforces arity and caps") {
    CHECK_THROWS_AS(verify_faithful(or0_f_implements_t(), builtin("XOR")), InputError);
    ImplementationWitness wide = or0_f_implements_t();
    for (int i = 0; i < 30; ++i) wide.aux_vars.push_back("pad" + std::to_string(i));
    CHECK_THROWS_AS(verify_faithful(wide, builtin("T")), ResourceError);
}

TEST_CASE("strict faithfulness implies mod-k faithfulness") {
    testutil::Rng rng(64);
    std::vector<std::pair<ImplementationWitness, Relation>> witnesses{
        {or0_f_implements_t(), builtin("T")},
        {identity_witness(builtin("XOR")), builtin("XOR")},
        {identity_witness(builtin("NAE3")), builtin("NAE3")},
    };
    auto found = search_implementation(set_of({one_in_3()}), builtin("T"));
    REQUIRE(found.has_value());
    witnesses.push_back({*found, builtin("T")});
    for (const auto& [w, target] : witnesses) {
        REQUIRE(verify_faithful(w, target).ok);
        for (std::int64_t k : {2, 3, 5})
            CHECK(verify_faithful_mod(w, target, Modulus(k)).ok);
    }
}

TEST_CASE("search finds the smallest witness first and stays deterministic") {
    auto witness = search_implementation(set_of({builtin("OR0"), builtin("F")}), builtin("T"));
    REQUIRE(witness.has_value());
    // First hit under the (aux, size, lexicographic) order: OR0 applied to
    // (x1, x1), with no auxiliaries at all.
    CHECK(witness->aux_vars.empty());
    REQUIRE(witness->constraints.size() == 1);
    CHECK(witness->constraints[0] ==
          ImplementationWitness::Constraint{"OR0", {"x1", "x1"}});

    auto again = search_implementation(set_of({builtin("OR0"), builtin("F")}), builtin("T"));
    REQUIRE(again.has_value());
    CHECK(*again == *witness);
}

TEST_CASE("search covers the not-0-valid not-C-closed case") {
    auto witness = search_implementation(set_of({one_in_3()}), builtin("T"));
    REQUIRE(witness.has_value());
    CHECK(witness->aux_vars.size() == 1);
    REQUIRE(witness->constraints.size() == 1);
    CHECK(witness->constraints[0] ==
          ImplementationWitness::Constraint{"ONEIN3", {"x1", "y1", "y1"}});
    CHECK(verify_faithful(*witness, builtin("T")).ok);
}

TEST_CASE("an affine set cannot implement OR0 within the default bounds") {
    CHECK_FALSE(search_implementation(set_of({builtin("XOR")}), builtin("OR0")).has_value());
}

TEST_CASE("NAE3 implements XOR by argument doubling") {
    auto witness = search_implementation(set_of({builtin("NAE3")}), builtin("XOR"));
    REQUIRE(witness.has_value());
    CHECK(witness->aux_vars.empty());
    REQUIRE(witness->constraints.size() == 1);
    CHECK(witness->constraints[0] ==
          ImplementationWitness::Constraint{"NAE3", {"x1", "x1", "x2"}});
}

TEST_CASE("joint search reports which target it hit") {
    std::vector<TargetFunction> targets{builtin("OR0"), builtin("OR1"), builtin("OR2")};
    auto hit = search_implementation_any(set_of({one_in_3(), builtin("T"), builtin("F")}), targets);
    REQUIRE(hit.has_value());
    CHECK(verify_faithful(hit->second, targets[static_cast<size_t>(hit->first)]).ok);
}

TEST_CASE("apply_implementations composes the worked example") {
    Formula f({"x1"});
    f.add_constraint(builtin("T"), {"x1"});
    std::map<std::string, ImplementationWitness> map{{"T", or0_f_implements_t()}};
    Formula out = apply_implementations(f, map);
    CHECK(out.variables() == std::vector<std::string>{"x1", "aux_0_0"});
    REQUIRE(out.constraints().size() == 2);
    CHECK(out.relations()[static_cast<size_t>(out.constraints()[0].relation)].name() == "OR0");
    CHECK(out.relations()[static_cast<size_t>(out.constraints()[1].relation)].name() == "F");
    CHECK(brute_force_count(out) == 1);
    CHECK(brute_force_count(f) == 1);
}

TEST_CASE("apply_implementations preserves exact counts") {
    Formula f({"x1", "x2"});
    f.add_constraint(builtin("T"), {"x1"});
    f.add_constraint(builtin("T"), {"x2"});
    std::map<std::string, ImplementationWitness> map{{"T", or0_f_implements_t()}};
    Formula out = apply_implementations(f, map);
    CHECK(out.num_variables() == 4);  // two fresh auxiliaries
    CHECK(brute_force_count(out) == brute_force_count(f));
    CHECK(brute_force_count(out) == 1);
}

TEST_CASE("apply_implementations with the identity map is count-neutral") {
    testutil::Rng rng(7);
    std::vector<Relation> pool{builtin("OR0"), builtin("XOR"), builtin("T")};
    for (int trial = 0; trial < 20; ++trial) {
        Formula f = testutil::random_formula(rng, pool, testutil::rand_int(rng, 1, 5),
                                             testutil::rand_int(rng, 1, 4));
        std::map<std::string, ImplementationWitness> map;
        for (const auto& [name, r] : f.used_relations()) map[name] = identity_witness(r);
        CHECK(brute_force_count(apply_implementations(f, map)) == brute_force_count(f));
    }
}

TEST_CASE("apply_implementations rejects missing and unfaithful witnesses") {
    Formula f({"x1"});
    f.add_constraint(builtin("T"), {"x1"});
    CHECK_THROWS_AS(apply_implementations(f, {}), InputError);

    ImplementationWitness broken = or0_f_implements_t();
    broken.constraints.pop_back();
    std::map<std::string, ImplementationWitness> map{{"T", broken}};
    CHECK_THROWS_AS(apply_implementations(f, map), ContractError);
}

TEST_CASE("apply_implementations preserves counts through searched witnesses") {
    testutil::Rng rng(911);
    std::map<std::string, ImplementationWitness> map;
    map["T"] = *search_implementation(set_of({builtin("OR0"), builtin("F")}), builtin("T"));
    map["XOR"] = *search_implementation(set_of({builtin("NAE3")}), builtin("XOR"));
    map["OR0"] = identity_witness(builtin("OR0"));
    std::vector<Relation> pool{builtin("T"), builtin("XOR"), builtin("OR0")};
    for (int trial = 0; trial < 30; ++trial) {
        Formula f = testutil::random_formula(rng, pool, testutil::rand_int(rng, 1, 5),
                                             testutil::rand_int(rng, 1, 5));
        CHECK(brute_force_count(apply_implementations(f, map)) == brute_force_count(f));
    }
}

TEST_CASE("xor doubling transform on the worked example") {
    Formula f({"x1", "x2"});
    f.add_constraint(builtin("XOR"), {"x1", "x2"});
    f.add_constraint(builtin("T"), {"x1"});
    REQUIRE(brute_force_count(f) == 1);
    Formula out = xor_doubling_transform(f);
    CHECK(out.variables() == std::vector<std::string>{"x2", "y0", "y1"});
    REQUIRE(out.constraints().size() == 2);
    CHECK(brute_force_count(out) == 2);
}

TEST_CASE("xor doubling with no constants adds a free pair") {
    Formula f({"a", "b"});
    f.add_constraint(builtin("XOR"), {"a", "b"});
    Formula out = xor_doubling_transform(f);
    CHECK(out.num_variables() == 4);
    CHECK(brute_force_count(out) == 2 * brute_force_count(f));
}

TEST_CASE("xor doubling with both constants") {
    Formula f({"x1", "x2"});
    f.add_constraint(builtin("XOR"), {"x1", "x2"});
    f.add_constraint(builtin("F"), {"x1"});
    f.add_constraint(builtin("T"), {"x2"});
    REQUIRE(brute_force_count(f) == 1);
    CHECK(brute_force_count(xor_doubling_transform(f)) == 2);
}

TEST_CASE("xor doubling requires a C-closed core") {
    Formula f({"x1", "x2"});
    f.add_constraint(builtin("OR0"), {"x1", "x2"});
    f.add_constraint(builtin("T"), {"x1"});
    CHECK_THROWS_AS(xor_doubling_transform(f), ContractError);
}

TEST_CASE("xor doubling keeps contradictory constants at count zero") {
    Formula f({"x1", "x2"});
    f.add_constraint(builtin("XOR"), {"x1", "x2"});
    f.add_constraint(builtin("T"), {"x1"});
    f.add_constraint(builtin("F"), {"x1"});
    REQUIRE(brute_force_count(f) == 0);
    CHECK(brute_force_count(xor_doubling_transform(f)) == 0);
}

TEST_CASE("false-variable merge on the worked examples") {
    Formula f({"x1", "x2"});
    f.add_constraint(builtin("XOR"), {"x1", "x2"});
    f.add_constraint(builtin("F"), {"x1"});
    REQUIRE(brute_force_count(f) == 1);
    Formula out = false_var_merge_transform(f);
    CHECK(out.variables() == std::vector<std::string>{"x2", "x0"});
    REQUIRE(out.constraints().size() == 1);
    CHECK(brute_force_count(out) == 2);

    Formula both({"x1", "x2"});
    both.add_constraint(builtin("XOR"), {"x1", "x2"});
    both.add_constraint(builtin("F"), {"x1"});
    both.add_constraint(builtin("F"), {"x2"});
    REQUIRE(brute_force_count(both) == 0);
    Formula merged = false_var_merge_transform(both);
    CHECK(brute_force_count(merged) == 0);  // XOR(x0,x0) is unsatisfiable

    Formula no_f({"a"});
    no_f.add_constraint(builtin("XOR"), {"a", "a"});
    Formula widened = false_var_merge_transform(no_f);
    CHECK(widened.num_variables() == 2);
    CHECK(brute_force_count(widened) == 2 * brute_force_count(no_f));
}

TEST_CASE("false-variable merge requires a C-closed core") {
    Formula f({"x1", "x2"});
    f.add_constraint(builtin("OR1"), {"x1", "x2"});
    f.add_constraint(builtin("F"), {"x1"});
    CHECK_THROWS_AS(false_var_merge_transform(f), ContractError);

    Formula with_t({"x1"});
    with_t.add_constraint(builtin("T"), {"x1"});
    CHECK_THROWS_AS(false_var_merge_transform(with_t), ContractError);
}

TEST_CASE("both transforms double counts on random C-closed inputs") {
    testutil::Rng rng(24601);
    int zero_cases = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Relation> pool;
        int nrel = testutil::rand_int(rng, 1, 2);
        for (int i = 0; i < nrel; ++i)
            pool.push_back(testutil::random_c_closed_relation(
                rng, "cc" + std::to_string(i), testutil::rand_int(rng, 1, 3)));
        pool.push_back(builtin("T"));
        pool.push_back(builtin("F"));
        Formula f = testutil::random_formula(rng, pool, testutil::rand_int(rng, 1, 5),
                                             testutil::rand_int(rng, 0, 5));
        BigInt before = brute_force_count(f);
        if (before == 0) ++zero_cases;
        CHECK(brute_force_count(xor_doubling_transform(f)) == 2 * before);

        // The merge transform takes formulas over S + {F} only.
        Formula no_t;
        for (const auto& v : f.variables()) no_t.add_variable(v);
        for (const auto& c : f.constraints()) {
            const Relation& r = f.relations()[static_cast<size_t>(c.relation)];
            if (r.arity() == 1 && r.satisfying() == std::vector<Bits>{1}) continue;
            no_t.add_constraint(no_t.intern_relation(r), c.args);
        }
        CHECK(brute_force_count(false_var_merge_transform(no_t)) ==
              2 * brute_force_count(no_t));
    }
    CHECK(zero_cases > 0);
}

TEST_CASE("reduction certificates per proof case") {
    SUBCASE("1-valid only") {
        auto cert = build_reduction_certificate(set_of({builtin("OR0")}), Modulus(3));
        CHECK(cert.case_tag == "g 0-valid xor 1-valid");
        CHECK(cert.target == "OR0");
        CHECK(cert.complete);
        REQUIRE(cert.witnesses.size() == 2);
        CHECK(cert.witnesses[0].target == "T");
        CHECK(cert.transforms.empty());
    }
    SUBCASE("0-valid only") {
        auto cert = build_reduction_certificate(set_of({builtin("OR2")}), Modulus(2));
        CHECK(cert.case_tag == "g 0-valid xor 1-valid");
        CHECK(cert.witnesses[0].target == "F");
        CHECK((cert.target == "OR1" || cert.target == "OR2"));
        CHECK(cert.complete);
    }
    SUBCASE("both valid, not C-closed") {
        auto cert = build_reduction_certificate(set_of({builtin("OR1")}), Modulus(5));
        CHECK(cert.case_tag == "g 0-valid and 1-valid");
        CHECK(cert.target == "OR1");
        CHECK(cert.complete);
    }
    SUBCASE("neither valid, C-closed set: doubling transform with an odd prime factor") {
        auto cert = build_reduction_certificate(set_of({builtin("NAE3")}), Modulus(3));
        CHECK(cert.case_tag == "g neither 0-valid nor 1-valid");
        REQUIRE(cert.witnesses.size() == 2);
        CHECK(cert.witnesses[0].target == "XOR");
        REQUIRE(cert.transforms.size() == 1);
        CHECK(cert.transforms[0].name == "xor_doubling_transform");
        CHECK(cert.transforms[0].factor == 3);
        CHECK(cert.complete);
    }
    SUBCASE("power-of-two modulus records the 2^l factor") {
        auto cert = build_reduction_certificate(set_of({builtin("NAE3")}), Modulus(4));
        REQUIRE(cert.transforms.size() == 1);
        CHECK(cert.transforms[0].factor == 4);
        auto cert12 = build_reduction_certificate(set_of({builtin("NAE3")}), Modulus(12));
        CHECK(cert12.transforms[0].factor == 3);  // smallest odd prime wins
    }
    SUBCASE("neither valid, not C-closed: constants route") {
        auto cert = build_reduction_certificate(set_of({one_in_3()}), Modulus(5));
        CHECK(cert.case_tag == "g neither 0-valid nor 1-valid");
        REQUIRE(cert.witnesses.size() == 3);
        CHECK(cert.witnesses[0].target == "T");
        CHECK(cert.witnesses[1].target == "F");
        CHECK(cert.complete);
    }
    SUBCASE("C-closed g inside a non-C-closed set at k = 2 falls back to direct search") {
        Relation cc3("CC3", 3, {0b000, 0b111, 0b010, 0b101, 0b100, 0b011});
        auto cert = build_reduction_certificate(set_of({cc3, builtin("OR0")}), Modulus(2));
        CHECK(cert.case_tag == "g 0-valid and 1-valid");
        CHECK(cert.target == "OR0");
        CHECK(cert.complete);
        CHECK(cert.transforms.empty());
    }
}

TEST_CASE("certificate witnesses re-verify against their stated targets") {
    std::vector<std::pair<RelationSet, std::int64_t>> fixtures{
        {set_of({builtin("OR0")}), 3},  {set_of({builtin("OR2")}), 2},
        {set_of({builtin("OR1")}), 5},  {set_of({builtin("NAE3")}), 3},
        {set_of({builtin("NAE3")}), 4}, {set_of({one_in_3()}), 2},
    };
    for (const auto& [S, k] : fixtures) {
        auto cert = build_reduction_certificate(S, Modulus(k));
        CHECK(cert.complete);
        CHECK((cert.target == "OR0" || cert.target == "OR1" || cert.target == "OR2"));
        for (const auto& entry : cert.witnesses) {
            REQUIRE(entry.witness.has_value());
            CHECK(verify_faithful(*entry.witness, builtin(entry.target)).ok);
        }
    }
}

TEST_CASE("certificates flag exhausted bounds as incomplete") {
    SearchBounds tiny{0, 0};
    auto cert = build_reduction_certificate(set_of({builtin("OR0")}), Modulus(3), tiny);
    CHECK_FALSE(cert.complete);
}

TEST_CASE("certificates are only for Hard classifications") {
    CHECK_THROWS_AS(build_reduction_certificate(set_of({builtin("XOR")}), Modulus(3)),
                    ContractError);
    CHECK_THROWS_AS(build_reduction_certificate(set_of({builtin("NAE3")}), Modulus(2)),
                    ContractError);
}

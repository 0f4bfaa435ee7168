#include "modkcsp/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "modkcsp/affine.hpp"
#include "modkcsp/classify.hpp"
#include "modkcsp/gadgets.hpp"
#include "modkcsp/io.hpp"
#include "modkcsp/verify.hpp"

namespace modkcsp {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
}

struct Caps {
    int enum_cap = kDefaultEnumCap;
    int graph_cap = kDefaultGraphCap;
};

Caps caps_from_env() {
    Caps caps;
    if (const char* env = std::getenv("MODKCSP_ENUM_CAP")) {
        try {
            caps.enum_cap = std::stoi(env);
        } catch (const std::exception&) {
            throw InputError("MODKCSP_ENUM_CAP must be an integer");
        }
        if (caps.enum_cap < 1 || caps.enum_cap > 63)
            throw InputError("MODKCSP_ENUM_CAP must be in [1, 63]");
        caps.graph_cap = std::max(caps.graph_cap, caps.enum_cap);
    }
    return caps;
}

// Builtins plus an optional relation file; file definitions may restate a
// builtin only with identical content.
RelationSet relation_env(const std::string& relations_path, json& inputs) {
    RelationSet env = builtin_relations();
    if (!relations_path.empty()) {
        std::string text = read_file(relations_path);
        inputs[relations_path] = content_digest(text);
        for (const auto& [name, r] : parse_relation_file(text)) insert_relation(env, r);
    }
    return env;
}

Formula load_formula(const std::string& path, const RelationSet& env, json& inputs) {
    std::string text = read_file(path);
    inputs[path] = content_digest(text);
    switch (detect_format(text)) {
        case InstanceFormat::kFormula: return parse_formula_file(text, env);
        case InstanceFormat::kDimacs: return parse_dimacs(text);
        default: throw InputError("'" + path + "' is not a formula or DIMACS file");
    }
}

json properties_json(const PropertyReport& report, const RelationSet& S) {
    auto flags = [](const RelationProperties& p) {
        return json{{"0_valid", p.zero_valid},
                    {"1_valid", p.one_valid},
                    {"c_closed", p.c_closed},
                    {"affine", p.affine},
                    {"empty", p.empty}};
    };
    json relations = json::object();
    for (const auto& [name, p] : report.per_relation) relations[name] = flags(p);
    json out{{"relations", relations}, {"set", flags(report.set_level)}};
    if (report.affine_violation) {
        const auto& v = *report.affine_violation;
        int arity = S.at(v.relation).arity();
        out["affine_violation"] = {
            {"relation", v.relation},
            {"tuples", {tuple_to_string(v.a, arity), tuple_to_string(v.b, arity),
                        tuple_to_string(v.c, arity)}},
            {"xor", tuple_to_string(v.a ^ v.b ^ v.c, arity)}};
    }
    return out;
}

json witness_json(const ImplementationWitness& w) {
    json constraints = json::array();
    for (const auto& c : w.constraints) {
        std::string s = c.relation + "(";
        for (size_t j = 0; j < c.args.size(); ++j) {
            if (j) s += ",";
            s += c.args[j];
        }
        constraints.push_back(s + ")");
    }
    return json{{"function_vars", w.function_vars},
                {"aux_vars", w.aux_vars},
                {"constraints", constraints}};
}

json certificate_json(const ReductionCertificate& cert) {
    json witnesses = json::array();
    for (const auto& entry : cert.witnesses) {
        json e{{"target", entry.target}, {"found", entry.witness.has_value()}};
        if (entry.witness) e["witness"] = witness_json(*entry.witness);
        witnesses.push_back(e);
    }
    json transforms = json::array();
    for (const auto& t : cert.transforms)
        transforms.push_back({{"name", t.name}, {"factor", t.factor}});
    return json{{"case", cert.case_tag},
                {"witnesses", witnesses},
                {"transforms", transforms},
                {"target", cert.target},
                {"complete", cert.complete}};
}

struct Invocation {
    json inputs = json::object();
    json outputs = json::object();
    int exit_code = kExitOk;
};

Invocation cmd_classify(const std::string& relations_path, std::int64_t k,
                        const SearchBounds& bounds) {
    Invocation result;
    std::string text = read_file(relations_path);
    result.inputs[relations_path] = content_digest(text);
    RelationSet S = parse_relation_file(text);
    DichotomyVerdict verdict = classify(S, Modulus(k), bounds);
    result.outputs["outcome"] = to_string(verdict.outcome);
    result.outputs["k"] = k;
    result.outputs["properties"] = properties_json(verdict.properties, S);
    if (verdict.certificate) result.outputs["certificate"] = certificate_json(*verdict.certificate);
    return result;
}

Invocation cmd_count(const std::string& instance, const std::string& relations_path,
                     std::int64_t mod, const std::string& engine, const Caps& caps) {
    Invocation result;
    RelationSet env = relation_env(relations_path, result.inputs);
    Formula f = load_formula(instance, env, result.inputs);

    std::string chosen = engine;
    if (engine == "auto") {
        chosen = "affine";
        for (const auto& [name, r] : f.used_relations())
            if (!is_affine(r)) chosen = "brute";
    } else if (engine == "affine") {
        for (const auto& [name, r] : f.used_relations())
            if (!is_affine(r))
                throw InputError("relation '" + name + "' is not affine; --engine affine refuses");
    }
    result.outputs["engine"] = chosen;
    if (chosen == "affine") {
        result.outputs["count"] = count_affine(f).str();
        if (mod) result.outputs["residue"] = count_affine_mod(f, Modulus(mod));
    } else {
        result.outputs["count"] = brute_force_count(f, caps.enum_cap).str();
        if (mod) result.outputs["residue"] = count_mod(f, Modulus(mod), caps.enum_cap);
    }
    if (mod) result.outputs["mod"] = mod;
    return result;
}

json decomposition_json(const Graph& g, const GadgetDecomposition& dec) {
    json copies = json::array();
    for (const auto& copy : dec.copies) {
        json vertices = json::array();
        for (int v : copy.vertices) vertices.push_back(g.label(v));
        copies.push_back({{"vertices", vertices}, {"distinguished", g.label(copy.distinguished)}});
    }
    json x_set = json::array();
    for (int v : dec.x_set) x_set.push_back(g.label(v));
    return json{{"x_set", x_set}, {"copies", copies}};
}

Invocation cmd_gadget(const std::string& instance, const std::string& relations_path,
                      const std::string& mode, std::int64_t p, const std::string& out_path,
                      const std::string& dot_path) {
    Invocation result;
    RelationSet env = relation_env(relations_path, result.inputs);
    Formula cnf = load_formula(instance, env, result.inputs);
    Graph g;
    result.outputs["mode"] = mode;
    if (mode == "parity") {
        if (p) throw InputError("--p applies only to --mode prime");
        auto [graph, dec] = parity_gadget(cnf);
        g = std::move(graph);
        result.outputs["decomposition"] = decomposition_json(g, dec);
    } else if (mode == "prime") {
        if (p < 2) throw InputError("--mode prime requires --p");
        PrimeGadgetOutput out = prime_gadget(cnf, static_cast<std::uint64_t>(p));
        g = std::move(out.graph);
        result.outputs["p"] = p;
        result.outputs["d"] = out.d;
        result.outputs["copy_count"] = out.copy_count;
        json variable_map = json::object();
        for (const auto& [var, pair] : out.variable_map)
            variable_map[var] = {pair.first, pair.second};
        result.outputs["variable_map"] = variable_map;
        result.outputs["decomposition"] = decomposition_json(g, out.decomposition);
    } else {
        throw InputError("--mode must be parity or prime");
    }
    result.outputs["vertices"] = g.num_vertices();
    result.outputs["edges"] = g.num_edges();
    result.outputs["edge_list"] = serialize_graph(g);
    if (!out_path.empty()) write_file(out_path, serialize_graph(g));
    if (!dot_path.empty()) write_file(dot_path, emit_dot(g));
    return result;
}

std::vector<int> parse_label_list(const Graph& g, const std::string& csv) {
    std::vector<int> out;
    std::string current;
    for (char c : csv + ",") {
        if (c == ',') {
            if (current.empty()) continue;
            int v = g.vertex_index(current);
            if (v < 0) throw InputError("unknown vertex '" + current + "' in --left");
            out.push_back(v);
            current.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            current += c;
        }
    }
    return out;
}

Invocation cmd_reduce(const std::string& op, const std::string& instance,
                      const std::string& relations_path, const std::string& left_csv,
                      const std::string& out_path) {
    Invocation result;
    result.outputs["op"] = op;
    std::string serialized;
    if (op == "graph2or2" || op == "bip2or1") {
        std::string text = read_file(instance);
        result.inputs[instance] = content_digest(text);
        Graph g = parse_graph_file(text);
        Formula f;
        if (op == "graph2or2") {
            f = graph_to_or2_formula(g);
        } else if (!left_csv.empty()) {
            std::vector<int> left = parse_label_list(g, left_csv);
            std::vector<bool> in_left(static_cast<size_t>(g.num_vertices()), false);
            for (int v : left) in_left[static_cast<size_t>(v)] = true;
            std::vector<int> right;
            for (int v = 0; v < g.num_vertices(); ++v)
                if (!in_left[static_cast<size_t>(v)]) right.push_back(v);
            f = bipartite_to_or1_formula(g, left, right);
        } else {
            f = bipartite_to_or1_formula(g);
        }
        serialized = serialize_formula(f);
    } else if (op == "xordouble" || op == "falsemerge") {
        RelationSet env = relation_env(relations_path, result.inputs);
        Formula f = load_formula(instance, env, result.inputs);
        Formula transformed = op == "xordouble" ? xor_doubling_transform(f)
                                                : false_var_merge_transform(f);
        serialized = serialize_formula(transformed);
    } else {
        throw InputError("--op must be one of graph2or2, bip2or1, xordouble, falsemerge");
    }
    result.outputs["result"] = serialized;
    if (!out_path.empty()) write_file(out_path, serialized);
    return result;
}

Invocation cmd_implement(const std::string& relations_path, const std::string& target_path,
                         const SearchBounds& bounds, const std::string& out_path) {
    Invocation result;
    std::string rel_text = read_file(relations_path);
    result.inputs[relations_path] = content_digest(rel_text);
    RelationSet S = parse_relation_file(rel_text);
    std::string target_text = read_file(target_path);
    result.inputs[target_path] = content_digest(target_text);
    RelationSet target_set = parse_relation_file(target_text);
    if (target_set.size() != 1)
        throw InputError("target file must define exactly one relation");
    const TargetFunction& target = target_set.begin()->second;

    auto witness = search_implementation(S, target, bounds);
    result.outputs["target"] = target.name();
    result.outputs["found"] = witness.has_value();
    if (witness) {
        result.outputs["witness"] = witness_json(*witness);
        std::string text = serialize_witness(*witness);
        result.outputs["witness_file"] = text;
        if (!out_path.empty()) write_file(out_path, text);
    } else {
        result.exit_code = kExitNotFound;
    }
    return result;
}

Invocation cmd_certify(const std::string& relations_path, std::int64_t k,
                       const SearchBounds& bounds) {
    Invocation result;
    std::string text = read_file(relations_path);
    result.inputs[relations_path] = content_digest(text);
    RelationSet S = parse_relation_file(text);
    DichotomyVerdict verdict = classify(S, Modulus(k), bounds);
    result.outputs["outcome"] = to_string(verdict.outcome);
    if (verdict.outcome != Outcome::kHard)
        throw InputError("classification is " + to_string(verdict.outcome) +
                         "; reduction certificates exist only for Hard sets");
    result.outputs["certificate"] = certificate_json(*verdict.certificate);
    return result;
}

template <typename Instance>
int run_checks(const std::vector<InstanceCheck<Instance>>& checks, const Instance& instance,
               json& check_list, std::string* failing_name,
               std::function<bool(const Instance&)>* failing_pred) {
    int failures = 0;
    for (const auto& check : checks) {
        auto outcome = check.run(instance);
        std::string status = !outcome ? "skipped" : (*outcome ? "pass" : "fail");
        check_list.push_back({{"name", check.name}, {"status", status}});
        if (outcome && !*outcome) {
            ++failures;
            if (failing_name->empty()) {
                *failing_name = check.name;
                auto run = check.run;
                *failing_pred = [run](const Instance& candidate) {
                    auto r = run(candidate);
                    return r.has_value() && !*r;
                };
            }
        }
    }
    return failures;
}

Invocation cmd_verify(const std::string& instance, const std::string& relations_path,
                      std::vector<std::uint64_t> primes, const std::string& cx_path,
                      const Caps& caps) {
    Invocation result;
    for (std::uint64_t p : primes)
        if (!is_prime(p)) throw InputError("--p entries must be prime, got " + std::to_string(p));
    std::string text = read_file(instance);
    result.inputs[instance] = content_digest(text);
    InstanceFormat format = detect_format(text);

    json check_list = json::array();
    std::string failing_name;
    int failures = 0;
    std::string counterexample_path = cx_path.empty() ? instance + ".counterexample" : cx_path;

    if (format == InstanceFormat::kGraph) {
        Graph g = parse_graph_file(text);
        std::function<bool(const Graph&)> failing_pred;
        failures = run_checks(graph_checks(caps.enum_cap, caps.graph_cap), g, check_list,
                              &failing_name, &failing_pred);
        if (failures) {
            Graph minimized = minimize_failing_graph(g, failing_pred);
            write_file(counterexample_path, serialize_graph(minimized));
        }
    } else {
        RelationSet env = relation_env(relations_path, result.inputs);
        Formula f = format == InstanceFormat::kDimacs ? parse_dimacs(text)
                                                      : parse_formula_file(text, env);
        std::function<bool(const Formula&)> failing_pred;
        failures = run_checks(formula_checks(primes, caps.enum_cap, caps.graph_cap), f, check_list,
                              &failing_name, &failing_pred);
        if (failures) {
            Formula minimized = minimize_failing_formula(f, failing_pred);
            bool cnf_shaped = true;
            for (const auto& [name, r] : minimized.used_relations())
                if (!r.is_clause()) cnf_shaped = false;
            write_file(counterexample_path,
                       cnf_shaped ? serialize_dimacs(minimized) : serialize_formula(minimized));
        }
    }
    result.outputs["checks"] = check_list;
    result.outputs["failures"] = failures;
    if (failures) {
        result.outputs["first_failure"] = failing_name;
        result.outputs["counterexample"] = counterexample_path;
        result.exit_code = kExitContractError;
    }
    return result;
}

std::string join_args(const std::vector<std::string>& args) {
    std::string s = "modkcsp";
    for (const auto& a : args) s += " " + a;
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"mod-k counting toolkit for Boolean constraint satisfaction"};
    app.require_subcommand(1);

    SearchBounds bounds;
    std::string relations_path, instance, target_path, out_path, dot_path, left_csv;
    std::string engine = "auto", mode, op;
    std::int64_t k = 0, mod = 0, p = 0;
    std::string primes_csv = "2,3";
    std::string cx_path;

    auto add_bounds = [&bounds](CLI::App* cmd) {
        cmd->add_option("--max-aux", bounds.max_aux, "Auxiliary-variable bound for witness search");
        cmd->add_option("--max-constraints", bounds.max_constraints,
                        "Constraint-count bound for witness search");
    };

    CLI::App* classify_cmd = app.add_subcommand("classify", "Dichotomy verdict for a relation set");
    classify_cmd->add_option("--relations", relations_path, "Relation-set file")->required();
    classify_cmd->add_option("--k", k, "Counting modulus")->required();
    add_bounds(classify_cmd);

    CLI::App* count_cmd = app.add_subcommand("count", "Count satisfying assignments");
    count_cmd->add_option("instance", instance, "Formula or DIMACS file")->required();
    count_cmd->add_option("--relations", relations_path, "Extra relation definitions");
    count_cmd->add_option("--mod", mod, "Also report the count mod K");
    count_cmd->add_option("--engine", engine, "brute | affine | auto")
        ->check(CLI::IsMember({"brute", "affine", "auto"}));

    CLI::App* gadget_cmd = app.add_subcommand("gadget", "Compile a CNF into an independent-set gadget");
    gadget_cmd->add_option("instance", instance, "CNF (DIMACS or formula file)")->required();
    gadget_cmd->add_option("--relations", relations_path, "Extra relation definitions");
    gadget_cmd->add_option("--mode", mode, "parity | prime")->required();
    gadget_cmd->add_option("--p", p, "Prime modulus for --mode prime");
    gadget_cmd->add_option("--out", out_path, "Write the edge list here");
    gadget_cmd->add_option("--dot", dot_path, "Write Graphviz output here");

    CLI::App* reduce_cmd = app.add_subcommand("reduce", "Instance-to-instance reductions");
    reduce_cmd->add_option("--op", op, "graph2or2 | bip2or1 | xordouble | falsemerge")->required();
    reduce_cmd->add_option("instance", instance, "Input instance file")->required();
    reduce_cmd->add_option("--relations", relations_path, "Extra relation definitions");
    reduce_cmd->add_option("--left", left_csv, "Comma-separated left side for bip2or1");
    reduce_cmd->add_option("--out", out_path, "Write the result here");

    CLI::App* implement_cmd =
        app.add_subcommand("implement", "Search for a faithful implementation");
    implement_cmd->add_option("--relations", relations_path, "Relation-set file")->required();
    implement_cmd->add_option("--target", target_path, "Target function file (one relation)")
        ->required();
    implement_cmd->add_option("--out", out_path, "Write the witness here");
    add_bounds(implement_cmd);

    CLI::App* certify_cmd = app.add_subcommand("certify", "Emit the reduction certificate");
    certify_cmd->add_option("--relations", relations_path, "Relation-set file")->required();
    certify_cmd->add_option("--k", k, "Counting modulus")->required();
    add_bounds(certify_cmd);

    CLI::App* verify_cmd = app.add_subcommand("verify", "Cross-oracle congruence checks");
    verify_cmd->add_option("instance", instance, "Formula, DIMACS or graph file")->required();
    verify_cmd->add_option("--relations", relations_path, "Extra relation definitions");
    verify_cmd->add_option("--p", primes_csv, "Comma-separated primes for the prime-gadget check");
    verify_cmd->add_option("--counterexample", cx_path, "Counterexample output path");

    std::vector<std::string> argv_strings;
    argv_strings.reserve(args.size() + 1);
    argv_strings.push_back("modkcsp");
    argv_strings.insert(argv_strings.end(), args.begin(), args.end());
    std::vector<const char*> argv_ptrs;
    for (const auto& s : argv_strings) argv_ptrs.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv_ptrs.size()), argv_ptrs.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    auto started = std::chrono::steady_clock::now();
    try {
        Caps caps = caps_from_env();
        Invocation result;
        if (app.got_subcommand(classify_cmd)) {
            result = cmd_classify(relations_path, k, bounds);
        } else if (app.got_subcommand(count_cmd)) {
            result = cmd_count(instance, relations_path, mod, engine, caps);
        } else if (app.got_subcommand(gadget_cmd)) {
            result = cmd_gadget(instance, relations_path, mode, p, out_path, dot_path);
        } else if (app.got_subcommand(reduce_cmd)) {
            result = cmd_reduce(op, instance, relations_path, left_csv, out_path);
        } else if (app.got_subcommand(implement_cmd)) {
            result = cmd_implement(relations_path, target_path, bounds, out_path);
        } else if (app.got_subcommand(certify_cmd)) {
            result = cmd_certify(relations_path, k, bounds);
        } else {
            std::vector<std::uint64_t> primes;
            std::string current;
            for (char c : primes_csv + ",") {
                if (c == ',') {
                    if (!current.empty()) primes.push_back(std::stoull(current));
                    current.clear();
                } else if (!std::isspace(static_cast<unsigned char>(c))) {
                    current += c;
                }
            }
            result = cmd_verify(instance, relations_path, primes, cx_path, caps);
        }
        double elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
                .count();
        json report{{"command", join_args(args)},
                    {"inputs", result.inputs},
                    {"outputs", result.outputs},
                    {"timing_ms", elapsed_ms}};
        out << report.dump(2) << "\n";
        return result.exit_code;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ResourceError& e) {
        err << "resource error: " << e.what() << "\n";
        return kExitResourceError;
    } catch (const ContractError& e) {
        err << "contract violation: " << e.what() << "\n";
        return kExitContractError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitContractError;
    }
}

}  // namespace modkcsp

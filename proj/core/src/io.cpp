#include "modkcsp/io.hpp"

#include <algorithm>
#include <sstream>

namespace modkcsp {

namespace {

struct Line {
    int number;  // 1-based
    std::string text;
};

[[noreturn]] void fail(int line, const std::string& message) {
    throw InputError("line " + std::to_string(line) + ": " + message);
}

std::vector<Line> significant_lines(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        // trim
        auto begin = raw.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        auto end = raw.find_last_not_of(" \t\r");
        lines.push_back({number, raw.substr(begin, end - begin + 1)});
    }
    return lines;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> words;
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

bool is_identifier(const std::string& s) {
    if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

}  // namespace

RelationSet parse_relation_file(const std::string& text) {
    RelationSet set;
    auto lines = significant_lines(text);
    size_t i = 0;
    while (i < lines.size()) {
        auto words = split_ws(lines[i].text);
        if (words.size() != 3 || words[0] != "relation")
            fail(lines[i].number, "expected 'relation NAME ARITY'");
        if (!is_identifier(words[1])) fail(lines[i].number, "bad relation name '" + words[1] + "'");
        int arity = 0;
        try {
            arity = std::stoi(words[2]);
        } catch (const std::exception&) {
            fail(lines[i].number, "bad arity '" + words[2] + "'");
        }
        int header_line = lines[i].number;
        ++i;
        std::vector<Bits> tuples;
        bool closed = false;
        while (i < lines.size()) {
            if (lines[i].text == "end") {
                closed = true;
                ++i;
                break;
            }
            if (static_cast<int>(lines[i].text.size()) != arity)
                fail(lines[i].number, "tuple '" + lines[i].text + "' does not match arity " +
                                          std::to_string(arity));
            tuples.push_back(tuple_from_string(lines[i].text));
            if (std::count(tuples.begin(), tuples.end(), tuples.back()) > 1)
                fail(lines[i].number, "duplicate tuple '" + lines[i].text + "'");
            ++i;
        }
        if (!closed) fail(lines.back().number, "missing 'end' for relation '" + words[1] + "'");
        try {
            insert_relation(set, Relation(words[1], arity, std::move(tuples)));
        } catch (const InputError& e) {
            fail(header_line, e.what());
        }
    }
    return set;
}

std::string serialize_relations(const RelationSet& set) {
    std::string out;
    for (const auto& [name, r] : set) {
        out += "relation " + name + " " + std::to_string(r.arity()) + "\n";
        for (Bits t : r.satisfying()) out += tuple_to_string(t, r.arity()) + "\n";
        out += "end\n";
    }
    return out;
}

namespace {

// NAME(v1,v2,...) with optional spaces around commas.
std::pair<std::string, std::vector<std::string>> parse_application(int line,
                                                                   const std::string& text) {
    auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')')
        fail(line, "expected NAME(v,...), got '" + text + "'");
    std::string name = text.substr(0, open);
    if (!is_identifier(name)) fail(line, "bad relation name '" + name + "'");
    std::string body = text.substr(open + 1, text.size() - open - 2);
    std::vector<std::string> args;
    std::string current;
    for (char c : body + ",") {
        if (c == ',') {
            auto b = current.find_first_not_of(" \t");
            if (b == std::string::npos) fail(line, "empty argument in '" + text + "'");
            auto e = current.find_last_not_of(" \t");
            args.push_back(current.substr(b, e - b + 1));
            current.clear();
        } else {
            current += c;
        }
    }
    for (const auto& a : args)
        if (!is_identifier(a)) fail(line, "bad variable name '" + a + "'");
    return {name, args};
}

}  // namespace

Formula parse_formula_file(const std::string& text, const RelationSet& env) {
    auto lines = significant_lines(text);
    if (lines.empty()) throw InputError("empty formula file");
    auto header = split_ws(lines[0].text);
    if (header.empty() || header[0] != "vars")
        fail(lines[0].number, "formula file must start with 'vars ...'");
    Formula f;
    for (size_t j = 1; j < header.size(); ++j) {
        if (!is_identifier(header[j])) fail(lines[0].number, "bad variable name '" + header[j] + "'");
        try {
            f.add_variable(header[j]);
        } catch (const InputError& e) {
            fail(lines[0].number, e.what());
        }
    }
    for (size_t i = 1; i < lines.size(); ++i) {
        auto [name, args] = parse_application(lines[i].number, lines[i].text);
        auto it = env.find(name);
        if (it == env.end()) fail(lines[i].number, "unknown relation '" + name + "'");
        try {
            f.add_constraint(it->second, args);
        } catch (const InputError& e) {
            fail(lines[i].number, e.what());
        }
    }
    return f;
}

std::string serialize_formula(const Formula& f) {
    std::string out = "vars";
    for (const auto& v : f.variables()) out += " " + v;
    out += "\n";
    for (const auto& c : f.constraints()) {
        out += f.relations()[static_cast<size_t>(c.relation)].name() + "(";
        for (size_t j = 0; j < c.args.size(); ++j) {
            if (j) out += ",";
            out += f.variables()[static_cast<size_t>(c.args[j])];
        }
        out += ")\n";
    }
    return out;
}

Graph parse_graph_file(const std::string& text) {
    auto lines = significant_lines(text);
    if (lines.empty()) throw InputError("empty graph file");
    auto header = split_ws(lines[0].text);
    if (header.empty() || header[0] != "vertices")
        fail(lines[0].number, "graph file must start with 'vertices ...'");
    Graph g;
    for (size_t j = 1; j < header.size(); ++j) {
        if (!is_identifier(header[j])) fail(lines[0].number, "bad vertex label '" + header[j] + "'");
        try {
            g.add_vertex(header[j]);
        } catch (const InputError& e) {
            fail(lines[0].number, e.what());
        }
    }
    for (size_t i = 1; i < lines.size(); ++i) {
        auto words = split_ws(lines[i].text);
        if (words.size() != 3 || words[0] != "edge") fail(lines[i].number, "expected 'edge U V'");
        try {
            g.add_edge(words[1], words[2]);
        } catch (const InputError& e) {
            fail(lines[i].number, e.what());
        }
    }
    return g;
}

std::string serialize_graph(const Graph& g) {
    std::string out = "vertices";
    for (const auto& l : g.labels()) out += " " + l;
    out += "\n";
    for (auto [u, v] : g.edges()) out += "edge " + g.label(u) + " " + g.label(v) + "\n";
    return out;
}

Formula parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string token;
    long declared_vars = -1, declared_clauses = -1;
    // Header: comment lines, then "p cnf n m".
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        auto words = split_ws(line);
        if (words.empty() || words[0] == "c") continue;
        if (words[0] == "p") {
            if (words.size() != 4 || words[1] != "cnf")
                fail(line_number, "malformed DIMACS header, expected 'p cnf VARS CLAUSES'");
            try {
                declared_vars = std::stol(words[2]);
                declared_clauses = std::stol(words[3]);
            } catch (const std::exception&) {
                fail(line_number, "malformed DIMACS header counts");
            }
            if (declared_vars < 0 || declared_vars > 1000000 || declared_clauses < 0)
                fail(line_number, "DIMACS header out of range");
            break;
        }
        fail(line_number, "expected DIMACS header before clauses");
    }
    if (declared_vars < 0) throw InputError("missing DIMACS header");

    Formula f;
    for (long i = 0; i < declared_vars; ++i) f.add_variable("x" + std::to_string(i + 1));

    std::vector<std::pair<int, bool>> clause;  // (0-based var, negated)
    long clause_count = 0;
    while (std::getline(in, line)) {
        ++line_number;
        auto words = split_ws(line);
        if (!words.empty() && words[0] == "c") continue;
        for (const auto& w : words) {
            long lit = 0;
            try {
                lit = std::stol(w);
            } catch (const std::exception&) {
                fail(line_number, "bad literal '" + w + "'");
            }
            if (lit == 0) {
                if (clause.empty()) fail(line_number, "empty clause");
                Bits neg_mask = 0;
                std::vector<std::string> args;
                for (auto [var, neg] : clause) {
                    neg_mask = (neg_mask << 1) | static_cast<Bits>(neg);
                    args.push_back(f.variables()[static_cast<size_t>(var)]);
                }
                f.add_constraint(clause_relation(static_cast<int>(clause.size()), neg_mask), args);
                clause.clear();
                ++clause_count;
                continue;
            }
            long var = std::labs(lit);
            if (var > declared_vars)
                fail(line_number, "literal " + w + " exceeds declared variable count");
            std::pair<int, bool> entry{static_cast<int>(var - 1), lit < 0};
            if (std::find(clause.begin(), clause.end(), entry) == clause.end())
                clause.push_back(entry);
        }
    }
    if (!clause.empty()) throw InputError("last clause is not 0-terminated");
    if (clause_count != declared_clauses)
        throw InputError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                         std::to_string(clause_count));
    return f;
}

std::string serialize_dimacs(const Formula& cnf) {
    std::string body;
    long clauses = 0;
    for (const auto& c : cnf.constraints()) {
        const Relation& r = cnf.relations()[static_cast<size_t>(c.relation)];
        if (!r.is_clause())
            throw InputError("relation '" + r.name() + "' is not a clause relation");
        Bits miss = r.falsifying_tuple();
        for (int j = 0; j < r.arity(); ++j) {
            bool neg = tuple_bit(miss, r.arity(), j) == 1;
            body += (neg ? "-" : "") + std::to_string(c.args[static_cast<size_t>(j)] + 1) + " ";
        }
        body += "0\n";
        ++clauses;
    }
    return "p cnf " + std::to_string(cnf.num_variables()) + " " + std::to_string(clauses) + "\n" +
           body;
}

std::string emit_dot(const Graph& g) {
    std::string out = "graph G {\n";
    for (const auto& l : g.labels()) out += "  " + l + ";\n";
    for (auto [u, v] : g.edges()) out += "  " + g.label(u) + " -- " + g.label(v) + ";\n";
    out += "}\n";
    return out;
}

std::string serialize_witness(const ImplementationWitness& w) {
    std::string out = "function_vars";
    for (const auto& v : w.function_vars) out += " " + v;
    out += "\naux_vars";
    for (const auto& v : w.aux_vars) out += " " + v;
    out += "\n";
    for (const auto& c : w.constraints) {
        out += c.relation + "(";
        for (size_t j = 0; j < c.args.size(); ++j) {
            if (j) out += ",";
            out += c.args[j];
        }
        out += ")\n";
    }
    return out;
}

ImplementationWitness parse_witness_file(const std::string& text, const RelationSet& env) {
    auto lines = significant_lines(text);
    if (lines.size() < 2) throw InputError("witness file needs function_vars and aux_vars lines");
    auto fn = split_ws(lines[0].text);
    if (fn.empty() || fn[0] != "function_vars")
        fail(lines[0].number, "expected 'function_vars ...'");
    auto aux = split_ws(lines[1].text);
    if (aux.empty() || aux[0] != "aux_vars") fail(lines[1].number, "expected 'aux_vars ...'");
    ImplementationWitness w;
    w.function_vars.assign(fn.begin() + 1, fn.end());
    w.aux_vars.assign(aux.begin() + 1, aux.end());
    for (size_t i = 2; i < lines.size(); ++i) {
        auto [name, args] = parse_application(lines[i].number, lines[i].text);
        auto it = env.find(name);
        if (it == env.end()) fail(lines[i].number, "unknown relation '" + name + "'");
        insert_relation(w.relations, it->second);
        w.constraints.push_back({name, args});
    }
    // Surface malformed variable references now rather than at use.
    w.to_formula();
    return w;
}

InstanceFormat detect_format(const std::string& text) {
    auto lines = significant_lines(text);
    std::string first = lines.empty() ? "" : split_ws(lines[0].text)[0];
    if (first == "relation") return InstanceFormat::kRelationSet;
    if (first == "vars") return InstanceFormat::kFormula;
    if (first == "vertices") return InstanceFormat::kGraph;
    if (first == "p" || first == "c") return InstanceFormat::kDimacs;
    // Raw comment-only DIMACS files strip to nothing above.
    if (!text.empty() && text[0] == 'c') return InstanceFormat::kDimacs;
    throw InputError("unrecognized instance format");
}

std::string content_digest(const std::string& bytes) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = hex[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

}  // namespace modkcsp

#include "modkcsp/formula.hpp"

namespace modkcsp {

Formula::Formula(const std::vector<std::string>& variables) {
    for (const auto& v : variables) add_variable(v);
}

int Formula::add_variable(const std::string& name) {
    if (name.empty()) throw InputError("empty variable name");
    auto [it, inserted] = variable_index_.emplace(name, num_variables());
    if (!inserted) throw InputError("duplicate variable '" + name + "'");
    variables_.push_back(name);
    return it->second;
}

int Formula::variable_index(const std::string& name) const {
    auto it = variable_index_.find(name);
    return it == variable_index_.end() ? -1 : it->second;
}

int Formula::intern_relation(const Relation& r) {
    auto it = relation_index_.find(r.name());
    if (it != relation_index_.end()) {
        if (!(relations_[static_cast<size_t>(it->second)] == r))
            throw InputError("relation '" + r.name() + "' redefined with different content");
        return it->second;
    }
    int idx = static_cast<int>(relations_.size());
    relations_.push_back(r);
    relation_index_.emplace(r.name(), idx);
    return idx;
}

void Formula::add_constraint(const Relation& r, const std::vector<std::string>& arg_names) {
    std::vector<int> args;
    args.reserve(arg_names.size());
    for (const auto& a : arg_names) {
        int idx = variable_index(a);
        if (idx < 0) throw InputError("constraint references undeclared variable '" + a + "'");
        args.push_back(idx);
    }
    add_constraint(intern_relation(r), std::move(args));
}

void Formula::add_constraint(int relation_index, std::vector<int> args) {
    if (relation_index < 0 || relation_index >= static_cast<int>(relations_.size()))
        throw ContractError("relation index out of range");
    const Relation& r = relations_[static_cast<size_t>(relation_index)];
    if (static_cast<int>(args.size()) != r.arity())
        throw InputError("relation '" + r.name() + "' expects " + std::to_string(r.arity()) +
                         " arguments, got " + std::to_string(args.size()));
    for (int a : args)
        if (a < 0 || a >= num_variables()) throw ContractError("argument index out of range");
    constraints_.push_back({relation_index, std::move(args)});
}

RelationSet Formula::used_relations() const {
    RelationSet set;
    for (const auto& c : constraints_)
        insert_relation(set, relations_[static_cast<size_t>(c.relation)]);
    return set;
}

bool Assignment::get(const std::string& var) const {
    auto it = values_.find(var);
    if (it == values_.end()) throw InputError("assignment does not bind variable '" + var + "'");
    return it->second;
}

std::uint64_t Assignment::to_mask(const Formula& f) const {
    std::uint64_t mask = 0;
    for (int i = 0; i < f.num_variables(); ++i)
        if (get(f.variables()[static_cast<size_t>(i)])) mask |= std::uint64_t{1} << i;
    return mask;
}

}  // namespace modkcsp

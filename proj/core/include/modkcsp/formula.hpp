#pragma once

#include <map>
#include <string>
#include <vector>

#include "modkcsp/relation.hpp"

namespace modkcsp {

/// One relation applied to a tuple of formula variables. Repeated variables
/// are permitted; the relation is evaluated on the repeated-value tuple.
struct ConstraintApplication {
    int relation;           // index into Formula::relations()
    std::vector<int> args;  // indices into Formula::variables(), length == arity

    friend bool operator==(const ConstraintApplication&, const ConstraintApplication&) = default;
};

/// A conjunction of constraint applications over an ordered variable list.
/// Variables with no constraint are free and still count toward the
/// assignment space. Relations are interned by name into a per-formula table.
class Formula {
  public:
    Formula() = default;
    explicit Formula(const std::vector<std::string>& variables);

    int add_variable(const std::string& name);
    int variable_index(const std::string& name) const;  // -1 if absent
    bool has_variable(const std::string& name) const { return variable_index(name) >= 0; }

    int intern_relation(const Relation& r);
    void add_constraint(const Relation& r, const std::vector<std::string>& arg_names);
    void add_constraint(int relation_index, std::vector<int> args);

    int num_variables() const { return static_cast<int>(variables_.size()); }
    const std::vector<std::string>& variables() const { return variables_; }
    const std::vector<Relation>& relations() const { return relations_; }
    const std::vector<ConstraintApplication>& constraints() const { return constraints_; }

    /// The distinct relations used by at least one constraint.
    RelationSet used_relations() const;

  private:
    std::vector<std::string> variables_;
    std::map<std::string, int> variable_index_;
    std::vector<Relation> relations_;
    std::map<std::string, int> relation_index_;
    std::vector<ConstraintApplication> constraints_;
};

/// A total assignment of truth values, keyed by variable name.
class Assignment {
  public:
    Assignment() = default;
    Assignment(std::initializer_list<std::pair<const std::string, bool>> init) : values_(init) {}

    void set(const std::string& var, bool value) { values_[var] = value; }
    bool has(const std::string& var) const { return values_.count(var) != 0; }
    bool get(const std::string& var) const;

    /// Pack into the bit layout used by the enumeration loops: bit i holds
    /// the value of f.variables()[i]. Throws InputError on missing variables.
    std::uint64_t to_mask(const Formula& f) const;

  private:
    std::map<std::string, bool> values_;
};

}  // namespace modkcsp
